"""Command-line front end.

Exit codes: 0 on success, 2 for bad input, 3 when an internal cross-check or a
verification suite fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from multiprocessing import Pool

from .forcing import forced_spectrum, spectrum_csv
from .patterns import (
    Pattern,
    PatternError,
    all_patterns,
    is_convergent,
    is_divergent,
    is_sheer,
    modality,
    parse_pattern,
    pattern_record,
)
from .render import WHICH, render_svg
from .suites import DEFAULT_SEED, SEEDED, SUITES
from .unfolding import RouteMismatch, pattern_report

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 2, 3

CSV_FIELDS = [
    "pattern", "period", "orp", "up", "mup", "modality", "divergent", "sheer",
    "u_f", "interval_lo", "interval_hi", "interval_certified",
]


class InputError(Exception):
    pass


def _pattern(text: str):
    try:
        return parse_pattern(text)
    except PatternError as exc:
        raise InputError(str(exc)) from None


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {out}: {exc}") from None


def _csv_row(rec: dict) -> dict:
    row = {
        "pattern": rec["pattern"],
        "period": rec["period"],
        "orp": "({},{})".format(*rec["orp"]),
        "up": "({},{})".format(*rec["up"]),
        "mup": "({};{})".format(rec["mup"]["t"], rec["mup"]["m"]),
        "modality": rec["modality"],
        "divergent": str(rec["divergent"]).lower(),
        "sheer": str(rec["sheer"]).lower(),
    }
    if "interval" in rec:
        u = rec["u_f"]
        row["u_f"] = u["exact"] if "exact" in u else "({},{})".format(*u["bracket"])
        row["interval_lo"], row["interval_hi"] = rec["interval"]
        row["interval_certified"] = str(rec["interval_certified"]).lower()
    return row


def records_csv(records) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, CSV_FIELDS, lineterminator="\n", restval="")
    w.writeheader()
    for rec in records:
        w.writerow(_csv_row(rec))
    return buf.getvalue()


def _dump(records, fmt: str, single: bool = False) -> str:
    if fmt == "csv":
        return records_csv(records)
    return json.dumps(records[0] if single else records, indent=2) + "\n"


def _spectrum_json(entries) -> list[dict]:
    return [
        {
            "period": e.period,
            "pattern": e.pattern.cycle_notation(),
            "orp": None if e.orp is None else [e.orp.l, e.orp.q],
            "up": None if e.up is None else [e.up.p, e.up.q],
        }
        for e in entries
    ]


# -- analyze ---------------------------------------------------------------------------

def cmd_analyze(args) -> int:
    P = _pattern(args.pattern)
    if P.q < 2:
        raise InputError("analysis needs a pattern of period at least 2")
    t = time.perf_counter()
    try:
        rec = pattern_report(P, args.route, args.max_den)
    except RouteMismatch as exc:
        print(f"route mismatch: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    if args.max_period:
        rec["spectrum"] = _spectrum_json(forced_spectrum(P, args.max_period))
    if args.timings:
        rec["timings"] = {"seconds": round(time.perf_counter() - t, 6)}
    _emit(_dump([rec], args.format, single=True), args.out)
    return EXIT_OK


# -- enumerate -------------------------------------------------------------------------

def _keep(P, args) -> bool:
    if args.sheer and not is_sheer(P):
        return False
    if args.divergent and not is_divergent(P):
        return False
    if args.convergent and not is_convergent(P):
        return False
    if args.modality is not None and modality(P) != args.modality:
        return False
    return True


def _record_task(task):
    images, route, max_den, with_interval = task
    P = Pattern(images)
    if not with_interval:
        return pattern_record(P)
    return pattern_report(P, route, max_den)


def cmd_enumerate(args) -> int:
    if not 2 <= args.q <= 10:
        raise InputError("q must satisfy 2 <= q <= 10")
    if args.modality is not None and args.modality < 1:
        raise InputError("--modality must be positive")
    tasks = [
        (P.images, args.route, args.max_den, not args.no_interval)
        for P in all_patterns(args.q)
        if _keep(P, args)
    ]
    try:
        if args.jobs > 1:
            with Pool(args.jobs) as pool:
                records = pool.map(_record_task, tasks, chunksize=64)
        else:
            records = [_record_task(t) for t in tasks]
    except RouteMismatch as exc:
        print(f"route mismatch: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    records.sort(key=lambda r: r["images"])
    _emit(_dump(records, args.format), args.out)
    return EXIT_OK


# -- verify ----------------------------------------------------------------------------

def cmd_verify(args) -> int:
    fn = SUITES[args.suite]
    kwargs = {"seed": args.seed} if args.suite in SEEDED else {}
    res = fn(**kwargs)
    lines = [res.summary(), *("  note: " + n for n in res.notes), *("  " + f for f in res.failures)]
    if res.failed > len(res.failures):
        lines.append(f"  ... {res.failed - len(res.failures)} more")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if res.passed else EXIT_INVARIANT


# -- render / spectrum -----------------------------------------------------------------

def cmd_render(args) -> int:
    P = _pattern(args.pattern)
    if args.which != "f" and P.q < 2:
        raise InputError("heaved graphs need period at least 2")
    _emit(render_svg(P, args.which), args.out)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    P = _pattern(args.pattern)
    if args.max_period < 1:
        raise InputError("--max-period must be positive")
    entries = forced_spectrum(P, args.max_period)
    if args.format == "csv":
        text = spectrum_csv(entries)
    else:
        text = json.dumps(_spectrum_json(entries), indent=2) + "\n"
    _emit(text, args.out)
    return EXIT_OK


# -- parser ----------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--route", choices=("comb", "heave", "both"), default="both")
    common.add_argument("--max-den", type=int, default=64, metavar="D",
                        help="largest denominator tried when certifying rotation numbers")
    common.add_argument("--format", choices=("json", "csv"), help="default: json for analyze, csv otherwise")
    common.add_argument("--out", metavar="PATH", help="write to PATH instead of stdout")

    p = _Parser(prog="unfold", description="Unfolding numbers and related invariants of cyclic patterns.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", parents=[common], help="full record for one pattern")
    a.add_argument("pattern")
    a.add_argument("--max-period", type=int, default=0, metavar="N",
                   help="also list the patterns forced up to period N")
    a.add_argument("--timings", action="store_true", help="include wall-clock timing")
    a.set_defaults(func=cmd_analyze)

    e = sub.add_parser("enumerate", parents=[common], help="records for all patterns of period q")
    e.add_argument("q", type=int)
    e.add_argument("--sheer", action="store_true")
    e.add_argument("--divergent", action="store_true")
    e.add_argument("--convergent", action="store_true")
    e.add_argument("--modality", type=int)
    e.add_argument("--no-interval", action="store_true",
                   help="skip the (slower) unfolding interval fields")
    e.add_argument("--jobs", type=int, default=1, help="worker processes")
    e.set_defaults(func=cmd_enumerate)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--out", metavar="PATH")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("render", help="SVG graph of f, g, F, Fl or Fu")
    r.add_argument("pattern")
    r.add_argument("which", choices=WHICH)
    r.add_argument("--out", metavar="PATH")
    r.set_defaults(func=cmd_render)

    s = sub.add_parser("spectrum", parents=[common], help="patterns forced up to a period")
    s.add_argument("pattern")
    s.add_argument("--max-period", type=int, default=6, metavar="N")
    s.set_defaults(func=cmd_spectrum)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "format", "") is None:
        args.format = "json" if args.command == "analyze" else "csv"
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
