import csv
import io
import json
import subprocess
import sys

import pytest

from unfold.cli import main

TRIMODAL = "(1,2,5,7,10,3,6,8,9,4,11)"


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def test_analyze_golden(capsys):
    rc, out, _ = run(capsys, "analyze", TRIMODAL)
    rec = json.loads(out)
    assert rc == 0
    assert rec["orp"] == [3, 11] and rec["up"] == [5, 11]
    assert rec["mup"] == {"t": "5/11", "m": 1}
    assert "timings" not in rec


def test_analyze_two_cycle(capsys):
    rec = json.loads(run(capsys, "analyze", "(1 2)")[1])
    assert rec["up"] == [1, 2] and rec["interval"] == ["1/2", "1/2"]


def test_analyze_divergent(capsys):
    rec = json.loads(run(capsys, "analyze", "(1 3 4 2)")[1])
    assert rec["divergent"] is True
    assert rec["interval"] == ["0/1", "1/4"] and rec["interval_certified"] is False


@pytest.mark.parametrize("route", ["comb", "heave", "both"])
def test_routes_report_the_same(capsys, route):
    rec = json.loads(run(capsys, "analyze", TRIMODAL, "--route", route)[1])
    assert rec["up"] == [5, 11]


def test_analyze_extras(capsys):
    rec = json.loads(run(capsys, "analyze", "(1 2 3)", "--max-period", "3", "--timings")[1])
    assert [e["pattern"] for e in rec["spectrum"]] == ["(1)", "(1,2)", "(1,2,3)"]
    assert rec["timings"]["seconds"] >= 0


def test_analyze_csv(capsys):
    rows = list(csv.DictReader(io.StringIO(run(capsys, "analyze", TRIMODAL, "--format", "csv")[1])))
    assert rows[0]["orp"] == "(3,11)" and rows[0]["up"] == "(5,11)" and rows[0]["u_f"] == "1/3"


@pytest.mark.parametrize("bad", ["(1 2 2)", "(1)", "nonsense"])
def test_input_errors_exit_2(capsys, bad):
    rc, _, err = run(capsys, "analyze", bad)
    assert rc == 2 and "error" in err


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nope"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["render", "(1 2)", "X"])
    assert exc.value.code == 2


def test_route_mismatch_exits_3(capsys, monkeypatch):
    import unfold.unfolding as u
    from unfold.patterns import UnfoldingPair

    monkeypatch.setattr(u, "unfolding_number_via_heave", lambda P: UnfoldingPair(0, P.q))
    rc, _, err = run(capsys, "analyze", "(1 2 3)")
    assert rc == 3 and "mismatch" in err


@pytest.mark.parametrize("q,count", [(3, 2), (4, 6), (5, 24)])
def test_enumerate_counts(capsys, q, count):
    rc, out, _ = run(capsys, "enumerate", str(q))
    assert rc == 0
    assert len(list(csv.DictReader(io.StringIO(out)))) == count


def test_enumerate_sheer_filter(capsys):
    rows = list(csv.DictReader(io.StringIO(run(capsys, "enumerate", "5", "--sheer")[1])))
    assert 0 < len(rows) < 24
    for r in rows:
        assert r["sheer"] == "true"
        lo, q = map(int, r["orp"].strip("()").split(","))
        p, q2 = map(int, r["up"].strip("()").split(","))
        assert lo * q2 == p * q


def test_enumerate_other_filters(capsys):
    rows = list(csv.DictReader(io.StringIO(run(capsys, "enumerate", "5", "--divergent", "--no-interval")[1])))
    assert rows and all(r["divergent"] == "true" and r["u_f"] == "" for r in rows)
    rows = list(csv.DictReader(io.StringIO(run(capsys, "enumerate", "6", "--modality", "1", "--no-interval")[1])))
    assert all(r["modality"] == "1" for r in rows)


def test_enumerate_range(capsys):
    assert run(capsys, "enumerate", "11")[0] == 2
    assert run(capsys, "enumerate", "1")[0] == 2


def test_enumerate_pool_matches_serial(capsys):
    serial = run(capsys, "enumerate", "6", "--no-interval")[1]
    pooled = run(capsys, "enumerate", "6", "--no-interval", "--jobs", "2")[1]
    assert serial == pooled


def test_enumerate_json(capsys):
    recs = json.loads(run(capsys, "enumerate", "3", "--format", "json")[1])
    assert [r["pattern"] for r in recs] == ["(1,2,3)", "(1,3,2)"]


def test_verify_pass_and_seed(capsys):
    rc, out, _ = run(capsys, "verify", "divergent")
    assert rc == 0 and out.startswith("PASS divergent: 22 cases")
    rc, out, _ = run(capsys, "verify", "pouring", "--seed", "7")
    assert rc == 0 and "seed 7" in out


def test_verify_failing_suite_exits_3(capsys, monkeypatch):
    import unfold.cli as cli
    from unfold.suites import SuiteResult

    def broken():
        r = SuiteResult("routes", cases=1)
        r.fail("boom")
        return r

    monkeypatch.setitem(cli.SUITES, "routes", broken)
    rc, out, _ = run(capsys, "verify", "routes")
    assert rc == 3 and "FAIL" in out and "boom" in out


def test_render_to_file(tmp_path, capsys):
    out = tmp_path / "f.svg"
    assert run(capsys, "render", "(1 2)", "f", "--out", str(out))[0] == 0
    assert out.read_text().startswith("<svg")


def test_unwritable_output_exits_2(tmp_path, capsys):
    rc, _, err = run(capsys, "render", "(1 2)", "f", "--out", str(tmp_path / "missing" / "x.svg"))
    assert rc == 2


def test_spectrum(capsys):
    rc, out, _ = run(capsys, "spectrum", "(1 2 3)", "--max-period", "3")
    assert rc == 0 and out.splitlines()[0] == "period,pattern,orp,up,mup"
    assert len(out.splitlines()) == 4


def test_console_script_entry():
    res = subprocess.run([sys.executable, "-m", "unfold.cli", "analyze", "(1 2)"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["up"] == [1, 2]


def test_output_is_deterministic(capsys):
    a = run(capsys, "analyze", TRIMODAL, "--max-period", "4")[1]
    b = run(capsys, "analyze", TRIMODAL, "--max-period", "4")[1]
    assert a == b
