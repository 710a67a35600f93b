"""Unfolding numbers of interval-map cycles, computed in exact rational arithmetic."""

from .patterns import (
    TWO_INF,
    Pattern,
    PatternError,
    modality,
    over_rotation_pair,
    parse_pattern,
    unfolding_index_set,
    unfolding_pair,
)

__version__ = "0.1.0"

__all__ = [
    "TWO_INF",
    "Pattern",
    "PatternError",
    "modality",
    "over_rotation_pair",
    "parse_pattern",
    "unfolding_index_set",
    "unfolding_pair",
]
