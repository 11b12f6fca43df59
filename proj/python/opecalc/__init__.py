"""Exact operator product expansions of chiral fields."""

from ._core import (
    Algebra,
    OpecalcError,
    load_algebra_file,
    load_preset,
    parse_algebra,
    preset_names,
    pole_derivative,
    run,
)

__all__ = [
    "Algebra",
    "OpecalcError",
    "load_algebra_file",
    "load_preset",
    "parse_algebra",
    "preset_names",
    "pole_derivative",
    "run",
]
