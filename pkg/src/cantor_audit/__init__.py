"""Exact-arithmetic constructions around nested intervals, diagonal
arguments, power sets, and paths in punctured planes."""

from .numerics import (
    DigitStream,
    Interval,
    NumberClass,
    TaggedReal,
    locate_first_difference,
    prefix_value,
    rational_to_stream,
    shifted_transcendental,
)

__version__ = "0.1.0"
