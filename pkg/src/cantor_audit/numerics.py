"""Exact scalars: rationals, canonical decimal digit streams, open intervals,
and class-tagged reals.

Rationals are :class:`fractions.Fraction` throughout. Fractions are always
stored in lowest terms with a positive denominator, which is exactly the
invariant the rest of the package relies on.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .errors import OutOfRange

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*[+-]?(\d+(\.\d*)?|\.\d+)(/\d+)?\s*$")


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, an integer, or a decimal literal exactly.

    Floats are rejected on purpose; ``Fraction(0.1)`` is not one tenth.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise ValueError(f"not an exact rational literal: {text!r}")
    try:
        return Fraction(text.strip())
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {text!r}") from None


def format_rational(q: Fraction) -> str:
    """Serialize as ``"num/den"`` (integers too, e.g. ``"-1/1"``)."""
    return f"{q.numerator}/{q.denominator}"


def parse_interval(text: str) -> "Interval":
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"interval must look like 'lo,hi', got {text!r}")
    return Interval(parse_rational(parts[0]), parse_rational(parts[1]))


# ---------------------------------------------------------------------------
# Intervals


@dataclass(frozen=True)
class Interval:
    """Open interval ``(lo, hi)`` with exact endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", parse_rational(self.lo))
        object.__setattr__(self, "hi", parse_rational(self.hi))
        if not self.lo < self.hi:
            raise ValueError(f"interval needs lo < hi, got ({self.lo}, {self.hi})")

    def __contains__(self, x) -> bool:
        return self.lo < x < self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def strictly_inside(self, other: "Interval") -> bool:
        """True if ``self`` is a proper subset of ``other``."""
        return other.lo <= self.lo and self.hi <= other.hi and self != other

    def to_json(self) -> dict:
        return {"lo": format_rational(self.lo), "hi": format_rational(self.hi)}

    def __str__(self):
        return f"({self.lo}, {self.hi})"


# ---------------------------------------------------------------------------
# Digit streams


@dataclass(frozen=True)
class DigitStream:
    """A decimal expansion ``0.d1 d2 d3 ...`` of a value in [0, 1).

    ``digit_at(n)`` is defined for every ``n >= 1``. ``eventually`` is an
    optional claim ``(position, digit)``: from ``position`` on every digit
    equals ``digit``. Streams built here never claim a tail of 9s.
    """

    digit_at: Callable[[int], int]
    provenance: str = "anonymous"
    eventually: Optional[tuple[int, int]] = field(default=None, compare=False)

    def prefix(self, k: int) -> tuple[int, ...]:
        return tuple(self.digit_at(n) for n in range(1, k + 1))

    def is_canonical(self, window: int = 64) -> bool:
        """Check the no-trailing-9s form on what can be checked finitely.

        A claimed constant tail must not be 9 and must actually hold on
        ``window`` digits past its start.
        """
        if self.eventually is None:
            return True
        start, digit = self.eventually
        if digit == 9:
            return False
        return all(self.digit_at(n) == digit for n in range(start, start + window))

    def __str__(self):
        return "0." + "".join(map(str, self.prefix(12))) + "..."


def rational_to_stream(q) -> DigitStream:
    """Canonical decimal expansion of a rational ``0 <= q < 1``.

    Terminating expansions are padded with zeros, never written with 9s.
    """
    q = parse_rational(q)
    if q < 0 or q >= 1:
        raise OutOfRange(f"{q} is outside [0, 1)")
    p, d = q.numerator, q.denominator

    def digit_at(n: int) -> int:
        if n < 1:
            raise ValueError("digit positions start at 1")
        return (p * 10**n // d) % 10

    # d = 2^a 5^b terminates after max(a, b) digits.
    m = d
    a = b = 0
    while m % 2 == 0:
        m //= 2
        a += 1
    while m % 5 == 0:
        m //= 5
        b += 1
    tail = (max(a, b) + 1, 0) if m == 1 else None
    return DigitStream(digit_at, provenance=f"rational {q}", eventually=tail)


def locate_first_difference(a: DigitStream, b: DigitStream, budget: int) -> Optional[int]:
    """Smallest position ``n <= budget`` where the digits differ.

    Returns ``None`` when the streams agree on all ``budget`` positions.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    for n in range(1, budget + 1):
        if a.digit_at(n) != b.digit_at(n):
            return n
    return None


def prefix_value(s: DigitStream, k: int) -> Fraction:
    """Exact value of the first ``k`` digits, ``sum d_n 10^-n``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return Fraction(int("".join(str(d) for d in s.prefix(k))), 10**k)


# ---------------------------------------------------------------------------
# Class-tagged reals


class NumberClass(str, enum.Enum):
    NATURAL = "natural"
    RATIONAL = "rational"
    ALGEBRAIC_IRRATIONAL = "algebraic-irrational"
    TRANSCENDENTAL = "transcendental"

    @property
    def is_algebraic(self) -> bool:
        return self is not NumberClass.TRANSCENDENTAL


@dataclass(frozen=True)
class SymbolInfo:
    name: str
    kind: NumberClass
    lower: Fraction
    upper: Fraction
    approx: Fraction

    @property
    def magnitude_bound(self) -> Fraction:
        return max(abs(self.lower), abs(self.upper))


# Declared valuation bounds are open; approximations are plot-only.
SYMBOLS: dict[str, SymbolInfo] = {
    "pi": SymbolInfo("pi", NumberClass.TRANSCENDENTAL, Fraction(3), Fraction(4), Fraction(355, 113)),
    "e": SymbolInfo("e", NumberClass.TRANSCENDENTAL, Fraction(2), Fraction(3), Fraction(193, 71)),
    "sqrt2": SymbolInfo("sqrt2", NumberClass.ALGEBRAIC_IRRATIONAL, Fraction(1), Fraction(2), Fraction(99, 70)),
}

DEFAULT_TRANSCENDENTAL = "pi"


def _value_class(v: Fraction) -> NumberClass:
    if v.denominator == 1 and v >= 0:
        return NumberClass.NATURAL
    return NumberClass.RATIONAL


@dataclass(frozen=True)
class TaggedReal:
    """``offset + scale * symbol`` with its number class carried along.

    Without a symbol the value is the rational ``offset`` and the class is
    read off it (natural for non-negative integers, rational otherwise).
    With a symbol the class is the symbol's kind, which survives any
    nonzero rational scaling and rational shift. The class is never
    decided numerically.
    """

    number_class: NumberClass
    offset: Fraction
    symbol: Optional[str] = None
    scale: Fraction = Fraction(0)

    def __post_init__(self):
        if self.symbol is None:
            if self.scale != 0:
                raise ValueError("scale requires a symbol")
            if self.number_class is not _value_class(self.offset):
                raise ValueError(f"{self.offset} cannot be tagged {self.number_class.value}")
        else:
            info = SYMBOLS.get(self.symbol)
            if info is None:
                raise ValueError(f"unknown symbol {self.symbol!r}")
            if self.scale == 0:
                raise ValueError("a symbolic value needs a nonzero scale")
            if self.number_class is not info.kind:
                raise ValueError(f"{self.symbol} values are {info.kind.value}")

    @classmethod
    def rational(cls, q) -> "TaggedReal":
        q = parse_rational(q)
        return cls(_value_class(q), q)

    natural = rational

    @classmethod
    def symbolic(cls, symbol: str, scale=1, offset=0) -> "TaggedReal":
        if symbol not in SYMBOLS:
            raise ValueError(f"unknown symbol {symbol!r}")
        return cls(SYMBOLS[symbol].kind, parse_rational(offset), symbol, parse_rational(scale))

    @property
    def render_approx(self) -> Fraction:
        """Rational stand-in for plotting and deviation bookkeeping."""
        if self.symbol is None:
            return self.offset
        return self.offset + self.scale * SYMBOLS[self.symbol].approx

    def enclosure(self) -> tuple[Fraction, Fraction]:
        """Closed rational bounds guaranteed to contain the value."""
        if self.symbol is None:
            return self.offset, self.offset
        info = SYMBOLS[self.symbol]
        ends = sorted((self.offset + self.scale * info.lower, self.offset + self.scale * info.upper))
        return ends[0], ends[1]

    def affine(self, scale, offset) -> "TaggedReal":
        """``scale * self + offset`` for rational ``scale != 0``."""
        scale, offset = parse_rational(scale), parse_rational(offset)
        if scale == 0:
            raise ValueError("scale must be nonzero")
        if self.symbol is None:
            return TaggedReal.rational(scale * self.offset + offset)
        return TaggedReal(self.number_class, scale * self.offset + offset, self.symbol, scale * self.scale)

    def to_json(self) -> dict:
        out = {"class": self.number_class.value, "offset": format_rational(self.offset)}
        if self.symbol is not None:
            out["symbol"] = self.symbol
            out["scale"] = format_rational(self.scale)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "TaggedReal":
        declared = NumberClass(obj["class"])
        offset = parse_rational(obj.get("offset", 0))
        symbol = obj.get("symbol")
        if symbol is None:
            value = cls.rational(offset)
            # "rational" is a valid, weaker tag for an integer; keep the finer one.
            if declared is not value.number_class and not (
                declared is NumberClass.RATIONAL and value.number_class is NumberClass.NATURAL
            ):
                raise ValueError(f"{offset} cannot be tagged {declared.value}")
            return value
        value = cls.symbolic(symbol, obj.get("scale", 1), offset)
        if declared is not value.number_class:
            raise ValueError(f"{symbol} values are {value.number_class.value}, not {declared.value}")
        return value

    def __str__(self):
        if self.symbol is None:
            return str(self.offset)
        s = f"{self.scale}*{self.symbol}" if self.scale != 1 else self.symbol
        return f"{self.offset}+{s}" if self.offset else s


def shifted_transcendental(target, radius, symbol: str = DEFAULT_TRANSCENDENTAL) -> TaggedReal:
    """A transcendental value within ``radius`` of a rational ``target``.

    Returns ``target + 10^-j * symbol`` for the smallest ``j >= 0`` with
    ``10^-j * |symbol| < radius`` over the symbol's declared bounds.
    """
    target, radius = parse_rational(target), parse_rational(radius)
    if radius <= 0:
        raise ValueError("radius must be positive")
    info = SYMBOLS[symbol]
    if info.kind is not NumberClass.TRANSCENDENTAL:
        raise ValueError(f"{symbol} is not transcendental")
    scale = Fraction(1)
    while scale * info.magnitude_bound >= radius:
        scale /= 10
    return TaggedReal.symbolic(symbol, scale, target)


# ---------------------------------------------------------------------------
# Verdicts


@dataclass(frozen=True)
class Verdict:
    check: str
    n_or_k: int
    result: bool
    witness: dict = field(default_factory=dict)

    def __bool__(self):
        return self.result

    def to_json(self) -> dict:
        return {"check": self.check, "n_or_k": self.n_or_k, "result": self.result, "witness": self.witness}
