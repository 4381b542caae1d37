"""Sequence sources: the alternating harmonic sequence, an enumeration of
the rationals in an interval, and finite lists read from files.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from pathlib import Path
from typing import Callable, Iterator, Optional

from .errors import NotAMember, NotInjective
from .numerics import Interval, format_rational, parse_rational


@dataclass(frozen=True)
class SequenceSource:
    """``term_at(nu)`` for ``nu >= 1``; ``length`` is ``None`` when infinite."""

    kind: str
    term_at: Callable[[int], Fraction]
    length: Optional[int] = None
    description: str = ""

    def has(self, nu: int) -> bool:
        return nu >= 1 and (self.length is None or nu <= self.length)

    def terms(self, start: int = 1, stop: Optional[int] = None) -> Iterator[tuple[int, Fraction]]:
        """Yield ``(index, term)`` for ``start <= index <= stop``."""
        nu = start
        while (stop is None or nu <= stop) and self.has(nu):
            yield nu, self.term_at(nu)
            nu += 1

    def check_injective(self, prefix: int) -> None:
        seen: dict[Fraction, int] = {}
        for nu, x in self.terms(1, prefix):
            if x in seen:
                raise NotInjective(f"term {x} repeats at indices {seen[x]} and {nu}", seen[x], nu)
            seen[x] = nu


def harmonic_term(nu: int) -> Fraction:
    """``(-1)^nu / nu``."""
    if nu < 1:
        raise ValueError("index must be >= 1")
    return Fraction(-1 if nu % 2 else 1, nu)


def harmonic() -> SequenceSource:
    return SequenceSource("harmonic", harmonic_term, None, "(-1)^nu / nu")


def bijection_index(x) -> int:
    """Position of ``x`` under ``0 -> 1``, ``harmonic_term(nu) -> nu + 1``."""
    x = parse_rational(x)
    if x == 0:
        return 1
    if x.numerator not in (1, -1):
        raise NotAMember(f"{x} is not 0 or a harmonic term")
    nu = x.denominator
    if harmonic_term(nu) != x:
        raise NotAMember(f"{x} has the wrong sign for index {nu}")
    return nu + 1


def _height_walk(lo: Optional[Fraction], hi: Optional[Fraction]) -> Iterator[Fraction]:
    # Reduced p/q by height |p| + q, then q ascending, then +p before -p.
    negatives = lo is None or lo < 0

    def inside(p, q):
        # integer cross-multiplication, so rejected candidates stay cheap
        return ((lo is None or lo.numerator * q < p * lo.denominator)
                and (hi is None or p * hi.denominator < hi.numerator * q))

    h = 1
    while True:
        for q in range(1, h + 1):
            p = h - q
            if p == 0 and q != 1:
                continue
            pos = inside(p, q)
            neg = bool(p) and negatives and inside(-p, q)
            if not (pos or neg) or gcd(p, q) != 1:
                continue
            if pos:
                yield Fraction(p, q)
            if neg:
                yield Fraction(-p, q)
        h += 1


class _CachedWalk:
    """Memoizes a deterministic generator so ``term_at`` is random access."""

    def __init__(self, gen: Iterator[Fraction]):
        self._gen = gen
        self._terms: list[Fraction] = []
        self._lock = threading.Lock()

    def __call__(self, nu: int) -> Fraction:
        if nu < 1:
            raise ValueError("index must be >= 1")
        if nu > len(self._terms):
            with self._lock:
                while len(self._terms) < nu:
                    self._terms.append(next(self._gen))
        return self._terms[nu - 1]


def rationals_in(iv: Interval) -> SequenceSource:
    """Every rational of the open interval ``iv`` exactly once.

    Reduced fractions are walked in order of height ``|p| + q`` (then by
    denominator, positive before negative) and filtered to ``iv``. Each
    rational has one reduced form, so the walk is injective, and each is
    reached at a finite height.
    """
    walk = _CachedWalk(_height_walk(iv.lo, iv.hi))
    return SequenceSource("rationals_in", walk, None, f"rationals in {iv}")


def read_terms(lines) -> list[Fraction]:
    """Parse a sequence file body: one rational per line, ``#`` comments."""
    terms: list[Fraction] = []
    seen: dict[Fraction, int] = {}
    for lineno, raw in enumerate(lines, 1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            x = parse_rational(text)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if x in seen:
            raise NotInjective(f"line {lineno}: {x} already listed on line {seen[x]}", seen[x], lineno)
        seen[x] = lineno
        terms.append(x)
    return terms


def from_terms(terms, description: str = "list") -> SequenceSource:
    terms = [parse_rational(t) for t in terms]
    if len(set(terms)) != len(terms):
        raise NotInjective("list repeats a term")

    def term_at(nu: int) -> Fraction:
        if not 1 <= nu <= len(terms):
            raise IndexError(f"index {nu} outside 1..{len(terms)}")
        return terms[nu - 1]

    return SequenceSource("from_file", term_at, len(terms), description)


def from_file(path) -> SequenceSource:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        terms = read_terms(fh)
    return from_terms(terms, str(path))


def terms_to_json(source: SequenceSource, count: int) -> list[str]:
    return [format_rational(x) for _, x in source.terms(1, count)]
