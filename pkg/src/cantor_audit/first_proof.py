"""Nested-interval construction over a sequence of distinct rationals.

Starting from an open interval, the first two not-yet-scanned terms that
fall strictly inside it become the endpoints of the next interval. Whether
the chain is infinite cannot be decided for an arbitrary infinite source,
so every run is bounded by an explicit scan budget and says so in its
outcome.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .enumeration import SequenceSource
from .errors import NotInjective
from .numerics import Interval, format_rational


@dataclass(frozen=True)
class FiniteCase:
    """Fewer than two terms were found inside the interval."""

    found: tuple[tuple[int, Fraction], ...]
    scanned_to: int
    exhausted: bool  # the source itself ended, not just the budget

    @property
    def count(self) -> int:
        return len(self.found)


@dataclass(frozen=True)
class Step:
    interval: Interval
    consumed: tuple[int, int]


@dataclass(frozen=True)
class Converged:
    bounds: Interval
    name = "converged"


@dataclass(frozen=True)
class FiniteCaseWithinBudget:
    last: Interval
    witnesses_found: int
    eta: Fraction
    source_exhausted: bool
    name = "finite_case_within_budget"


@dataclass(frozen=True)
class BudgetExhausted:
    last: Interval
    scanned_to: int
    name = "budget_exhausted"


Outcome = Union[Converged, FiniteCaseWithinBudget, BudgetExhausted]


@dataclass(frozen=True)
class NestedRun:
    start: Interval
    steps: tuple[Step, ...]
    outcome: Outcome
    scan_budget: int

    @property
    def intervals(self) -> list[Interval]:
        return [self.start] + [s.interval for s in self.steps]

    @property
    def last_consumed(self) -> int:
        return self.steps[-1].consumed[1] if self.steps else 0

    def to_json(self) -> dict:
        out = {
            "start": self.start.to_json(),
            "steps": [
                {**s.interval.to_json(), "consumed": list(s.consumed)} for s in self.steps
            ],
            "outcome": self.outcome.name,
            "scan_budget": self.scan_budget,
        }
        o = self.outcome
        if isinstance(o, Converged):
            out["bounds"] = o.bounds.to_json()
        else:
            out["bounds"] = o.last.to_json()
        if isinstance(o, FiniteCaseWithinBudget):
            out["witnesses_found"] = o.witnesses_found
            out["eta"] = format_rational(o.eta)
            out["source_exhausted"] = o.source_exhausted
        if isinstance(o, BudgetExhausted):
            out["scanned_to"] = o.scanned_to
        return out


def next_interval(
    seq: SequenceSource,
    iv: Interval,
    scan_from: int,
    budget: int,
    seen: Optional[dict] = None,
) -> Union[tuple[Interval, int], FiniteCase]:
    """Scan indices ``scan_from..budget`` for the first two terms inside ``iv``.

    Returns the new interval (ordered by value) and the index after the
    second hit, or a :class:`FiniteCase`. ``seen`` maps term -> index and is
    updated in place so a caller can detect repeats across several scans.
    """
    if scan_from < 1:
        raise ValueError("scan_from must be >= 1")
    if seen is None:
        seen = {}
    found: list[tuple[int, Fraction]] = []
    nu = scan_from
    while nu <= budget and seq.has(nu):
        x = seq.term_at(nu)
        if x in seen and seen[x] != nu:
            raise NotInjective(f"term {x} repeats at indices {seen[x]} and {nu}", seen[x], nu)
        seen[x] = nu
        if x in iv:
            found.append((nu, x))
            if len(found) == 2:
                a, b = found[0][1], found[1][1]
                return Interval(min(a, b), max(a, b)), nu + 1
        nu += 1
    return FiniteCase(tuple(found), nu - 1, exhausted=not seq.has(nu))


def _pick_eta(iv: Interval, found) -> Fraction:
    eta = iv.midpoint
    if any(x == eta for _, x in found):
        eta = iv.lo + iv.width / 4
    return eta


def run_nested(seq: SequenceSource, start: Interval, depth: int, budget: int = 10**6) -> NestedRun:
    """Build a chain of ``depth`` nested intervals, ``start`` being the first.

    ``depth = 1`` is the start interval alone; each further level consumes
    two terms. With the alternating harmonic sequence and start
    ``(-1, 1/2)``, depth 50 ends at ``(-1/99, 1/100)``.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    seen: dict = {}
    steps: list[Step] = []
    iv = start
    scan_from = 1
    for _ in range(depth - 1):
        if scan_from > budget and seq.has(scan_from):
            return NestedRun(start, tuple(steps), BudgetExhausted(iv, scan_from - 1), budget)
        res = next_interval(seq, iv, scan_from, budget, seen)
        if isinstance(res, FiniteCase):
            outcome = FiniteCaseWithinBudget(iv, res.count, _pick_eta(iv, res.found), res.exhausted)
            return NestedRun(start, tuple(steps), outcome, budget)
        new_iv, after = res
        i, j = sorted((seen[new_iv.lo], seen[new_iv.hi]))
        steps.append(Step(new_iv, (i, j)))
        iv, scan_from = new_iv, after
    return NestedRun(start, tuple(steps), Converged(iv), budget)


@dataclass(frozen=True)
class MembershipAudit:
    checked: int
    violations: tuple[tuple[int, Fraction], ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "checked": self.checked,
            "violations": [{"index": i, "term": format_rational(x)} for i, x in self.violations],
        }


def audit_members_outside(run: NestedRun, seq: SequenceSource) -> MembershipAudit:
    """Every term up to the last consumed index must avoid the final interval."""
    if not isinstance(run.outcome, Converged):
        raise ValueError("audit needs a converged run")
    bounds = run.outcome.bounds
    bad = tuple((nu, x) for nu, x in seq.terms(1, run.last_consumed) if x in bounds)
    return MembershipAudit(run.last_consumed, bad)
