"""Exhaustive audit of ``M = {i : i not in s(i)}`` over every map
``s: {1..n} -> subsets of {1..n}`` for small ``n``.

Subsets are bitmasks: element ``i`` is bit ``i - 1``. Maps are enumerated
in lexicographic order of their image tuples, so any counterexample is
reported reproducibly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import AuditFailure

MAX_GROUND = 4


def members(mask: int, n: int) -> list[int]:
    return [i for i in range(1, n + 1) if mask >> (i - 1) & 1]


def to_mask(elements) -> int:
    mask = 0
    for i in elements:
        mask |= 1 << (i - 1)
    return mask


@dataclass(frozen=True)
class MappingTable:
    ground_size: int
    images: tuple[int, ...]  # images[i - 1] is the bitmask of s(i)

    def __post_init__(self):
        n = self.ground_size
        if not 1 <= n <= MAX_GROUND:
            raise ValueError(f"ground size must be in 1..{MAX_GROUND}")
        if len(self.images) != n:
            raise ValueError(f"need {n} images, got {len(self.images)}")
        full = (1 << n) - 1
        if any(m & ~full or m < 0 for m in self.images):
            raise ValueError("image outside the ground set")

    @classmethod
    def from_sets(cls, sets) -> "MappingTable":
        sets = list(sets)
        return cls(len(sets), tuple(to_mask(s) for s in sets))

    def image(self, i: int) -> int:
        return self.images[i - 1]

    def with_image(self, i: int, mask: int) -> "MappingTable":
        images = list(self.images)
        images[i - 1] = mask
        return MappingTable(self.ground_size, tuple(images))

    def to_json(self) -> list[list[int]]:
        return [members(m, self.ground_size) for m in self.images]


def _m_mask(images, n: int) -> int:
    m = 0
    for i in range(n):
        if not images[i] >> i & 1:
            m |= 1 << i
    return m


def build_M(s: MappingTable) -> int:
    """Bitmask of ``{i : i not in s(i)}``."""
    return _m_mask(s.images, s.ground_size)


@dataclass(frozen=True)
class RangeVerdict:
    mapping: MappingTable
    M: int
    witnesses: tuple[int, ...]  # element i separates M from s(i)
    first_differences: tuple[int, ...]  # smallest element where M and s(i) differ

    @property
    def not_in_range(self) -> bool:
        return all(w is not None for w in self.witnesses)

    def to_json(self) -> dict:
        n = self.mapping.ground_size
        return {
            "mapping": self.mapping.to_json(),
            "M": members(self.M, n),
            "not_in_range": self.not_in_range,
            "witnesses": list(self.witnesses),
            "first_differences": list(self.first_differences),
        }


def verify_M_not_in_range(s: MappingTable) -> RangeVerdict:
    """Check ``M != s(i)`` for every ``i``.

    The witness for ``i`` is ``i`` itself, whose membership always differs
    between ``M`` and ``s(i)``; the smallest differing element is reported
    alongside.
    """
    n = s.ground_size
    M = build_M(s)
    witnesses = []
    firsts = []
    for i in range(1, n + 1):
        diff = M ^ s.image(i)
        witnesses.append(i if diff >> (i - 1) & 1 else None)
        firsts.append((diff & -diff).bit_length() if diff else None)
    return RangeVerdict(s, M, tuple(witnesses), tuple(firsts))


def all_mappings(n: int):
    if not 1 <= n <= MAX_GROUND:
        raise ValueError(f"n must be in 1..{MAX_GROUND}")
    return itertools.product(range(1 << n), repeat=n)


def exhaustive_audit(n: int) -> int:
    """Verify ``M`` is outside the range of every one of the ``(2^n)^n`` maps.

    Cost grows as ``2^(n*n)``: 2, 16, 512, 65536 maps for n = 1..4, which is
    why ``n`` is capped at 4. Raises :class:`AuditFailure` on a counterexample.
    """
    count = 0
    for images in all_mappings(n):
        s = MappingTable(n, images)
        verdict = verify_M_not_in_range(s)
        if not verdict.not_in_range:
            raise AuditFailure(f"M = {members(verdict.M, n)} is in the range of {s.to_json()}", s)
        count += 1
    return count


def oscillation_trace(s: MappingTable, m: int, steps: int) -> list[bool]:
    """Membership of ``m`` while forcing ``s(m)`` to be ``M``.

    Start with ``s`` as given and record whether ``m`` is in ``s(m)``. Then
    rebuild ``M`` from the current map, install it as the new ``s(m)``, and
    record again. Only ``m``'s own bit changes, and it flips every time.
    """
    n = s.ground_size
    if not 1 <= m <= n:
        raise ValueError(f"m must be in 1..{n}")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    trace = []
    current = s
    for _ in range(steps):
        trace.append(bool(current.image(m) >> (m - 1) & 1))
        current = current.with_image(m, build_M(current))
    return trace


def trace_labels(trace) -> list[str]:
    return ["in" if t else "out" for t in trace]


def has_period_two(trace) -> bool:
    return all(a != b for a, b in zip(trace, trace[1:]))


def audit_report(n: int, steps: int = 8, samples: int = 3) -> dict:
    """JSON-ready ``{n, mappings_checked, failures, sample_traces}``."""
    failures = []
    try:
        checked = exhaustive_audit(n)
    except AuditFailure as exc:
        checked = None
        failures.append(exc.witness.to_json())
    traces = []
    maps = list(itertools.islice(all_mappings(n), samples))
    for images in maps:
        s = MappingTable(n, images)
        trace = oscillation_trace(s, 1, steps)
        traces.append({
            "mapping": s.to_json(),
            "m": 1,
            "trace": trace_labels(trace),
            "period_two": has_period_two(trace),
        })
    return {"n": n, "mappings_checked": checked, "failures": failures, "sample_traces": traces}
