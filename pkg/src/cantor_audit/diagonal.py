"""Digit diagonalization on lists of decimal expansions, the
``0.0, 0.10, 0.110, ...`` list and its diagonal, and the diagonal over a
finite family of integer-valued functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence

from .errors import InvalidRule, NoDifferenceWithinPrefix, NotInjective
from .numerics import (
    DigitStream,
    Verdict,
    format_rational,
    locate_first_difference,
    parse_rational,
    prefix_value,
    rational_to_stream,
)


@dataclass(frozen=True)
class ListView:
    row_at: Callable[[int], DigitStream]
    name: str
    length: Optional[int] = None

    def rows(self, k: int) -> list[DigitStream]:
        if self.length is not None and k > self.length:
            raise IndexError(f"list {self.name!r} has only {self.length} rows")
        return [self.row_at(n) for n in range(1, k + 1)]

    def check_injective(self, rows: int, budget: int) -> None:
        """Raise if two of the first ``rows`` rows agree on ``budget`` digits."""
        prefixes: dict[tuple, int] = {}
        for n, row in enumerate(self.rows(rows), 1):
            key = row.prefix(budget)
            if key in prefixes:
                raise NotInjective(
                    f"rows {prefixes[key]} and {n} agree on {budget} digits", prefixes[key], n
                )
            prefixes[key] = n


@dataclass(frozen=True)
class ReplacementRule:
    """Digit substitution ``a -> mapping[a]`` with ``b != a`` and ``1 <= b <= 8``.

    Keeping replacements away from 0 and 9 means the diagonal can never be
    a number with two decimal expansions.
    """

    mapping: tuple[int, ...]

    def __post_init__(self):
        if len(self.mapping) != 10:
            raise InvalidRule("a rule maps each of the ten digits")
        for a, b in enumerate(self.mapping):
            if b == a or not 1 <= b <= 8:
                raise InvalidRule(f"digit {a} -> {b} breaks b != a, 1 <= b <= 8")

    def __call__(self, a: int) -> int:
        return self.mapping[a]

    def spec(self) -> str:
        return "".join(map(str, self.mapping))


# 0 -> 1 as in the 0.0, 0.10, 0.110 example; 1 has to go elsewhere.
DEFAULT_RULE = ReplacementRule((1, 2, 1, 1, 1, 1, 1, 1, 1, 1))


def parse_rule(text: str) -> ReplacementRule:
    """``"default"`` or ten digits giving the images of 0..9."""
    if text == "default":
        return DEFAULT_RULE
    if len(text) != 10 or not text.isdigit():
        raise InvalidRule(f"rule must be 'default' or ten digits, got {text!r}")
    return ReplacementRule(tuple(int(c) for c in text))


def build_diagonal(lst: ListView, rule: ReplacementRule, k: int) -> tuple[int, ...]:
    if k < 1:
        raise ValueError("k must be >= 1")
    return tuple(rule(lst.row_at(n).digit_at(n)) for n in range(1, k + 1))


def diagonal_stream(lst: ListView, rule: ReplacementRule = DEFAULT_RULE) -> DigitStream:
    return DigitStream(lambda n: rule(lst.row_at(n).digit_at(n)), provenance=f"diagonal of {lst.name}")


def locate_escape(lst: ListView, diagonal: Sequence[int], n: int) -> int:
    """First position where the diagonal prefix and row ``n`` differ."""
    if not 1 <= n <= len(diagonal):
        raise ValueError(f"row {n} is beyond the diagonal prefix of length {len(diagonal)}")
    row = lst.row_at(n)
    for j, d in enumerate(diagonal, 1):
        if row.digit_at(j) != d:
            return j
    raise NoDifferenceWithinPrefix(f"row {n} agrees with the diagonal on {len(diagonal)} digits")


# ---------------------------------------------------------------------------
# Lists


def table2_row(n: int) -> DigitStream:
    """Row ``n``: ``n - 1`` ones then zeros (0.000..., 0.1000..., 0.11000...)."""
    if n < 1:
        raise ValueError("rows start at 1")
    return DigitStream(lambda j: 1 if j < n else 0, provenance=f"table2 row {n}", eventually=(n, 0))


def table2_list() -> ListView:
    return ListView(table2_row, "table2")


def rational_list(values, name: str = "rationals") -> ListView:
    values = [parse_rational(v) for v in values]
    if len(set(values)) != len(values):
        raise NotInjective("list repeats a value")
    streams = [rational_to_stream(v) for v in values]

    def row_at(n: int) -> DigitStream:
        if not 1 <= n <= len(streams):
            raise IndexError(f"row {n} outside 1..{len(streams)}")
        return streams[n - 1]

    return ListView(row_at, name, len(streams))


def read_list(lines, name: str = "list") -> ListView:
    """Parse a list file: one decimal or ``p/q`` row per line, or ``table2``."""
    values = []
    for lineno, raw in enumerate(lines, 1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        if text == "table2":
            if values:
                raise ValueError(f"line {lineno}: 'table2' must be the only entry")
            return table2_list()
        try:
            values.append(parse_rational(text))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if not values:
        raise ValueError("list file has no rows")
    return rational_list(values, name)


def list_from_file(path) -> ListView:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        return read_list(fh, str(path))


# ---------------------------------------------------------------------------
# Audits of the table2 list


def table2_prefix_identity(n: int, diagonal: Optional[Sequence[int]] = None) -> Verdict:
    """The diagonal's first ``n`` digits are exactly row ``n + 1``'s first ``n``.

    Also reports where the two part ways: row ``n + 1`` continues with 0,
    the diagonal with 1, so the first difference is at ``n + 1``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if diagonal is None or len(diagonal) < n + 1:
        diagonal = build_diagonal(table2_list(), DEFAULT_RULE, n + 1)
    row = table2_row(n + 1)
    agree = all(row.digit_at(j) == diagonal[j - 1] for j in range(1, n + 1))
    divergence = locate_first_difference(
        DigitStream(lambda j: diagonal[j - 1]), row, n + 1
    )
    return Verdict(
        "table2_prefix_identity",
        n,
        agree and divergence == n + 1,
        {"row": n + 1, "agree_places": n if agree else None, "divergence_at": divergence},
    )


def table2_limit_check(k: int) -> Verdict:
    """``|prefix(diagonal, k) - 1/9| <= 10^-k`` and every row ``n <= k`` escapes."""
    if k < 1:
        raise ValueError("k must be >= 1")
    lst = table2_list()
    diag = build_diagonal(lst, DEFAULT_RULE, k)
    stream = DigitStream(lambda j: diag[j - 1])
    gap = abs(prefix_value(stream, k) - Fraction(1, 9))
    within = gap <= Fraction(1, 10**k)
    bad = [n for n in range(1, k + 1) if locate_escape(lst, diag, n) != n]
    return Verdict(
        "table2_limit_check",
        k,
        within and not bad,
        {"gap": format_rational(gap), "gap_within_bound": within, "escapes_verified": k - len(bad),
         "bad_rows": bad[:10]},
    )


def table2_audit(k: int) -> dict:
    """All three table2 facts at once, sharing one diagonal prefix."""
    lst = table2_list()
    diag = build_diagonal(lst, DEFAULT_RULE, k + 1)
    identity_failures = [n for n in range(1, k + 1) if not table2_prefix_identity(n, diag)]
    escapes = [locate_escape(lst, diag[:k], n) for n in range(1, k + 1)]
    escape_failures = [n for n, pos in enumerate(escapes, 1) if pos != n]
    limit = table2_limit_check(k)
    return {
        "k": k,
        "prefix_identity": {"checked": k, "failures": identity_failures[:10]},
        "escape": {"checked": k, "failures": escape_failures[:10]},
        "limit": limit.to_json(),
        "ok": not identity_failures and not escape_failures and limit.result,
    }


# ---------------------------------------------------------------------------
# Function families on dyadic grids


def dyadic_grid(depth: int) -> tuple[Fraction, ...]:
    if depth < 0:
        raise ValueError("depth must be >= 0")
    return tuple(Fraction(i, 2**depth) for i in range(2**depth))


@dataclass(frozen=True)
class FunctionFamily:
    """``table(y, x)`` is the value of the function paired with ``y`` at ``x``."""

    grid: tuple[Fraction, ...]
    table: Callable[[Fraction, Fraction], int]

    def __post_init__(self):
        if not self.grid:
            raise ValueError("grid must be nonempty")
        if list(self.grid) != sorted(set(self.grid)):
            raise ValueError("grid must be sorted without repeats")
        if not all(0 <= y < 1 for y in self.grid):
            raise ValueError("grid points must lie in [0, 1)")


def build_g(fam: FunctionFamily) -> dict[Fraction, int]:
    return {y: fam.table(y, y) + 1 for y in fam.grid}


def verify_g_escapes(fam: FunctionFamily, g: dict) -> Verdict:
    bad = [y for y in fam.grid if g[y] == fam.table(y, y)]
    return Verdict(
        "g_escapes",
        len(fam.grid),
        not bad,
        {"first_failure": format_rational(bad[0]) if bad else None},
    )


class _DifferenceSystem:
    """Constraints ``a - b = c`` over integer unknowns, by weighted union-find."""

    def __init__(self):
        self.parent: dict = {}
        self.offset: dict = {}  # value(v) = value(parent(v)) + offset(v)

    def find(self, v):
        if v not in self.parent:
            self.parent[v] = v
            self.offset[v] = 0
            return v, 0
        path = []
        while self.parent[v] != v:
            path.append(v)
            v = self.parent[v]
        root, total = v, 0
        for u in reversed(path):
            total += self.offset[u]
            self.offset[u] = total
            self.parent[u] = root
        return root, (self.offset[path[0]] if path else 0)

    def add(self, a, b, c) -> Optional[int]:
        """Record ``a - b = c``; on conflict return the implied ``a - b``."""
        ra, oa = self.find(a)
        rb, ob = self.find(b)
        if ra == rb:
            implied = oa - ob
            return None if implied == c else implied
        self.parent[ra] = rb
        self.offset[ra] = c + ob - oa
        return None

    def model(self) -> dict:
        return {v: self.find(v)[1] for v in list(self.parent)}


@dataclass(frozen=True)
class ConsistencyResult:
    depth: int
    satisfiable: bool
    witness: dict

    @property
    def status(self) -> str:
        return "SAT" if self.satisfiable else "UNSAT"

    def to_json(self) -> dict:
        return {"check": "eq7_consistency", "n_or_k": self.depth, "result": self.status, "witness": self.witness}


def _label(v) -> str:
    if v[0] == "g":
        return f"g({v[1]})"
    return f"f_{v[1]}({v[2]})"


def eq7_constraints(depth: int, with_eq7: bool = True) -> list[tuple]:
    """The system as ``(a, b, c)`` triples meaning ``a - b = c``.

    Unknowns are ``("g", y)`` and ``("f", y, x)``. Diagonal constraints
    ``g(y) = f_y(y) + 1`` come first; then, for every grid ``y`` whose image
    ``(1 + y) / 2`` is on the grid, ``f_{(1+y)/2}(x) = g(x)`` for all ``x``.
    """
    grid = dyadic_grid(depth)
    on_grid = set(grid)
    cons = [(("g", y), ("f", y, y), 1) for y in grid]
    if with_eq7:
        for y in grid:
            y2 = (1 + y) / 2
            if y2 in on_grid:
                cons.extend(((("f", y2, x), ("g", x), 0)) for x in grid)
    return cons


def eq7_consistency_check(depth: int, with_eq7: bool = True) -> ConsistencyResult:
    """Decide whether the diagonal function can also be one of the family.

    Requiring the function paired with ``(1 + y) / 2`` to equal the
    diagonal function ``g`` while ``g(y) = f_y(y) + 1`` on the whole grid
    forces ``g(y') = g(y') + 1`` at ``y' = (1 + y) / 2``.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    system = _DifferenceSystem()
    for a, b, c in eq7_constraints(depth, with_eq7):
        implied = system.add(a, b, c)
        if implied is not None:
            y2, x = a[1], a[2]
            witness = {
                "y": format_rational(2 * y2 - 1),
                "y_prime": format_rational(y2),
                "constraint": f"{_label(a)} = {_label(b)}" + (f" + {c}" if c else ""),
                "implied": f"{_label(a)} = {_label(b)} {'+' if implied >= 0 else '-'} {abs(implied)}",
            }
            if x == y2:
                witness["chain"] = [
                    f"g({y2}) = f_{y2}({y2}) + 1",
                    f"f_{y2}({y2}) = g({y2})",
                ]
                witness["forced"] = f"g({y2}) = g({y2}) + 1"
            return ConsistencyResult(depth, False, witness)
    values = system.model()
    grid = dyadic_grid(depth)
    g = {format_rational(y): values[("g", y)] for y in grid}
    return ConsistencyResult(depth, True, {"g": g})
