"""Paths between points of the plane (or R^n) with a class of points removed.

A point is removed ("punctured") when *all* of its coordinates belong to a
forbidden number class. An axis-parallel segment moves one coordinate and
keeps the others fixed, so one fixed coordinate of an exempt class keeps
every point of the segment out of the removed set. All planners below
produce chains of such segments. The circle method instead picks a circle
through two rational points that misses a finite excluded set.

Coordinates are :class:`~cantor_audit.numerics.TaggedReal`; their class is
bookkeeping, never computed from a numeric value.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import (
    DegenerateInput,
    DeviationUnattainable,
    NoAlgebraicCoordinate,
    NoTranscendentalCoordinate,
    NotOnGrid,
    SceneError,
)
from .numerics import (
    NumberClass,
    TaggedReal,
    format_rational,
    parse_rational,
    shifted_transcendental,
)

_ALGEBRAIC = frozenset({NumberClass.NATURAL, NumberClass.RATIONAL, NumberClass.ALGEBRAIC_IRRATIONAL})


class PunctureSpec(str, enum.Enum):
    PURELY_ALGEBRAIC = "AA"
    PURELY_TRANSCENDENTAL = "TT"
    PURELY_NON_NATURAL = "non_natural"

    @property
    def forbidden(self) -> frozenset:
        if self is PunctureSpec.PURELY_ALGEBRAIC:
            return _ALGEBRAIC
        if self is PunctureSpec.PURELY_TRANSCENDENTAL:
            return frozenset({NumberClass.TRANSCENDENTAL})
        return frozenset(NumberClass) - {NumberClass.NATURAL}

    def exempts(self, c: TaggedReal) -> bool:
        return c.number_class not in self.forbidden

    @property
    def description(self) -> str:
        return {
            "AA": "removed: points with only algebraic coordinates",
            "TT": "removed: points with only transcendental coordinates",
            "non_natural": "removed: points with no natural-number coordinate",
        }[self.value]

    @classmethod
    def parse(cls, text: str) -> "PunctureSpec":
        aliases = {
            "aa": "AA", "purely_algebraic": "AA",
            "tt": "TT", "purely_transcendental": "TT",
            "non_natural": "non_natural", "non-natural": "non_natural", "purely_non_natural": "non_natural",
        }
        try:
            return cls(aliases[text.lower()])
        except KeyError:
            raise SceneError(f"unknown puncture {text!r}") from None


def _coord(v) -> TaggedReal:
    return v if isinstance(v, TaggedReal) else TaggedReal.rational(v)


@dataclass(frozen=True)
class Point:
    coords: tuple[TaggedReal, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(_coord(c) for c in self.coords))
        if len(self.coords) < 2:
            raise ValueError("points need at least two coordinates")

    @classmethod
    def of(cls, *coords) -> "Point":
        return cls(tuple(coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __getitem__(self, j: int) -> TaggedReal:
        return self.coords[j]

    def replace(self, j: int, value: TaggedReal) -> "Point":
        c = list(self.coords)
        c[j] = value
        return Point(tuple(c))

    def render(self) -> tuple[Fraction, ...]:
        return tuple(c.render_approx for c in self.coords)

    def rational_xy(self) -> tuple[Fraction, Fraction]:
        if self.dim != 2 or any(c.symbol is not None for c in self.coords):
            raise ValueError("expected a point with two rational coordinates")
        return self.coords[0].offset, self.coords[1].offset

    def to_json(self) -> dict:
        return {"coords": [c.to_json() for c in self.coords]}

    @classmethod
    def from_json(cls, obj) -> "Point":
        coords = obj["coords"] if isinstance(obj, dict) else obj
        return cls(tuple(TaggedReal.from_json(c) if isinstance(c, dict) else TaggedReal.rational(c) for c in coords))

    def __str__(self):
        return "(" + ", ".join(map(str, self.coords)) + ")"


def is_punctured(p: Point, spec: PunctureSpec) -> bool:
    return all(c.number_class in spec.forbidden for c in p.coords)


@dataclass(frozen=True)
class AxisSegment:
    """``start -> end`` changing coordinate ``axis`` only.

    ``fixed_axis`` is the coordinate the planner relies on to stay clear of
    the removed set; validation re-derives this on its own.
    """

    start: Point
    end: Point
    axis: int
    fixed_axis: int

    def to_json(self) -> dict:
        return {
            "type": "axis",
            "axis": self.axis,
            "fixed_axis": self.fixed_axis,
            "fixed_value": self.start[self.fixed_axis].to_json(),
            "from": self.start.to_json(),
            "to": self.end.to_json(),
        }


@dataclass(frozen=True)
class CircleArc:
    """Minor arc of the circle ``|z - center|^2 = radius_squared``.

    ``ccw`` gives the direction from ``start`` to ``end``. ``t`` is the chosen
    position on the perpendicular bisector; ``excluded`` the finite set the
    circle was chosen to miss.
    """

    center: tuple[Fraction, Fraction]
    radius_squared: Fraction
    start: Point
    end: Point
    ccw: bool
    t: int = 0
    excluded: tuple[tuple[Fraction, Fraction], ...] = ()

    def to_json(self) -> dict:
        return {
            "type": "arc",
            "center": [format_rational(c) for c in self.center],
            "radius_squared": format_rational(self.radius_squared),
            "t": self.t,
            "ccw": self.ccw,
            "from": self.start.to_json(),
            "to": self.end.to_json(),
        }


Segment = Union[AxisSegment, CircleArc]


@dataclass(frozen=True)
class PathPlan:
    waypoints: tuple[Point, ...]
    segments: tuple[Segment, ...]
    puncture: PunctureSpec
    method: str
    pieces: int = 1
    notes: tuple[str, ...] = field(default=(), compare=False)

    @property
    def start(self) -> Point:
        return self.waypoints[0]

    @property
    def end(self) -> Point:
        return self.waypoints[-1]

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "puncture": self.puncture.value,
            "pieces": self.pieces,
            "waypoints": [p.to_json() for p in self.waypoints],
            "segments": [s.to_json() for s in self.segments],
            "notes": list(self.notes),
        }


class _Walker:
    def __init__(self, start: Point):
        self.points = [start]
        self.segments: list[AxisSegment] = []

    @property
    def here(self) -> Point:
        return self.points[-1]

    def move(self, axis: int, value: TaggedReal, fixed_axis: int) -> None:
        cur = self.here
        if cur[axis] == value:
            return
        new = cur.replace(axis, value)
        self.segments.append(AxisSegment(cur, new, axis, fixed_axis))
        self.points.append(new)

    def plan(self, spec, method, pieces=1, notes=()) -> PathPlan:
        return PathPlan(tuple(self.points), tuple(self.segments), spec, method, pieces, tuple(notes))


def _exempt(p: Point, spec: PunctureSpec) -> list[int]:
    return [j for j, c in enumerate(p.coords) if spec.exempts(c)]


def _exempt_value(spec: PunctureSpec, target: Fraction, radius: Fraction) -> TaggedReal:
    """An exempt-class value near ``target``; exact for the algebraic case."""
    if spec is PunctureSpec.PURELY_ALGEBRAIC:
        return shifted_transcendental(target, radius)
    if spec is PunctureSpec.PURELY_TRANSCENDENTAL:
        return TaggedReal.rational(target)
    return TaggedReal.natural(max(0, math.floor(target + Fraction(1, 2))))


_MISSING = {
    PunctureSpec.PURELY_ALGEBRAIC: NoTranscendentalCoordinate,
    PunctureSpec.PURELY_TRANSCENDENTAL: NoAlgebraicCoordinate,
    PunctureSpec.PURELY_NON_NATURAL: NotOnGrid,
}


def _check_pair(N: Point, N2: Point, spec: PunctureSpec) -> tuple[list[int], list[int]]:
    if N.dim != N2.dim:
        raise SceneError("endpoints have different dimensions")
    S, S2 = _exempt(N, spec), _exempt(N2, spec)
    for name, p, idx in (("N", N, S), ("N'", N2, S2)):
        if not idx:
            raise _MISSING[spec](f"{name} = {p} has no coordinate exempt from {spec.value}")
    return S, S2


def _default_radius(N: Point, N2: Point) -> Fraction:
    spread = max(abs(a - b) for a, b in zip(N.render(), N2.render()))
    return min(Fraction(1, 10), spread / 10) if spread else Fraction(1, 10)


def _plan_basic(N: Point, N2: Point, spec: PunctureSpec, method: str, radius=None) -> PathPlan:
    S, S2 = _check_pair(N, N2, spec)
    w = _Walker(N)
    if N == N2:
        return w.plan(spec, method)
    n = N.dim

    # An exempt coordinate that already has its final value: slide the rest.
    for nu in S:
        if nu in S2 and N[nu] == N2[nu]:
            for mu in range(n):
                if mu != nu:
                    w.move(mu, N2[mu], nu)
            return w.plan(spec, method)

    pair = next(((nu, nu2) for nu in S for nu2 in S2 if nu != nu2), None)
    if pair is not None:
        # Two-phase: hold x_nu, bring the others home (x_nu2 becomes exempt
        # at its final value), then hold x_nu2 and move x_nu.
        nu, nu2 = pair
        for mu in range(n):
            if mu != nu:
                w.move(mu, N2[mu], nu)
        w.move(nu, N2[nu], nu2)
        return w.plan(spec, method)

    # Only one exempt coordinate on each side and it is the same index nu.
    # Stop some x_rho at an exempt intermediate value first.
    (nu,) = S
    rho = 0 if nu != 0 else 1
    if radius is None:
        radius = _default_radius(N, N2)
    mid = _exempt_value(spec, N2[rho].render_approx, parse_rational(radius))
    for mu in range(n):
        if mu not in (nu, rho):
            w.move(mu, N2[mu], nu)
    w.move(rho, mid, nu)
    w.move(nu, N2[nu], rho)
    w.move(rho, N2[rho], nu)
    return w.plan(spec, method, notes=[f"intermediate x{rho + 1} = {mid} ({mid.number_class.value})"])


def plan_path_transcendental_fixed(N: Point, N2: Point, radius=None) -> PathPlan:
    """Connect two points avoiding the purely algebraic points.

    Every segment keeps a transcendental coordinate fixed. Two segments
    suffice when ``N2`` has a transcendental coordinate at another index
    than ``N``'s; otherwise a third leg passes through a transcendental
    intermediate value within ``radius`` of the destination coordinate.
    """
    return _plan_basic(N, N2, PunctureSpec.PURELY_ALGEBRAIC, "transcendental-fixed", radius)


def plan_path_algebraic_fixed(N: Point, N2: Point) -> PathPlan:
    """Same construction with algebraic fixed coordinates, avoiding TT."""
    return _plan_basic(N, N2, PunctureSpec.PURELY_TRANSCENDENTAL, "algebraic-fixed")


def plan_path_natural_grid(N: Point, N2: Point, m: int) -> PathPlan:
    """``(n, xi) -> (n, m) -> (n', m) -> (n', xi')`` along grid lines.

    The first coordinate of both endpoints must be a natural number, as
    must ``m``. Extra coordinates (n > 2) are moved first, with ``x1 = n``
    held fixed.
    """
    m = parse_rational(m)
    if m.denominator != 1 or m < 0:
        raise NotOnGrid(f"m = {m} is not a natural number")
    if N.dim != N2.dim:
        raise SceneError("endpoints have different dimensions")
    for name, p in (("N", N), ("N'", N2)):
        if p[0].number_class is not NumberClass.NATURAL:
            raise NotOnGrid(f"first coordinate of {name} = {p} is not a natural number")
    grid = TaggedReal.natural(m)
    w = _Walker(N)
    for mu in range(2, N.dim):
        w.move(mu, N2[mu], 0)
    w.move(1, grid, 0)
    w.move(0, N2[0], 1)
    w.move(1, N2[1], 0)
    return w.plan(PunctureSpec.PURELY_NON_NATURAL, "natural-grid")


def plan_path(N: Point, N2: Point, spec: PunctureSpec) -> PathPlan:
    """The basic 2-3 leg plan for any puncture spec."""
    if spec is PunctureSpec.PURELY_ALGEBRAIC:
        return plan_path_transcendental_fixed(N, N2)
    if spec is PunctureSpec.PURELY_TRANSCENDENTAL:
        return plan_path_algebraic_fixed(N, N2)
    return _plan_basic(N, N2, spec, "natural-fixed")


# ---------------------------------------------------------------------------
# Deviation from the straight line


def deviation_squared(p: Point, N: Point, N2: Point) -> Fraction:
    """Squared distance from ``p`` to the line ``N N2`` (rendered values)."""
    a, b, x = N.render(), N2.render(), p.render()
    d = [bj - aj for aj, bj in zip(a, b)]
    v = [xj - aj for aj, xj in zip(a, x)]
    vv = sum(c * c for c in v)
    dd = sum(c * c for c in d)
    if dd == 0:
        return vv
    vd = sum(vj * dj for vj, dj in zip(v, d))
    return vv - vd * vd / dd


def max_deviation_squared(plan: PathPlan, N: Point, N2: Point) -> Fraction:
    return max(deviation_squared(p, N, N2) for p in plan.waypoints)


def plan_path_bounded_deviation(N: Point, N2: Point, eps, spec: PunctureSpec) -> PathPlan:
    """A staircase plan whose waypoints all lie within ``eps`` of line ``N N2``.

    The basic plan is returned if it already meets the bound. Otherwise the
    segment is cut into ``k`` pieces, ``k`` the least power of two with
    ``k^2 eps^2 >= 4 |N2 - N|^2``, so halving ``eps`` doubles ``k``. The
    path hops between anchor points whose coordinates are all exempt, each
    within ``eps / 2n`` of the matching division point. Needs a dense
    exempt class, so the natural-grid puncture raises
    :class:`DeviationUnattainable` when the basic plan is too far off.
    """
    eps = parse_rational(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    basic = plan_path(N, N2, spec)
    if max_deviation_squared(basic, N, N2) <= eps * eps:
        return basic
    if spec is PunctureSpec.PURELY_NON_NATURAL:
        raise DeviationUnattainable(f"grid lines are 1 apart; cannot stay within {eps} of the line")

    n = N.dim
    a, b = N.render(), N2.render()
    delta = [bj - aj for aj, bj in zip(a, b)]
    length2 = sum(c * c for c in delta)
    k = 2
    while k * k * eps * eps < 4 * length2:
        k *= 2
    radius = eps / (2 * n)
    anchors = [
        Point(tuple(_exempt_value(spec, a[j] + delta[j] * i / k, radius) for j in range(n)))
        for i in range(1, k)
    ]

    e = _exempt(N, spec)[0]
    w = _Walker(N)
    first = anchors[0]
    for mu in range(n):
        if mu != e:
            w.move(mu, first[mu], e)
    w.move(e, first[e], 0 if e != 0 else 1)
    for nxt in anchors[1:]:
        for j in range(n):
            w.move(j, nxt[j], 0 if j != 0 else 1)
    e2 = _exempt(N2, spec)[0]
    w.move(e2, N2[e2], 0 if e2 != 0 else 1)
    for mu in range(n):
        if mu != e2:
            w.move(mu, N2[mu], e2)

    plan = w.plan(spec, "bounded-deviation", pieces=k)
    if max_deviation_squared(plan, N, N2) > eps * eps:
        raise AssertionError("staircase left the eps-tube")  # pragma: no cover
    return plan


# ---------------------------------------------------------------------------
# Circles through two points


def _xy(p) -> tuple[Fraction, Fraction]:
    if isinstance(p, Point):
        return p.rational_xy()
    x, y = p
    return parse_rational(x), parse_rational(y)


def _dist2(p, q) -> Fraction:
    return (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2


def forbidden_parameters(N, N1, excluded) -> set[Fraction]:
    """Values of ``t`` whose circle passes through some excluded point.

    Centers are ``M + t P`` with ``M`` the midpoint and ``P`` the chord
    rotated a quarter turn and halved. Passing through ``e`` is the affine
    equation ``|M - e|^2 - |M - N|^2 + 2 t P.(N - e) = 0``.
    """
    n, n1 = _xy(N), _xy(N1)
    M = ((n[0] + n1[0]) / 2, (n[1] + n1[1]) / 2)
    P = (-(n1[1] - n[1]) / 2, (n1[0] - n[0]) / 2)
    out = set()
    for e in map(_xy, excluded):
        slope = 2 * (P[0] * (n[0] - e[0]) + P[1] * (n[1] - e[1]))
        const = _dist2(M, e) - _dist2(M, n)
        if slope != 0:
            out.add(-const / slope)
        elif const == 0:  # pragma: no cover - only when e is N or N1
            raise DegenerateInput(f"excluded point {e} coincides with an endpoint")
    return out


def circle_avoiding(N, N1, excluded=()) -> CircleArc:
    """Circle through ``N`` and ``N1`` missing every excluded point.

    Each excluded point rules out at most one center on the perpendicular
    bisector; the smallest non-negative integer ``t`` left over is used.
    """
    n, n1 = _xy(N), _xy(N1)
    if n == n1:
        raise DegenerateInput("N and N1 coincide")
    ex = tuple(_xy(e) for e in excluded)
    if n in ex or n1 in ex:
        raise DegenerateInput("an endpoint is in the excluded set")
    bad = forbidden_parameters(n, n1, ex)
    t = 0
    while t in bad:
        t += 1
    M = ((n[0] + n1[0]) / 2, (n[1] + n1[1]) / 2)
    P = (-(n1[1] - n[1]) / 2, (n1[0] - n[0]) / 2)
    c = (M[0] + t * P[0], M[1] + t * P[1])
    cross = (n[0] - c[0]) * (n1[1] - c[1]) - (n[1] - c[1]) * (n1[0] - c[0])
    start = N if isinstance(N, Point) else Point.of(*n)
    end = N1 if isinstance(N1, Point) else Point.of(*n1)
    return CircleArc(c, _dist2(c, n), start, end, ccw=cross >= 0, t=t, excluded=ex)


def plan_path_circles(points: Sequence, excluded=()) -> PathPlan:
    """Chain circle arcs through consecutive points; arcs meet at waypoints."""
    pts = [p if isinstance(p, Point) else Point.of(*_xy(p)) for p in points]
    if len(pts) < 2:
        raise DegenerateInput("need at least two points")
    arcs = tuple(circle_avoiding(a, b, excluded) for a, b in zip(pts, pts[1:]))
    return PathPlan(tuple(pts), arcs, PunctureSpec.PURELY_ALGEBRAIC, "circle-arcs",
                    notes=("finite excluded set stands in for the removed points",))


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class PathVerdict:
    ok: bool
    violation: Optional[dict]
    segments: tuple[str, ...]

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "violation": self.violation, "segments": list(self.segments)}


def _forbidden_between(spec: PunctureSpec, lo: Fraction, hi: Fraction) -> TaggedReal:
    lo, hi = min(lo, hi), max(lo, hi)
    m = (lo + hi) / 2
    if spec is PunctureSpec.PURELY_TRANSCENDENTAL:
        return shifted_transcendental(m, (hi - lo) / 2)
    if spec is PunctureSpec.PURELY_NON_NATURAL and m.denominator == 1:
        m += min(hi - m, 1) / 2
    return TaggedReal.rational(m)


def _check_axis(seg: AxisSegment, spec: PunctureSpec, i: int):
    a, b = seg.start, seg.end
    changed = [j for j in range(a.dim) if a[j] != b[j]]
    if changed != [seg.axis]:
        return None, {"segment": i, "reason": f"waypoints differ in coordinates {changed}, declared {seg.axis}"}
    exempt = [j for j in range(a.dim) if j != seg.axis and spec.exempts(a[j])]
    if exempt:
        j = exempt[0]
        return f"segment {i}: x{j + 1} = {a[j]} held fixed is {a[j].number_class.value}", None
    w = _forbidden_between(spec, a[seg.axis].render_approx, b[seg.axis].render_approx)
    witness = a.replace(seg.axis, w)
    return None, {
        "segment": i,
        "reason": "no fixed coordinate is exempt; the segment contains removed points",
        "witness": witness.to_json(),
    }


def _check_arc(arc: CircleArc, i: int):
    c, r2 = arc.center, arc.radius_squared
    ends = (arc.start.rational_xy(), arc.end.rational_xy())
    for name, p in zip(("start", "end"), ends):
        if _dist2(c, p) != r2:
            return None, {"segment": i, "reason": f"arc {name} {p} is off the circle"}
        if p in arc.excluded:
            return None, {"segment": i, "reason": f"arc {name} {p} is an excluded point"}
    for e in arc.excluded:
        if _dist2(c, e) == r2:
            return None, {"segment": i, "reason": f"excluded point {e} lies on the circle",
                          "witness": [format_rational(v) for v in e]}
    return f"segment {i}: circle t={arc.t} misses all {len(arc.excluded)} excluded points", None


def validate_path(plan: PathPlan, spec: PunctureSpec) -> PathVerdict:
    """Check every segment stays out of the removed set, segment by segment.

    Arcs are only checked at finitely many places: endpoint incidence and
    each excluded point.
    """
    notes = []
    if not plan.segments:
        p = plan.waypoints[0]
        if is_punctured(p, spec):
            return PathVerdict(False, {"segment": None, "reason": f"{p} is removed"}, ())
        return PathVerdict(True, None, ())
    if len(plan.waypoints) != len(plan.segments) + 1:
        return PathVerdict(False, {"segment": None, "reason": "waypoint/segment count mismatch"}, ())
    for i, seg in enumerate(plan.segments):
        if seg.start != plan.waypoints[i] or seg.end != plan.waypoints[i + 1]:
            return PathVerdict(False, {"segment": i, "reason": "segment does not join its waypoints"}, tuple(notes))
        if isinstance(seg, AxisSegment):
            note, bad = _check_axis(seg, spec, i)
        else:
            note, bad = _check_arc(seg, i)
        if bad:
            return PathVerdict(False, bad, tuple(notes))
        notes.append(note)
    return PathVerdict(True, None, tuple(notes))


# ---------------------------------------------------------------------------
# Scenes


@dataclass(frozen=True)
class Query:
    start: int
    end: int
    eps: Optional[Fraction] = None
    m: Optional[int] = None
    method: str = "basic"


@dataclass(frozen=True)
class Scene:
    dim: int
    points: tuple[Point, ...]
    puncture: PunctureSpec
    queries: tuple[Query, ...]
    excluded: tuple[Point, ...] = ()


def load_scene(obj: dict) -> Scene:
    """Build a scene from its JSON form.

    ``{"dim": 2, "points": [{"coords": [...]}, ...], "puncture": "AA",
    "queries": [{"from": 0, "to": 1, "eps": "1/8"}], "excluded": [...]}``
    """
    try:
        dim = int(obj["dim"])
        points = tuple(Point.from_json(p) for p in obj["points"])
        puncture = PunctureSpec.parse(obj.get("puncture", "AA"))
        excluded = tuple(Point.from_json(p) for p in obj.get("excluded", ()))
        queries = []
        for q in obj.get("queries", ()):
            eps = parse_rational(q["eps"]) if "eps" in q else None
            m = int(parse_rational(q["m"])) if "m" in q else None
            method = q.get("method", "grid" if m is not None else ("deviation" if eps is not None else "basic"))
            queries.append(Query(int(q["from"]), int(q["to"]), eps, m, method))
    except (KeyError, TypeError, ValueError) as exc:
        raise SceneError(f"bad scene: {exc}") from None
    for p in points + excluded:
        if p.dim != dim:
            raise SceneError(f"point {p} does not have dimension {dim}")
    for q in queries:
        for idx in (q.start, q.end):
            if not 0 <= idx < len(points):
                raise SceneError(f"query refers to missing point {idx}")
    return Scene(dim, points, puncture, tuple(queries), excluded)


def plan_query(scene: Scene, q: Query) -> PathPlan:
    N, N2 = scene.points[q.start], scene.points[q.end]
    if q.method == "grid":
        return plan_path_natural_grid(N, N2, q.m if q.m is not None else 0)
    if q.method == "deviation":
        return plan_path_bounded_deviation(N, N2, q.eps, scene.puncture)
    if q.method == "basic":
        return plan_path(N, N2, scene.puncture)
    raise SceneError(f"unknown query method {q.method!r}")
