"""Connect-sum pattern decomposition and local/non-local classification.

A *2-section* is a half-integer plane ``x = k`` met by the polygon in
exactly two points.  Consecutive 2-sections ``t_i < t_{i+1}`` bound a
*proper* cs-pattern, the union of two strands running from the plane
``t_i`` to the plane ``t_{i+1}``.  Strands here include the two x-edges
through each bounding plane, so a strand starts at ``x = t_i - 1/2`` and
ends at ``x = t_{i+1} + 1/2``.

Closures
--------
The denominator closure joins the two left ends inside the plane
``x = t_i - 3/2`` and the two right ends inside ``x = t_{i+1} + 3/2``.
Each numerator closure leaves the right end through the plane
``x = t_{i+1} + 3/2``, runs back beside the tube at ``y = -1`` and
rejoins the left end through ``x = t_i - 3/2``.  Under the default
projection of :mod:`tubeknot.knots.diagram` neither adds a crossing with
the pattern, which keeps diagrams small, but the knot type does not depend
on that.

Known limitation: the scheme can call a pattern local although no
separating 2-sphere exists; no sphere test is attempted.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import NotAProperPattern, UnknottedInput
from .knots import alexander, identify, project_diagram
from .knots.diagram import DEFAULT_PROJECTION, Projection
from .knots.table import KnotId
from .lattice import Polygon, Tube, Vertex, x_edge_counts

HALF = Fraction(1, 2)

LOCAL, NONLOCAL, NOT_KNOT, INDETERMINATE = "Local", "NonLocal", "NotAKnotPattern", "Indeterminate"
CLASSES = (NONLOCAL, LOCAL, NOT_KNOT, INDETERMINATE)


@dataclass(frozen=True)
class TwoSections:
    """Ordered half-integer planes ``t_1 < ... < t_m``."""

    planes: tuple[Fraction, ...]

    @property
    def m(self) -> int:
        return len(self.planes)

    def __iter__(self):
        return iter(self.planes)

    def __len__(self):
        return len(self.planes)


@dataclass(frozen=True)
class CsPattern:
    """A start, proper or end segment of a polygon.

    Attributes
    ----------
    kind : {"Start", "Proper", "End"}
    left, right : Fraction or None
        Bounding 2-section planes (``None`` for the open side of start and
        end patterns).
    span : int
    edges : frozenset
        Edges as sorted vertex pairs, boundary x-edges included.
    strands : tuple of vertex tuples
        For proper patterns, ``(sigma_1, sigma_2)`` oriented left to right,
        ``sigma_1`` being the strand with the smaller left end.
    """

    kind: str
    left: Fraction | None
    right: Fraction | None
    span: int
    edges: frozenset
    strands: tuple[tuple[Vertex, ...], ...] = ()
    tube: Tube | None = field(default=None, compare=False)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @classmethod
    def from_strands(cls, s1: Sequence[Sequence[int]], s2: Sequence[Sequence[int]],
                     tube: Tube | None = None) -> "CsPattern":
        """Build a proper pattern from two strands.

        Each strand is a lattice walk whose first and last vertices are the
        ends outside the bounding planes (one unit beyond the first and
        last hinge).  Strands may be given in either direction.
        """
        a = [tuple(int(c) for c in v) for v in s1]
        b = [tuple(int(c) for c in v) for v in s2]
        lo = min(v[0] for v in a + b)
        hi = max(v[0] for v in a + b)
        fixed = []
        for s in (a, b):
            if s[0][0] != lo:
                s = s[::-1]
            if s[0][0] != lo or s[-1][0] != hi:
                raise NotAProperPattern("strands must run between the bounding planes")
            if sum(1 for v in s if v[0] == lo) != 1 or sum(1 for v in s if v[0] == hi) != 1:
                raise NotAProperPattern("each strand meets each end plane once")
            fixed.append(tuple(s))
        if set(fixed[0]) & set(fixed[1]):
            raise NotAProperPattern("strands intersect")
        fixed.sort(key=lambda s: s[0])
        edges = frozenset(
            tuple(sorted((s[i], s[i + 1]))) for s in fixed for i in range(len(s) - 1))
        left, right = Fraction(lo) + HALF, Fraction(hi) - HALF
        return cls("Proper", left, right, int(right - left) + 1, edges, tuple(fixed), tube)

    @classmethod
    def from_hinge_strands(cls, s1, s2, tube: Tube | None = None) -> "CsPattern":
        """Like :meth:`from_strands` for strands given from the first to the
        last hinge vertex; the boundary x-edges are added."""
        out = []
        lo = min(v[0] for v in list(s1) + list(s2))
        for s in (s1, s2):
            s = [tuple(int(c) for c in v) for v in s]
            if s[0][0] != lo:
                s = s[::-1]
            first, last = s[0], s[-1]
            out.append([(first[0] - 1, first[1], first[2])] + s + [(last[0] + 1, last[1], last[2])])
        return cls.from_strands(out[0], out[1], tube)

    def translated(self, dx: int) -> "CsPattern":
        sh = lambda v: (v[0] + dx, v[1], v[2])
        return CsPattern(
            self.kind,
            None if self.left is None else self.left + dx,
            None if self.right is None else self.right + dx,
            self.span,
            frozenset((sh(a), sh(b)) for a, b in self.edges),
            tuple(tuple(map(sh, s)) for s in self.strands),
            self.tube,
        )


@dataclass(frozen=True)
class PatternKnotData:
    dc: KnotId
    nc1: KnotId
    nc2: KnotId
    classification: str


@dataclass(frozen=True)
class KnotSizes:
    arclength: dict
    connect_sum: dict


# ------------------------------------------------------------- decomposition


def two_sections(polygon: Polygon) -> TwoSections:
    """All half-integer planes met by the polygon in exactly two points."""
    counts = x_edge_counts(polygon)
    return TwoSections(tuple(Fraction(2 * k + 1, 2) for k, c in enumerate(counts) if c == 2))


def _x_cuts(verts: list[Vertex]) -> dict[int, list[int]]:
    """Indices of x-edges grouped by the plane ``k + 1/2`` they cross."""
    n = len(verts)
    cuts: dict[int, list[int]] = {}
    for i in range(n):
        a, b = verts[i][0], verts[(i + 1) % n][0]
        if a != b:
            cuts.setdefault(min(a, b), []).append(i)
    return cuts


def _segment_edges(polygon: Polygon, lo: Fraction | None, hi: Fraction | None) -> frozenset:
    """Edges inside the slab between two planes, boundary x-edges included."""
    klo = None if lo is None else int(lo - HALF)
    khi = None if hi is None else int(hi - HALF)
    out = set()
    for a, b in polygon.edges():
        xa, xb = a[0], b[0]
        if klo is not None and max(xa, xb) <= klo:
            continue
        if khi is not None and min(xa, xb) > khi:
            continue
        out.add((a, b) if a < b else (b, a))
    return frozenset(out)


def _strands(verts: list[Vertex], cuts: dict[int, list[int]], klo: int, khi: int):
    n = len(verts)
    idx = sorted(cuts[klo] + cuts[khi])
    strands = []
    for j in range(4):
        c0, c1 = idx[j], idx[(j + 1) % 4]
        length = (c1 - c0) % n
        arc = [verts[(c0 + t) % n] for t in range(length + 2)]
        if klo < arc[1][0] <= khi:
            if arc[0][0] > arc[-1][0]:
                arc.reverse()
            strands.append(tuple(arc))
    strands.sort(key=lambda s: s[0])
    return tuple(strands)


def proper_strands(polygon: Polygon, lo: Fraction, hi: Fraction) -> tuple[tuple[Vertex, ...], ...]:
    """The two strands between 2-sections ``lo`` and ``hi``."""
    verts = polygon.vertex_list()
    return _strands(verts, _x_cuts(verts), int(lo - HALF), int(hi - HALF))


def decompose(polygon: Polygon) -> list[CsPattern]:
    """Split a polygon at its 2-sections.

    Returns ``[]`` when there is no 2-section, ``[Start, End]`` for one,
    and ``[Start, Proper..., End]`` otherwise.
    """
    verts = polygon.vertex_list()
    cuts = _x_cuts(verts)
    ks = sorted(k for k, c in cuts.items() if len(c) == 2)
    if not ks:
        return []
    ts = [Fraction(2 * k + 1, 2) for k in ks]
    s = polygon.span
    # edges by smallest x; x-steps kept apart since they reach one column further
    flat: list[list] = [[] for _ in range(s + 1)]
    step: list[list] = [[] for _ in range(s + 1)]
    for a, b in polygon.edges():
        e = (a, b) if a < b else (b, a)
        (flat if a[0] == b[0] else step)[e[0][0]].append(e)

    def slab(klo, khi):
        lo = 0 if klo is None else klo + 1
        hi = s if khi is None else khi
        out = [e for x in range(lo, hi + 1) for e in flat[x]]
        out += [e for x in range(lo, min(hi + 1, s)) for e in step[x]]
        if klo is not None:
            out += step[klo]
        return frozenset(out)

    out = [CsPattern("Start", None, ts[0], ks[0] + 1, slab(None, ks[0]), (), polygon.tube)]
    for (klo, khi), (lo, hi) in zip(zip(ks, ks[1:]), zip(ts, ts[1:])):
        out.append(CsPattern("Proper", lo, hi, khi - klo + 1, slab(klo, khi),
                             _strands(verts, cuts, klo, khi), polygon.tube))
    out.append(CsPattern("End", ts[-1], None, s - ks[-1], slab(ks[-1], None), (), polygon.tube))
    return out


# ------------------------------------------------------------------ closures


def _plane_path(x: int, a: tuple[int, int], b: tuple[int, int]) -> list[Vertex]:
    """Lattice path inside the plane ``x``: first along y, then along z."""
    (y0, z0), (y1, z1) = a, b
    path = [(x, y0, z0)]
    sy = 1 if y1 > y0 else -1
    for y in range(y0 + sy, y1 + sy, sy) if y1 != y0 else ():
        path.append((x, y, z0))
    sz = 1 if z1 > z0 else -1
    for z in range(z0 + sz, z1 + sz, sz) if z1 != z0 else ():
        path.append((x, y1, z))
    return path


def _require_proper(pattern: CsPattern):
    if pattern.kind != "Proper" or len(pattern.strands) != 2:
        raise NotAProperPattern(f"{pattern.kind} pattern has no strand pair")


def denominator_curve(pattern: CsPattern) -> list[Vertex]:
    """Closed lattice curve of the denominator closure."""
    _require_proper(pattern)
    s1, s2 = pattern.strands
    xl, xr = s1[0][0] - 1, s1[-1][0] + 1
    right = _plane_path(xr, s1[-1][1:], s2[-1][1:])
    left = _plane_path(xl, s2[0][1:], s1[0][1:])
    return list(s1) + right + list(reversed(s2)) + left


def numerator_curves(pattern: CsPattern) -> tuple[list[Vertex], list[Vertex]]:
    """Closed lattice curves of the two numerator-closure components."""
    _require_proper(pattern)
    out = []
    for s in pattern.strands:
        (xa, ya, za), (xb, yb, zb) = s[0], s[-1]
        xl, xr = xa - 1, xb + 1
        back = _plane_path(xr, (yb, zb), (-1, zb))[:-1] + _plane_path(xr, (-1, zb), (-1, za))
        run = [(x, -1, za) for x in range(xr - 1, xl, -1)]
        enter = _plane_path(xl, (-1, za), (ya, za))
        out.append(list(s) + back + run + enter)
    return out[0], out[1]


def identify_lattice_curve(curve, projection: Projection = DEFAULT_PROJECTION) -> KnotId:
    return identify(alexander(project_diagram(curve, projection)))


def denominator_closure(pattern: CsPattern, projection: Projection = DEFAULT_PROJECTION):
    """``(curve, DC knot id)`` for a proper pattern."""
    curve = denominator_curve(pattern)
    return curve, identify_lattice_curve(curve, projection)


def numerator_closure(pattern: CsPattern, projection: Projection = DEFAULT_PROJECTION):
    """``(NC_1, NC_2)`` knot ids for a proper pattern."""
    c1, c2 = numerator_curves(pattern)
    return identify_lattice_curve(c1, projection), identify_lattice_curve(c2, projection)


def classify_ids(dc: KnotId, nc1: KnotId, nc2: KnotId) -> str:
    """Local/non-local rule applied to identified closures.

    A prime ``K = DC`` is non-local when it is a summand of neither
    numerator component.  Composite or ambiguous closures are tested per
    prime factor and per reading; any disagreement, or an unidentified
    closure that cannot be ruled out by polynomial divisibility, gives
    ``Indeterminate``.
    """
    if dc.is_unknot:
        return NOT_KNOT
    if dc.kind == "unknown":
        return INDETERMINATE
    verdicts = set()
    for reading in dc.readings:
        for k in set(reading):
            flags = (nc1.has_summand(k), nc2.has_summand(k))
            if True in flags:
                verdicts.add(LOCAL)
            elif flags == (False, False):
                verdicts.add(NONLOCAL)
            else:
                verdicts.add(INDETERMINATE)
    return verdicts.pop() if len(verdicts) == 1 else INDETERMINATE


def classify(pattern: CsPattern, projection: Projection = DEFAULT_PROJECTION) -> PatternKnotData:
    """Closure knot types and the local/non-local class of a proper pattern."""
    _, dc = denominator_closure(pattern, projection)
    nc1, nc2 = numerator_closure(pattern, projection)
    return PatternKnotData(dc, nc1, nc2, classify_ids(dc, nc1, nc2))


# ---------------------------------------------------------------- knot sizes


def _subarc_closure(arc: list[Vertex], tube: Tube) -> list[Vertex]:
    """Close an open lattice arc through rays along -x and +x.

    Coordinates are doubled so that the rays can run along lines
    ``(odd, odd)`` in the cross-section, which no doubled arc point
    occupies.  The end with the smaller x (first end on ties) is extended
    towards -x, the other towards +x; the far ends are joined beside the
    tube at ``y = -3``.
    """
    if arc[0][0] > arc[-1][0]:
        arc = arc[::-1]
    dbl = []
    for a, b in zip(arc, arc[1:]):
        pa = tuple(2 * c for c in a)
        dbl.append(pa)
        dbl.append(tuple(a_ + b_ for a_, b_ in zip(a, b)))
    dbl.append(tuple(2 * c for c in arc[-1]))
    occupied = set(dbl)
    xmin = min(v[0] for v in dbl) - 2
    xmax = max(v[0] for v in dbl) + 2

    def lift(end: Vertex, banned=frozenset()) -> list[Vertex]:
        x, y, z = end
        options = [((x, y + sy, z), (sy, sz)) for sy in (1, -1) for sz in (1, -1)]
        options += [((x, y, z + sz), (sy, sz)) for sz in (1, -1) for sy in (1, -1)]
        for p1, (sy, sz) in options:
            p2 = (x, y + sy, z + sz)
            if p1 not in occupied and p2 not in occupied and p2[1:] not in banned:
                return [p1, p2]
        raise AssertionError("arc end has all four offsets blocked")

    head = lift(dbl[0])
    occupied.update(head)
    # with both ends in one plane the rays must not share a line
    tail = lift(dbl[-1], {head[-1][1:]} if dbl[-1][0] == dbl[0][0] else frozenset())
    hx, hy, hz = head[-1]
    tx, ty, tz = tail[-1]
    left_ray = [(x, hy, hz) for x in range(hx - 1, xmin - 1, -1)]
    right_ray = [(x, ty, tz) for x in range(tx + 1, xmax + 1)]
    # from the right far end go to y = -3, run back along x, come up at the left
    down_r = [(xmax, y, tz) for y in range(ty - 1, -4, -1)]
    shift_r = _plane_path(xmax, (-3, tz), (-3, hz))[1:]
    run = [(x, -3, hz) for x in range(xmax - 1, xmin - 1, -1)]
    up_l = [(xmin, y, hz) for y in range(-2, hy)]
    curve = (dbl + tail + right_ray + down_r + shift_r
             + run + up_l + list(reversed(left_ray)) + list(reversed(head)))
    return curve


def arc_knot(arc: list[Vertex], tube: Tube) -> KnotId:
    """Knot type of an open arc under the ray closure convention."""
    return identify_lattice_curve(_subarc_closure(list(arc), tube))


def polygon_knot(polygon: Polygon) -> KnotId:
    return identify_lattice_curve(polygon.vertex_list())


def knot_sizes(polygon: Polygon, max_arc: int | None = None) -> KnotSizes:
    """Arclength and connect-sum knot sizes per prime summand.

    Parameters
    ----------
    polygon : Polygon
        A knotted polygon.
    max_arc : int, optional
        Longest subarc tried by the arclength search (default: whole
        polygon).  Summands not found up to this length get ``None``.

    Raises
    ------
    UnknottedInput
    """
    K = polygon_knot(polygon)
    if K.is_unknot:
        raise UnknottedInput("polygon is unknotted")
    primes = sorted(set(K.factors))
    n = polygon.n
    connect = {k: n for k in primes}
    for pat in decompose(polygon):
        if pat.kind != "Proper":
            continue
        dc = denominator_closure(pat)[1]
        for k in set(dc.factors):
            if connect.get(k) == n:
                connect[k] = pat.n_edges
    verts = polygon.vertex_list()
    arclength = {k: None for k in primes}
    todo = set(primes)
    limit = n - 1 if max_arc is None else min(max_arc, n - 1)
    for length in range(3, limit + 1):
        for start in range(n):
            arc = [verts[(start + t) % n] for t in range(length + 1)]
            ident = arc_knot(arc, polygon.tube)
            for k in list(todo):
                if ident.has_summand(k):
                    arclength[k] = length
                    todo.discard(k)
            if not todo:
                return KnotSizes(arclength, connect)
    for k in todo:
        # the whole polygon always carries every summand
        arclength[k] = n
    return KnotSizes(arclength, connect)
