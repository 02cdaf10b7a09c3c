"""Crossing diagrams of closed lattice curves.

A lattice curve is projected along an integer direction ``d`` with one
dominant component.  Writing ``(c_i, c_j, c_k)`` for the coordinates with
``k`` the dominant axis, the image point is

    u = D c_i + alpha c_k,   v = D c_j + beta c_k,   D = |d_k|,

with ``(alpha, beta)`` fixed by ``d``.  When ``|alpha|`` and ``|beta|``
times the coordinate range stay below ``D`` the projection is regular:
only edges along ``i`` and ``j`` can cross, every crossing is a
transverse double point, and the strand with the larger height
``sign(d_k) c_k`` passes over.  This makes crossing detection a local
table lookup instead of a segment-intersection sweep.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from ..errors import DegenerateProjection, MultiComponent

Entry = tuple[int, bool]  # (crossing index, passes over)


@dataclass(frozen=True)
class Projection:
    """Projection along an integer direction with a dominant component."""

    direction: tuple[int, int, int]

    def __post_init__(self):
        d = tuple(int(c) for c in self.direction)
        object.__setattr__(self, "direction", d)
        k = max(range(3), key=lambda a: abs(d[a]))
        i, j = (k + 1) % 3, (k + 2) % 3
        if d[i] == 0 or d[j] == 0:
            raise DegenerateProjection(f"direction {d} is axis-parallel in the image plane")

    @property
    def axes(self) -> tuple[int, int, int]:
        d = self.direction
        k = max(range(3), key=lambda a: abs(d[a]))
        return (k + 1) % 3, (k + 2) % 3, k

    @property
    def coefficients(self) -> tuple[int, int, int, int]:
        """``(D, alpha, beta, height_sign)``."""
        i, j, k = self.axes
        d = self.direction
        s = 1 if d[k] > 0 else -1
        return abs(d[k]), -s * d[i], -s * d[j], s

    def max_range(self) -> int:
        """Largest admissible coordinate range along the dominant axis."""
        D, a, b, _ = self.coefficients
        return (D - 1) // max(abs(a), abs(b))


#: z-dominant default; suits tube curves because closure arcs routed in
#: the end planes or beside the tube add no crossings with the pattern.
DEFAULT_PROJECTION = Projection((-1009, -1, 1_000_003))
#: x-dominant alternative used for projection-independence checks.
ALTERNATE_PROJECTION = Projection((1_000_003, 1009, 1))


@dataclass(frozen=True)
class Diagram:
    """Oriented crossing diagram given by signed Gauss codes.

    Attributes
    ----------
    code : tuple of tuple of (int, bool)
        For each component, the crossings met in order with a flag that is
        true on the over passage.
    signs : tuple of int
        Sign (+1 or -1) of crossing ``c`` at index ``c``.
    """

    code: tuple[tuple[Entry, ...], ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        seen: dict[int, list[bool]] = {}
        for comp in self.code:
            for c, over in comp:
                seen.setdefault(c, []).append(over)
        if sorted(seen) != list(range(len(self.signs))):
            raise ValueError("crossing indices must be 0..n-1")
        for c, roles in seen.items():
            if sorted(roles) != [False, True]:
                raise ValueError(f"crossing {c} must appear once over and once under")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")

    @property
    def n_crossings(self) -> int:
        return len(self.signs)

    @property
    def n_components(self) -> int:
        return len(self.code)

    def writhe(self) -> int:
        return sum(self.signs)

    def gauss_code(self) -> str:
        """Signed Gauss code, e.g. ``O1+ U2+ O3+ U1+ O2+ U3+``."""
        parts = []
        for comp in self.code:
            parts.append(" ".join(
                f"{'O' if o else 'U'}{c + 1}{'+' if self.signs[c] > 0 else '-'}"
                for c, o in comp))
        return " | ".join(parts)

    @classmethod
    def from_gauss_code(cls, text: str) -> "Diagram":
        comps, signs = [], {}
        for chunk in text.split("|"):
            comp = []
            for tok in chunk.split():
                role, sign = tok[0].upper(), tok[-1]
                c = int(tok[1:-1]) - 1
                if role not in "OU" or sign not in "+-":
                    raise ValueError(f"bad Gauss token {tok!r}")
                comp.append((c, role == "O"))
                signs[c] = 1 if sign == "+" else -1
            comps.append(tuple(comp))
        n = len(signs)
        return cls(tuple(comps), tuple(signs[c] for c in range(n)))


def _as_curves(curves) -> list:
    if hasattr(curves, "vertex_list"):
        return [curves.vertex_list()]
    curves = list(curves)
    if curves and not hasattr(curves[0][0], "__len__"):
        return [curves]
    return [c.vertex_list() if hasattr(c, "vertex_list") else c for c in curves]


def _check_curves(curves: Sequence[Sequence[Sequence[int]]]) -> list[list[tuple[int, int, int]]]:
    out, seen = [], set()
    for curve in curves:
        pts = [tuple(int(c) for c in p) for p in curve]
        if len(pts) > 1 and pts[0] == pts[-1]:
            pts.pop()
        if len(pts) < 4:
            raise ValueError("a closed lattice curve needs at least four vertices")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            if sum(abs(p - q) for p, q in zip(a, b)) != 1:
                raise ValueError(f"non-unit step {a} -> {b}")
        for p in pts:
            if p in seen:
                raise ValueError(f"curve is not self-avoiding at {p}")
            seen.add(p)
        out.append(pts)
    return out


def project_diagram(curves, projection: Projection = DEFAULT_PROJECTION) -> Diagram:
    """Project closed lattice curves to a regular crossing diagram.

    Parameters
    ----------
    curves : sequence of closed lattice curves, or a single curve
        Each curve is a cyclic list of integer points joined by unit
        steps; a :class:`~tubeknot.lattice.Polygon` is accepted too.
    projection : Projection

    Raises
    ------
    DegenerateProjection
        If the coordinate range along the dominant axis is too large for
        the direction to be generic.
    """
    curves = _check_curves(_as_curves(curves))
    i, j, k = projection.axes
    D, alpha, beta, hs = projection.coefficients
    ks = [p[k] for c in curves for p in c]
    if max(ks) - min(ks) > projection.max_range():
        raise DegenerateProjection(
            f"coordinate range {max(ks) - min(ks)} exceeds {projection.max_range()}")

    # edges: (component, index in component, start local, end local)
    iedges: dict[tuple[int, int], list[tuple[int, int, int]]] = {}
    jedges = []
    flat = []  # per global edge id: (comp, axis, direction sign)
    for ci, pts in enumerate(curves):
        n = len(pts)
        for e in range(n):
            a, b = pts[e], pts[(e + 1) % n]
            la = (a[i], a[j], a[k])
            lb = (b[i], b[j], b[k])
            gid = len(flat)
            if la[0] != lb[0]:
                flat.append((ci, 0, lb[0] - la[0]))
                iedges.setdefault((min(la[0], lb[0]), la[1]), []).append((la[2], gid, 0))
            elif la[1] != lb[1]:
                flat.append((ci, 1, lb[1] - la[1]))
                jedges.append((la[0], min(la[1], lb[1]), la[2], gid))
            else:
                flat.append((ci, 2, 0))

    # crossing: (i-edge gid, j-edge gid, u, v, i-edge over)
    found = []
    for x, y, z, jg in jedges:
        for xp in (x, x - 1):
            for yp in (y, y + 1):
                for zp, ig, _ in iedges.get((xp, yp), ()):
                    if zp == z:
                        continue
                    h = alpha * (z - zp)
                    if (xp == x and h <= 0) or (xp == x - 1 and h >= 0):
                        continue
                    w = beta * (zp - z)
                    if (yp == y and w <= 0) or (yp == y + 1 and w >= 0):
                        continue
                    i_over = hs * zp > hs * z
                    found.append((ig, jg, D * x + alpha * z, D * yp + beta * zp, i_over))

    per_edge: dict[int, list[tuple[int, int, bool]]] = {}
    signs = []
    for cid, (ig, jg, u, v, i_over) in enumerate(found):
        di = flat[ig][2]
        dj = flat[jg][2]
        # image directions: i-edge (di, 0), j-edge (0, dj)
        ou, ov, nu, nv = (di, 0, 0, dj) if i_over else (0, dj, di, 0)
        signs.append(1 if ou * nv - ov * nu > 0 else -1)
        per_edge.setdefault(ig, []).append((u * di, cid, i_over))
        per_edge.setdefault(jg, []).append((v * dj, cid, not i_over))

    code = []
    gid = 0
    for pts in curves:
        comp = []
        for _ in range(len(pts)):
            hits = per_edge.get(gid)
            if hits:
                hits.sort()
                comp.extend((c, o) for _, c, o in hits)
            gid += 1
        code.append(tuple(comp))
    return Diagram(tuple(code), tuple(signs))


def _other(positions: list[int], i: int) -> int:
    return positions[1] if positions[0] == i else positions[0]


def _reduce_knot(code: list[Entry], signs: Sequence[int]) -> list[Entry]:
    while code:
        n = len(code)
        # Reidemeister I: a crossing met twice in a row bounds an empty loop
        for i in range(n):
            if code[i][0] == code[(i + 1) % n][0]:
                drop = {i, (i + 1) % n}
                code = [e for t, e in enumerate(code) if t not in drop]
                break
        else:
            pos: dict[int, list[int]] = {}
            for t, (c, _) in enumerate(code):
                pos.setdefault(c, []).append(t)
            for i in range(n):
                i2 = (i + 1) % n
                (c1, o1), (c2, o2) = code[i], code[i2]
                if o1 != o2 or signs[c1] == signs[c2]:
                    continue
                j1, j2 = _other(pos[c1], i), _other(pos[c2], i2)
                if (j1 + 1) % n != j2 and (j2 + 1) % n != j1:
                    continue
                # The two passages bound a bigon only if the rest of the
                # curve lies on one side of it; a crossing between the two
                # remaining arcs certifies that.
                q_lo = j1 if (j1 + 1) % n == j2 else j2
                la = (q_lo - i2 - 1) % n
                ra = [code[(i2 + 1 + t) % n][0] for t in range(la)]
                rb = [code[(q_lo + 2 + t) % n][0] for t in range(n - 4 - la)]
                if not set(ra) & set(rb):
                    continue
                drop = {i, i2, j1, j2}
                code = [e for t, e in enumerate(code) if t not in drop]
                break
            else:
                return code
    return code


def simplify(diagram: Diagram) -> Diagram:
    """Apply Reidemeister I and II reductions to a fixed point.

    Only single-component diagrams are reduced; for links the diagram is
    returned unchanged because a Gauss code alone cannot certify that a
    loop or bigon is empty of other components.
    """
    if diagram.n_components != 1:
        return diagram
    code = _reduce_knot(list(diagram.code[0]), diagram.signs)
    keep = sorted({c for c, _ in code})
    relabel = {c: t for t, c in enumerate(keep)}
    return Diagram((tuple((relabel[c], o) for c, o in code),),
                   tuple(diagram.signs[c] for c in keep))


def require_knot(diagram: Diagram) -> None:
    if diagram.n_components != 1:
        raise MultiComponent(f"diagram has {diagram.n_components} components")


def write_gauss_codes(diagrams: Iterable[Diagram]) -> str:
    """One signed Gauss code per line."""
    return "".join(d.gauss_code() + "\n" for d in diagrams)
