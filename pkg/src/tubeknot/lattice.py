"""Tube geometry and validated lattice polygons.

Coordinates are integer triples ``(x, y, z)``.  A tube ``T_{L,M}`` is the
set ``x >= 0, 0 <= y <= L, 0 <= z <= M``.  Tubes are stored with
``L >= M``; a tube requested with ``L < M`` records an axis swap so that
user coordinates round-trip unchanged.

Within a cross-section the vertex ``(y, z)`` has *position index*
``y * (M + 1) + z``; this numbering is shared by the transfer engine.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DoesNotTouchRoot,
    NotClosed,
    OddOrTooShort,
    OutOfTube,
    SelfIntersecting,
    SpanRangeError,
)

Vertex = tuple[int, int, int]

#: Direction tokens of the compact polygon format.
DIRECTIONS: dict[str, Vertex] = {
    "R": (1, 0, 0),
    "L": (-1, 0, 0),
    "U": (0, 1, 0),
    "D": (0, -1, 0),
    "F": (0, 0, 1),
    "B": (0, 0, -1),
}
_TOKEN = {v: k for k, v in DIRECTIONS.items()}


@dataclass(frozen=True)
class Tube:
    """The semi-infinite ``L x M`` tube.

    Parameters
    ----------
    L, M : int
        Cross-section extents.  If ``L < M`` the axes are swapped and
        :attr:`swapped` is set.
    """

    L: int
    M: int
    swapped: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.L < 0 or self.M < 0:
            raise ValueError("tube extents must be non-negative")
        if self.L < self.M:
            L, M = self.M, self.L
            object.__setattr__(self, "L", L)
            object.__setattr__(self, "M", M)
            object.__setattr__(self, "swapped", True)

    @classmethod
    def parse(cls, text: str) -> "Tube":
        """Parse ``"LxM"`` such as ``"3x1"``."""
        try:
            a, b = text.lower().split("x")
            return cls(int(a), int(b))
        except ValueError as exc:
            raise ValueError(f"bad tube {text!r}; expected LxM") from exc

    @property
    def W(self) -> int:
        """Number of vertices in a cross-section."""
        return (self.L + 1) * (self.M + 1)

    @property
    def label(self) -> str:
        return f"{self.L}x{self.M}"

    def position(self, y: int, z: int) -> int:
        return y * (self.M + 1) + z

    def coords(self, p: int) -> tuple[int, int]:
        return divmod(p, self.M + 1)

    def contains(self, v: Sequence[int]) -> bool:
        return v[0] >= 0 and 0 <= v[1] <= self.L and 0 <= v[2] <= self.M

    def to_internal(self, v: Sequence[int]) -> Vertex:
        """Map a user coordinate to the canonical ``L >= M`` frame."""
        x, y, z = (int(c) for c in v)
        return (x, z, y) if self.swapped else (x, y, z)

    # the swap is an involution
    to_external = to_internal

    def symmetries(self) -> list[tuple[bool, bool]]:
        """Cross-section reflections ``(flip_y, flip_z)``, identity first.

        The transpose is included only for square cross-sections and is
        handled separately by :meth:`transpose_allowed`.
        """
        return [(False, False), (True, False), (False, True), (True, True)]

    @property
    def transpose_allowed(self) -> bool:
        return self.L == self.M


def _canonical_cycle(verts: list[Vertex]) -> tuple[Vertex, ...]:
    n = len(verts)
    i = min(range(n), key=verts.__getitem__)
    fwd = verts[i:] + verts[:i]
    bwd = [verts[i]] + list(reversed(fwd[1:]))
    return tuple(fwd if fwd[1] <= bwd[1] else bwd)


class Polygon:
    """A validated self-avoiding polygon in a tube.

    Instances are immutable; equality and hashing use the canonical
    rotation and orientation (smallest vertex first, then the smaller of
    its two neighbours).  Use :func:`validate_polygon` to construct.
    """

    __slots__ = ("tube", "_v", "_key")

    def __init__(self, tube: Tube, canonical: tuple[Vertex, ...]):
        self.tube = tube
        self._v = np.asarray(canonical, dtype=np.int64).reshape(-1, 3)
        self._v.setflags(write=False)
        self._key = canonical

    @property
    def vertices(self) -> np.ndarray:
        """``(n, 3)`` array of canonical-frame vertices."""
        return self._v

    def vertex_list(self) -> list[Vertex]:
        return list(self._key)

    @property
    def n(self) -> int:
        return len(self._key)

    @property
    def span(self) -> int:
        return int(self._v[:, 0].max())

    def edges(self) -> list[tuple[Vertex, Vertex]]:
        k = self._key
        return [(k[i], k[(i + 1) % len(k)]) for i in range(len(k))]

    def external_vertices(self) -> list[Vertex]:
        return [self.tube.to_external(v) for v in self._key]

    def __eq__(self, other):
        return (
            isinstance(other, Polygon)
            and self.tube == other.tube
            and self._key == other._key
        )

    def __hash__(self):
        return hash((self.tube.L, self.tube.M, self._key))

    def __repr__(self):
        return f"Polygon(tube={self.tube.label}, n={self.n}, span={self.span})"


@dataclass(frozen=True)
class Hinge:
    """Vertices and edges of a polygon inside the plane ``x = k``."""

    k: int
    vertices: tuple[Vertex, ...]
    edges: tuple[tuple[Vertex, Vertex], ...]


def validate_polygon(
    cycle: Iterable[Sequence[int]], tube: Tube, internal: bool = False
) -> Polygon:
    """Validate a cyclic vertex list and return a canonical polygon.

    Parameters
    ----------
    cycle : iterable of (x, y, z)
        Vertices in cyclic order; the closing edge is implicit.  A
        repeated first vertex at the end is tolerated.
    tube : Tube
    internal : bool
        Set when the coordinates are already in the canonical frame.

    Raises
    ------
    OddOrTooShort, NotClosed, SelfIntersecting, OutOfTube, DoesNotTouchRoot
    """
    conv = (lambda v: tuple(int(c) for c in v)) if internal else tube.to_internal
    verts = [conv(v) for v in cycle]
    if len(verts) > 1 and verts[0] == verts[-1]:
        verts.pop()
    n = len(verts)
    if n < 4 or n % 2:
        raise OddOrTooShort(f"edge count {n} must be even and at least 4")
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        if sum(abs(p - q) for p, q in zip(a, b)) != 1:
            raise NotClosed(f"non-unit step {a} -> {b} at index {i}")
    if len(set(verts)) != n:
        raise SelfIntersecting("a vertex is visited twice")
    for v in verts:
        if not tube.contains(v):
            raise OutOfTube(f"vertex {v} outside tube {tube.label}")
    if min(v[0] for v in verts) != 0:
        raise DoesNotTouchRoot("no vertex in the plane x = 0")
    return Polygon(tube, _canonical_cycle(verts))


def span(polygon: Polygon) -> int:
    """Maximum x-coordinate of the polygon."""
    return polygon.span


def hinge(polygon: Polygon, k: int) -> Hinge:
    """Return the hinge ``H_k``: all polygon elements in the plane ``x = k``."""
    if not 0 <= k <= polygon.span:
        raise SpanRangeError(f"k={k} outside [0, {polygon.span}]")
    verts = tuple(v for v in polygon.vertex_list() if v[0] == k)
    edges = tuple(e for e in polygon.edges() if e[0][0] == k and e[1][0] == k)
    return Hinge(k, verts, edges)


def x_edge_counts(polygon: Polygon) -> list[int]:
    """Number of x-edges crossing each plane ``x = k + 1/2``, k = 0..span-1."""
    counts = [0] * polygon.span
    for a, b in polygon.edges():
        if a[0] != b[0]:
            counts[min(a[0], b[0])] += 1
    return counts


# ---------------------------------------------------------------- text I/O


def parse_vertices(text: str) -> list[Vertex]:
    """Parse the one-vertex-per-line format (``#`` starts a comment)."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            x, y, z = (int(t) for t in line.split())
            out.append((x, y, z))
    return out


def parse_directions(text: str) -> list[Vertex]:
    """Parse the compact format: ``@ x y z`` header then R/L/U/D/F/B tokens."""
    start = None
    steps: list[str] = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("@"):
            start = tuple(int(t) for t in line[1:].split())
        else:
            steps.extend(line.replace(",", " ").split())
    if start is None or len(start) != 3:
        raise ValueError("direction string needs an '@ x y z' header")
    verts = [start]
    for tok in steps:
        d = DIRECTIONS[tok.upper()]
        p = verts[-1]
        verts.append((p[0] + d[0], p[1] + d[1], p[2] + d[2]))
    if verts[-1] != verts[0]:
        raise NotClosed("direction string does not return to its start")
    return verts[:-1]


def read_polygon(text: str, tube: Tube) -> Polygon:
    """Read either text format and validate in ``tube``."""
    body = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if body and body[0].lstrip().startswith("@"):
        return validate_polygon(parse_directions(text), tube)
    return validate_polygon(parse_vertices(text), tube)


def format_vertices(polygon: Polygon) -> str:
    return "".join(f"{x} {y} {z}\n" for x, y, z in polygon.external_vertices())


def format_directions(polygon: Polygon) -> str:
    v = polygon.external_vertices()
    toks = []
    for i in range(len(v)):
        a, b = v[i], v[(i + 1) % len(v)]
        toks.append(_TOKEN[(b[0] - a[0], b[1] - a[1], b[2] - a[2])])
    return f"@ {v[0][0]} {v[0][1]} {v[0][2]}\n{' '.join(toks)}\n"


def transform(polygon: Polygon, flip_y: bool = False, flip_z: bool = False,
              transpose: bool = False) -> Polygon:
    """Apply a cross-section symmetry of the tube."""
    t = polygon.tube
    if transpose and t.L != t.M:
        raise ValueError("transpose needs a square cross-section")
    out = []
    for x, y, z in polygon.vertex_list():
        if flip_y:
            y = t.L - y
        if flip_z:
            z = t.M - z
        if transpose:
            y, z = z, y
        out.append((x, y, z))
    return validate_polygon(out, t, internal=True)
