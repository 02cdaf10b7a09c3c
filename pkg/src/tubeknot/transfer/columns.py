"""Column-by-column construction of tube polygons.

A polygon is read one hinge at a time in increasing x.  Between hinges
``k`` and ``k+1`` the polygon crosses the half-integer plane at a set of
positions; the connectivity of these strand ends *through the part to
the left* is a perfect matching, stored as a ``mate`` tuple with
``mate[p] = q`` when ends ``p`` and ``q`` are joined and ``-1`` when no
strand crosses at ``p``.  This tuple is the interface state.

A column step is fixed by the incoming state and the set ``E`` of
in-plane hinge edges, encoded as a bitmask over :attr:`CrossSection.edges`.
The outgoing occupancy is ``S' = S xor deg1(E)``; the step is legal when
no vertex has degree above two, vertices of ``deg2(E)`` are not already
occupied, and no closed loop is formed before the final column.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..lattice import Tube

Mate = tuple[int, ...]
EMPTY = -1


@dataclass(frozen=True)
class Step:
    """Result of one column step."""

    mask: int
    mate: Mate
    edges: int  # edges added: hinge edges plus outgoing x-edges
    loops: int  # closed loops completed in this column


class CrossSection:
    """Precomputed hinge geometry of a tube cross-section.

    Parameters
    ----------
    tube : Tube
    """

    def __init__(self, tube: Tube):
        self.tube = tube
        L, M = tube.L, tube.M
        W = tube.W
        self.W = W
        self.full = (1 << W) - 1
        edges = []
        for y in range(L + 1):
            for z in range(M + 1):
                p = tube.position(y, z)
                if y < L:
                    edges.append((p, tube.position(y + 1, z)))
                if z < M:
                    edges.append((p, tube.position(y, z + 1)))
        self.edges: tuple[tuple[int, int], ...] = tuple(edges)
        self.n_masks = 1 << len(edges)
        self._pre = [self._analyse(m) for m in range(self.n_masks)]

    def edge_axis(self, e: int) -> str:
        a, b = self.edges[e]
        return "y" if b - a == self.tube.M + 1 else "z"

    def mask_edges(self, mask: int) -> list[tuple[int, int]]:
        return [self.edges[e] for e in range(len(self.edges)) if mask >> e & 1]

    def _analyse(self, mask: int):
        W = self.W
        adj = [[] for _ in range(W)]
        nedge = 0
        for e, (a, b) in enumerate(self.edges):
            if mask >> e & 1:
                adj[a].append(b)
                adj[b].append(a)
                nedge += 1
        deg = [len(a) for a in adj]
        if max(deg) > 2:
            return None
        d1 = sum(1 << v for v in range(W) if deg[v] == 1)
        d2 = sum(1 << v for v in range(W) if deg[v] == 2)
        other = [EMPTY] * W
        seen = [False] * W
        for v in range(W):
            if deg[v] == 1 and not seen[v]:
                prev, cur = -1, v
                seen[v] = True
                while True:
                    nxt = [w for w in adj[cur] if w != prev]
                    if not nxt:
                        break
                    prev, cur = cur, nxt[0]
                    seen[cur] = True
                other[v], other[cur] = cur, v
        cycles = 0
        for v in range(W):
            if deg[v] == 2 and not seen[v]:
                cycles += 1
                stack = [v]
                while stack:
                    c = stack.pop()
                    if not seen[c]:
                        seen[c] = True
                        stack.extend(adj[c])
        return d1, d2, tuple(other), cycles, nedge

    def step(self, mate: Mate, mask: int, hamiltonian: bool = False) -> Step | None:
        """Apply hinge edges ``mask`` to interface state ``mate``.

        Returns ``None`` for an illegal combination.  Closed loops are
        reported in :attr:`Step.loops` rather than rejected, so callers
        decide whether a loop is premature or closes the polygon.
        """
        pre = self._pre[mask]
        if pre is None:
            return None
        d1, d2, other, cycles, nedge = pre
        S = 0
        for p, q in enumerate(mate):
            if q >= 0:
                S |= 1 << p
        if d2 & S:
            return None
        if hamiltonian and (S | d1 | d2) != self.full:
            return None
        out = S ^ d1
        W = self.W
        new = [EMPTY] * W
        used_s = used_e = 0
        for v in range(W):
            if not (out >> v & 1) or new[v] >= 0:
                continue
            cur, came = v, "O"
            while True:
                if came != "L" and S >> cur & 1:
                    cur, came = mate[cur], "L"
                    used_s += 1
                elif came != "P" and d1 >> cur & 1:
                    cur, came = other[cur], "P"
                    used_e += 1
                else:
                    break
            new[v], new[cur] = cur, v
        loops = cycles
        n_s = bin(S).count("1") // 2
        n_e = bin(d1).count("1") // 2
        if used_s < n_s or used_e < n_e:
            loops += self._closed_loops(mate, S, d1, other, new)
        return Step(mask, tuple(new), nedge + bin(out).count("1"), loops)

    def _closed_loops(self, mate, S, d1, other, new) -> int:
        """Count loops made only of left links and hinge paths."""
        W = self.W
        done = [False] * W
        for v in range(W):
            if new[v] >= 0:
                done[v] = True
        loops = 0
        for v in range(W):
            if not (S >> v & 1) or done[v]:
                continue
            # such a vertex lies in deg1(E); alternate left link / path
            cur = v
            loops += 1
            while not done[cur]:
                done[cur] = True
                w = mate[cur]
                done[w] = True
                cur = other[w]
        return loops

    def transitions(self, mate: Mate, hamiltonian: bool = False) -> list[Step]:
        """All legal steps out of ``mate`` (loops included)."""
        out = []
        for mask in range(self.n_masks):
            st = self.step(mate, mask, hamiltonian)
            if st is not None:
                out.append(st)
        return out


@lru_cache(maxsize=None)
def cross_section(L: int, M: int) -> CrossSection:
    return CrossSection(Tube(L, M))


def occupancy(mate: Mate) -> int:
    return sum(1 << p for p, q in enumerate(mate) if q >= 0)


def n_strands(mate: Mate) -> int:
    return sum(1 for q in mate if q >= 0)


def pair_state(W: int, u: int, v: int) -> Mate:
    m = [EMPTY] * W
    m[u], m[v] = v, u
    return tuple(m)


def column_edges(cs: CrossSection, masks, mate: Mate | None = None, x0: int = 0):
    """Lattice edges laid down by a run of column steps.

    Hinge ``t`` sits at ``x = x0 + t``; each step contributes its in-plane
    edges and the x-edges leaving the hinge.  ``mate`` is the incoming
    state (empty when omitted).
    """
    tube = cs.tube
    if mate is None:
        mate = tuple([EMPTY] * cs.W)
    out = []
    for t, mask in enumerate(masks):
        x = x0 + t
        for a, b in cs.mask_edges(mask):
            out.append(((x, *tube.coords(a)), (x, *tube.coords(b))))
        st = cs.step(mate, mask)
        if st is None:
            raise ValueError(f"illegal column step at hinge {x}")
        mate = st.mate
        for p, q in enumerate(mate):
            if q >= 0:
                c = tube.coords(p)
                out.append(((x, *c), (x + 1, *c)))
    return out
