"""Exact i.i.d. sampling of fixed-span polygons by backward weights.

For a span-``s`` polygon the interface after hinge ``k`` (``k = 0 .. s-1``)
is a transfer state.  The suffix weight ``v_k[a]`` is the total weight
``sum exp(g * edges)`` of all ways to finish a polygon from state ``a``
after hinge ``k``; ``v_{s-1}`` is the end vector and
``v_k = T(g) v_{k+1}``.  A polygon is drawn forwards by picking each
column step with probability proportional to its own weight times the
suffix weight of the state it leads to, which gives every polygon
probability ``exp(g |pi|) / Q_s(g)``.

Suffix vectors are stored scaled to unit maximum with their log scale
factors kept separately, so long spans do not underflow.

Random numbers come from NumPy's counter-based Philox generator keyed by
``(seed, replica, block)`` where draws are grouped in fixed blocks of
:data:`BLOCK` polygons; a draw's random stream depends only on the seed,
the replica and its index.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..lattice import Polygon, Tube, validate_polygon
from ..transfer.columns import EMPTY, column_edges
from ..transfer.system import TransferSystem, build

BLOCK = 4096
RNG_NAME = "numpy.random.Philox (key = SeedSequence(seed, replica, block))"


@dataclass
class StepTable:
    """Mask-level steps of one state: masks, target indices, edge counts."""

    masks: np.ndarray
    dst: np.ndarray
    dn: np.ndarray


def _step_tables(system: TransferSystem):
    cs = system.cs
    empty = tuple([EMPTY] * cs.W)
    idx = system.index

    def table(steps):
        return StepTable(
            np.array([m for m, _, _ in steps], dtype=np.int64),
            np.array([d for _, d, _ in steps], dtype=np.int64),
            np.array([e for _, _, e in steps], dtype=np.int64),
        )

    start = []
    for st in cs.transitions(empty, system.hamiltonian):
        if st.loops == 0 and st.mate in idx:
            start.append((st.mask, idx[st.mate], st.edges))
    inner, close = [], []
    for a in system.states:
        ins, cls = [], []
        for st in cs.transitions(a, system.hamiltonian):
            if st.mate == empty:
                if st.loops == 1:
                    cls.append((st.mask, -1, st.edges))
            elif st.loops == 0 and st.mate in idx:
                ins.append((st.mask, idx[st.mate], st.edges))
        inner.append(table(ins))
        close.append(table(cls))
    return table(start), inner, close


_TABLES: dict = {}


def step_tables(system: TransferSystem):
    key = id(system)
    hit = _TABLES.get(key)
    if hit is None or hit[0] is not system:
        hit = (system, _step_tables(system))
        _TABLES[key] = hit
    return hit[1]


@dataclass
class SamplerTables:
    """Suffix weights for one span and edge weight.

    Attributes
    ----------
    v : list of ndarray
        ``v[k]`` is the scaled suffix weight after hinge ``k``.
    logscale : list of float
        ``log`` of the scale removed from ``v[k]``.
    log_total : float
        ``log Q_s(g)``.
    """

    system: TransferSystem
    s: int
    g: float
    v: list
    logscale: list
    log_total: float
    start: StepTable = field(repr=False)
    inner: list = field(repr=False)
    close: list = field(repr=False)

    @property
    def hamiltonian(self) -> bool:
        return self.system.hamiltonian

    @property
    def tube(self) -> Tube:
        return self.system.tube

    def total_weight(self) -> float:
        """``Q_s(g)`` as a float."""
        return math.exp(self.log_total)

    def suffix(self, k: int) -> np.ndarray:
        """Unscaled ``v_k`` (may overflow for long spans)."""
        return self.v[k] * math.exp(self.logscale[k])


def build_sampler(tube: Tube | TransferSystem, s: int, g: float = 0.0,
                  hamiltonian: bool = False) -> SamplerTables:
    """Suffix-weight tables for span-``s`` polygons at edge weight ``g``."""
    if s < 1:
        raise ValueError("sampling needs span s >= 1")
    system = tube if isinstance(tube, TransferSystem) else cached_system(tube, hamiltonian)
    start, inner, close = step_tables(system)
    T = system.matrix(g)
    v_last = system.end_vector(g)
    vs = [None] * s
    ls = [0.0] * s
    m = v_last.max()
    vs[s - 1], ls[s - 1] = v_last / m, math.log(m)
    for k in range(s - 2, -1, -1):
        w = T @ vs[k + 1]
        m = w.max()
        vs[k], ls[k] = w / m, ls[k + 1] + math.log(m)
    tot = float((np.exp(g * start.dn) * vs[0][start.dst]).sum())
    return SamplerTables(system, s, g, vs, ls, ls[0] + math.log(tot), start, inner, close)


@lru_cache(maxsize=None)
def cached_system(tube: Tube, hamiltonian: bool) -> TransferSystem:
    return build(tube, hamiltonian)


def _rng(seed: int, replica: int, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence([seed, replica, block])
    return np.random.Generator(np.random.Philox(ss))


def _choose(rng_u: np.ndarray, weights: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(weights)
    cdf /= cdf[-1]
    return np.minimum(np.searchsorted(cdf, rng_u, side="right"), len(weights) - 1)


def _draw_block(tab: SamplerTables, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Mask sequences and edge counts for uniforms ``u`` of shape (N, s + 1)."""
    N, s, g = u.shape[0], tab.s, tab.g
    masks = np.zeros((N, s + 1), dtype=np.int64)
    edges = np.zeros(N, dtype=np.int64)
    st = tab.start
    j = _choose(u[:, 0], np.exp(g * st.dn) * tab.v[0][st.dst])
    masks[:, 0] = st.masks[j]
    edges += st.dn[j]
    state = st.dst[j]
    for k in range(1, s + 1):
        nxt = np.empty(N, dtype=np.int64)
        for a in np.unique(state):
            sel = np.nonzero(state == a)[0]
            if k < s:
                t = tab.inner[a]
                w = np.exp(g * t.dn) * tab.v[k][t.dst]
            else:
                t = tab.close[a]
                w = np.exp(g * t.dn)
            j = _choose(u[sel, k], w)
            masks[sel, k] = t.masks[j]
            edges[sel] += t.dn[j]
            nxt[sel] = t.dst[j]
        state = nxt
    return masks, edges


@dataclass
class SampleBatch:
    """Polygons drawn from one set of tables, stored as column masks.

    Indexing or iterating yields validated :class:`Polygon` objects.
    """

    tables: SamplerTables
    seed: int
    replica: int
    masks: np.ndarray
    edges: np.ndarray

    def __len__(self) -> int:
        return len(self.masks)

    def polygon(self, i: int) -> Polygon:
        return masks_to_polygon(self.tables.system, self.masks[i])

    def __getitem__(self, i: int) -> Polygon:
        return self.polygon(i)

    def __iter__(self):
        for i in range(len(self)):
            yield self.polygon(i)

    def keys(self) -> list[bytes]:
        """Hashable identity of each draw (its mask sequence)."""
        return [row.tobytes() for row in self.masks]


def draw(tables: SamplerTables, seed: int, N: int, replica: int = 0) -> SampleBatch:
    """Draw ``N`` independent polygons.

    Draw ``i`` uses the block ``i // BLOCK`` generator, so a batch is a
    prefix of any larger batch with the same seed and replica.
    """
    s = tables.s
    out_m, out_e = [], []
    for b in range(0, (N + BLOCK - 1) // BLOCK):
        n = min(BLOCK, N - b * BLOCK)
        u = _rng(seed, replica, b).random((BLOCK, s + 1))[:n]
        m, e = _draw_block(tables, u)
        out_m.append(m)
        out_e.append(e)
    masks = np.concatenate(out_m) if out_m else np.zeros((0, s + 1), dtype=np.int64)
    edges = np.concatenate(out_e) if out_e else np.zeros(0, dtype=np.int64)
    return SampleBatch(tables, seed, replica, masks, edges)


def masks_to_polygon(system: TransferSystem, masks) -> Polygon:
    """Rebuild a polygon from its hinge masks."""
    edges = column_edges(system.cs, [int(m) for m in masks])
    adj: dict = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    first = min(adj)
    cyc = [first]
    prev, cur = None, first
    while True:
        a, b = adj[cur]
        nxt = b if a == prev else a
        if nxt == first:
            break
        cyc.append(nxt)
        prev, cur = cur, nxt
    return validate_polygon(cyc, system.tube, internal=True)
