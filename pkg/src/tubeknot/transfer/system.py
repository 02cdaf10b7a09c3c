"""Transfer systems: interface states, weighted transitions and boundary vectors.

A polygon of span ``s >= 1`` is read as one step out of the empty state
at hinge 0 (the start vector), ``s - 1`` interior steps (the transfer
matrix) and one closing step at hinge ``s`` that returns to the empty
state while completing exactly one loop (the end vector).  Every
transition carries the number of edges it adds, so the fixed-span
partition function is ``Q_s(g) = b_start(g) T(g)^(s-1) b_end(g)`` with
``T(g)[a, b] = sum over steps a -> b of exp(g * edges)``.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..errors import StateSpaceOverflow
from ..lattice import Tube
from .columns import EMPTY, CrossSection, Mate, cross_section

#: Default cap on the number of interface states.
MAX_STATES = 200_000


@dataclass(frozen=True, eq=False)
class TransferSystem:
    """Interface states and edge-resolved transitions of one tube.

    Attributes
    ----------
    tube : Tube
    hamiltonian : bool
        Only full-occupancy columns are admitted.
    states : tuple of Mate
        Interface states that lie on at least one polygon.
    src, dst, dn, mult : ndarray
        Interior transitions: ``mult`` steps from ``states[src]`` to
        ``states[dst]`` each adding ``dn`` edges.
    start_dst, start_dn, start_mult : ndarray
        Steps out of the empty state at hinge 0.
    end_src, end_dn, end_mult : ndarray
        Closing steps into the empty state.
    flat : dict
        ``edges -> count`` of span-0 polygons (lying in the plane x = 0).
    """

    tube: Tube
    hamiltonian: bool
    states: tuple
    src: np.ndarray
    dst: np.ndarray
    dn: np.ndarray
    mult: np.ndarray
    start_dst: np.ndarray
    start_dn: np.ndarray
    start_mult: np.ndarray
    end_src: np.ndarray
    end_dn: np.ndarray
    end_mult: np.ndarray
    flat: dict
    index: dict = field(compare=False, repr=False, default_factory=dict)

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def cs(self) -> CrossSection:
        return cross_section(self.tube.L, self.tube.M)

    # ------------------------------------------------------------ weights

    def matrix(self, g: float = 0.0) -> sp.csr_matrix:
        """``T(g)`` as a sparse matrix (rows are source states)."""
        w = self.mult * np.exp(g * self.dn)
        n = self.n_states
        return sp.csr_matrix((w, (self.src, self.dst)), shape=(n, n))

    def start_vector(self, g: float = 0.0) -> np.ndarray:
        out = np.zeros(self.n_states)
        np.add.at(out, self.start_dst, self.start_mult * np.exp(g * self.start_dn))
        return out

    def end_vector(self, g: float = 0.0) -> np.ndarray:
        out = np.zeros(self.n_states)
        np.add.at(out, self.end_src, self.end_mult * np.exp(g * self.end_dn))
        return out

    def max_edges_per_column(self) -> int:
        return int(max(self.dn.max(initial=0), self.start_dn.max(initial=0), self.end_dn.max(initial=0)))


def _empty(W: int) -> Mate:
    return tuple([EMPTY] * W)


def build(tube: Tube, hamiltonian: bool = False, max_states: int = MAX_STATES) -> TransferSystem:
    """Enumerate interface states and transitions of a tube.

    States are generated by breadth-first search from the empty state and
    trimmed to those from which a polygon can still be closed.

    Raises
    ------
    StateSpaceOverflow
        If more than ``max_states`` states are reached.
    """
    cs = cross_section(tube.L, tube.M)
    empty = _empty(cs.W)
    start: dict = defaultdict(int)
    flat: dict = defaultdict(int)
    for st in cs.transitions(empty, hamiltonian):
        if st.mate == empty:
            if st.loops == 1:
                flat[st.edges] += 1
        elif st.loops == 0:
            start[(st.mate, st.edges)] += 1
    seen = {m for m, _ in start}
    queue = list(seen)
    inner: dict = defaultdict(int)
    end: dict = defaultdict(int)
    while queue:
        if len(seen) > max_states:
            raise StateSpaceOverflow(len(seen), max_states)
        a = queue.pop()
        for st in cs.transitions(a, hamiltonian):
            if st.mate == empty:
                if st.loops == 1:
                    end[(a, st.edges)] += 1
            elif st.loops == 0:
                inner[(a, st.mate, st.edges)] += 1
                if st.mate not in seen:
                    seen.add(st.mate)
                    queue.append(st.mate)
    # keep states that can reach a closing step
    pred = defaultdict(set)
    for a, b, _ in inner:
        pred[b].add(a)
    alive = {a for a, _ in end}
    stack = list(alive)
    while stack:
        b = stack.pop()
        for a in pred[b]:
            if a not in alive:
                alive.add(a)
                stack.append(a)
    states = tuple(sorted(alive))
    index = {m: i for i, m in enumerate(states)}

    def arr(vals, dtype=np.int64):
        return np.array(vals, dtype=dtype)

    tr = [(index[a], index[b], e, c) for (a, b, e), c in inner.items() if a in index and b in index]
    tr.sort()
    stt = sorted((index[m], e, c) for (m, e), c in start.items() if m in index)
    ent = sorted((index[m], e, c) for (m, e), c in end.items())
    return TransferSystem(
        tube=tube,
        hamiltonian=hamiltonian,
        states=states,
        src=arr([t[0] for t in tr]),
        dst=arr([t[1] for t in tr]),
        dn=arr([t[2] for t in tr]),
        mult=arr([t[3] for t in tr]),
        start_dst=arr([t[0] for t in stt]),
        start_dn=arr([t[1] for t in stt]),
        start_mult=arr([t[2] for t in stt]),
        end_src=arr([t[0] for t in ent]),
        end_dn=arr([t[1] for t in ent]),
        end_mult=arr([t[2] for t in ent]),
        flat=dict(flat),
        index=index,
    )
