"""Boundary conditions for patterns inside Hamiltonian polygons."""
from __future__ import annotations

from ..transfer.columns import EMPTY, CrossSection, n_strands


def completable_pairs(cs: CrossSection, max_columns: int | None = None) -> set[tuple[int, int]]:
    """Position pairs ``(u, v)`` at which a Hamiltonian polygon can have a 2-section.

    A pair qualifies when some Hamiltonian path through the first ``k``
    full cross-sections joins ``(k - 1, u)`` to ``(k - 1, v)``; the two
    x-edges leaving those ends then form a 2-section.  By reflection in x
    the same pairs describe the part right of a 2-section.

    Parameters
    ----------
    cs : CrossSection
    max_columns : int, optional
        Largest ``k`` considered.  ``None`` iterates until the reachable
        interface states stop changing.
    """
    start = tuple([EMPTY] * cs.W)
    frontier = {start}
    seen: set = set()
    pairs: set[tuple[int, int]] = set()
    k = 0
    while frontier and (max_columns is None or k < max_columns):
        k += 1
        nxt = set()
        for mate in frontier:
            for st in cs.transitions(mate, hamiltonian=True):
                if st.loops or n_strands(st.mate) == 0:
                    continue
                if n_strands(st.mate) == 2:
                    u, v = (p for p, q in enumerate(st.mate) if q >= 0)
                    pairs.add((u, v))
                if st.mate not in seen:
                    seen.add(st.mate)
                    nxt.add(st.mate)
        frontier = nxt
    return pairs
