"""Limiting probabilities of patterns at a fixed section.

Deep inside a long polygon the interface state at a section is
distributed as ``u[a] v[a]`` (with ``u @ v = 1``), and a run of ``r``
consecutive column steps ``a -> ... -> b`` adding ``n`` edges occurs with
probability ``u[a] exp(g n) v[b] / lambda^r``.  A proper pattern of span
``p`` is such a run of ``p - 1`` hinge steps starting and ending in
two-strand states.  In the fixed-edge ensemble the same formula holds at
``g = g*(f)``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ..errors import PatternNotRepresentable
from ..lattice import Tube
from .columns import CrossSection, cross_section, pair_state
from .spectral import Eigen, check_primitive, dominant, g_star
from .system import TransferSystem


@dataclass(frozen=True)
class ColumnPattern:
    """A pattern as a left boundary pair and its hinge edge masks."""

    start: tuple[int, int]
    masks: tuple[int, ...]

    @property
    def span(self) -> int:
        return len(self.masks) + 1


def column_pattern(pattern, tube: Tube) -> ColumnPattern:
    """Column encoding of a proper :class:`~tubeknot.patterns.CsPattern`.

    Coordinates are internal (``L >= M``).
    """
    cs = cross_section(tube.L, tube.M)
    verts = {v for e in pattern.edges for v in e}
    lo = min(v[0] for v in verts)
    hi = max(v[0] for v in verts)
    left = sorted(tube.position(y, z) for x, y, z in verts if x == lo)
    if len(left) != 2:
        raise PatternNotRepresentable("left boundary must carry two strand ends")
    code = {e: i for i, e in enumerate(cs.edges)}
    masks = []
    for x in range(lo + 1, hi):
        m = 0
        for a, b in pattern.edges:
            if a[0] == b[0] == x:
                p, q = sorted((tube.position(*a[1:]), tube.position(*b[1:])))
                m |= 1 << code[(p, q)]
        masks.append(m)
    cp = ColumnPattern(tuple(left), tuple(masks))
    # the replay must reproduce the pattern's x-edges
    xe = {(a[0], a[1:]) for a, b in pattern.edges if a[0] != b[0]}
    mate = pair_state(cs.W, *cp.start)
    for t, m in enumerate(cp.masks):
        st = cs.step(mate, m)
        if st is None or st.loops:
            raise PatternNotRepresentable("hinge edges are not a legal column step")
        mate = st.mate
        x = lo + 1 + t
        out = {(x, tube.coords(p)) for p, q in enumerate(mate) if q >= 0}
        if out != {e for e in xe if e[0] == x}:
            raise PatternNotRepresentable("pattern x-edges disagree with its hinges")
    return cp


def replay(cs: CrossSection, cp: ColumnPattern, hamiltonian: bool = False):
    """``(start state, end state, edges added)`` of a column pattern."""
    mate = pair_state(cs.W, *cp.start)
    start = mate
    n = 0
    for m in cp.masks:
        st = cs.step(mate, m, hamiltonian)
        if st is None or st.loops:
            raise PatternNotRepresentable("not a legal run of column steps")
        mate = st.mate
        n += st.edges
    return start, mate, n


@dataclass
class PatternFamily:
    """Patterns grouped by ``(start state, end state, span, edges)``."""

    groups: Counter

    @classmethod
    def from_patterns(cls, system: TransferSystem, patterns: Iterable[ColumnPattern]) -> "PatternFamily":
        cs = system.cs
        groups: Counter = Counter()
        for cp in patterns:
            a, b, n = replay(cs, cp, system.hamiltonian)
            if a not in system.index or b not in system.index:
                raise PatternNotRepresentable("pattern boundary state is not a polygon state")
            groups[(system.index[a], system.index[b], cp.span, n)] += 1
        return cls(groups)

    def __len__(self) -> int:
        return sum(self.groups.values())


def family_probability(fam: PatternFamily, eig: Eigen) -> float:
    """Summed limiting probability of a family at weight ``eig.g``."""
    tot = 0.0
    for (a, b, span, n), c in fam.groups.items():
        tot += c * eig.u[a] * eig.v[b] * np.exp(eig.g * n - (span - 1) * eig.log_lam)
    return float(tot)


def ensemble_weight(system: TransferSystem, ensemble: str, param: float) -> float:
    """Edge weight ``g`` for ``ensemble`` in ``{"fixed-span", "fixed-edge", "hamiltonian"}``."""
    if ensemble == "fixed-span":
        return float(param)
    if ensemble == "fixed-edge":
        return g_star(system, param)
    if ensemble == "hamiltonian":
        if not system.hamiltonian:
            raise ValueError("hamiltonian ensemble needs a Hamiltonian system")
        return 0.0
    raise ValueError(f"unknown ensemble {ensemble!r}")


def limiting_pattern_probability(system: TransferSystem, pattern, ensemble: str = "fixed-span",
                                 param: float = 0.0) -> float:
    """Limiting probability that ``pattern`` occupies a fixed section.

    ``pattern`` is a :class:`ColumnPattern`, a proper ``CsPattern`` or a
    :class:`PatternFamily`.

    Raises
    ------
    NonPrimitiveMatrix
        If the transfer matrix is reducible or periodic.
    """
    check_primitive(system)
    g = ensemble_weight(system, ensemble, param)
    eig = dominant(system, g)
    if isinstance(pattern, PatternFamily):
        fam = pattern
    else:
        if not isinstance(pattern, ColumnPattern):
            pattern = column_pattern(pattern, system.tube)
        fam = PatternFamily.from_patterns(system, [pattern])
    return family_probability(fam, eig)


def single_column_total(system: TransferSystem, g: float) -> float:
    """Sum of the limiting probabilities of all one-column steps (equals 1)."""
    eig = dominant(system, g)
    w = system.mult * np.exp(g * system.dn)
    return float((eig.u[system.src] * w * eig.v[system.dst]).sum() / eig.lam)
