"""Exact census of proper cs-patterns of a given span.

A proper pattern of span ``p`` is a run of ``p - 1`` consecutive hinges
entered by two strands through its left 2-section and left by two through
its right 2-section, with at least four strands through every interior
half-plane.  Patterns are generated column by column from the interface
state that pairs the two left ends (they are joined through the left
part of the polygon), and must leave two paired strands at the right.

Exhaustive generation is far too large for span 8 in ``T_{2,1}`` or span
5 in ``T_{3,1}``, so candidates are first pruned with the Fox colouring
programme of :mod:`.coloring`: for a target knot ``K`` and a prime ``q``
dividing ``det K``, only patterns whose denominator closure is
``q``-colourable can have ``DC = K``.  Survivors are materialised and
classified exactly by Alexander polynomials.

Patterns are counted once per strand-pair configuration; reversing the
strand orientation does not produce a new pattern.
"""
from __future__ import annotations

import itertools
import os
from collections import Counter, defaultdict
from dataclasses import dataclass, field

from ..knots.table import KnotId
from ..lattice import Tube
from ..patterns import CsPattern, classify
from ..transfer.columns import CrossSection, Mate, column_edges, cross_section, n_strands, pair_state
from .coloring import PAIR_BASIS, SlabColoring, closes_colourable
from .hamiltonian import completable_pairs

Joint = tuple  # (mate, R, dK)


@dataclass
class PatternRecord:
    """One materialised pattern with its closure data."""

    start: tuple[int, int]
    masks: tuple[int, ...]
    dc: KnotId
    nc1: KnotId
    nc2: KnotId
    classification: str
    n_edges: int


@dataclass
class SpanCensus:
    """All colour-surviving patterns of one span, classified."""

    tube: Tube
    span: int
    hamiltonian: bool
    prime: int
    candidates: int
    counts: Counter = field(default_factory=Counter)  # (dc name, class) -> count
    records: list[PatternRecord] | None = None

    def count(self, knot: str, cls: str) -> int:
        return self.counts.get((knot, cls), 0)


def pattern_strands(cs: CrossSection, start: tuple[int, int], masks) -> tuple:
    """Vertex lists of the two strands of a generated pattern.

    The left ends sit at ``x = 0``, hinges at ``x = 1 .. len(masks)`` and
    the right ends at ``x = len(masks) + 1``.
    """
    tube = cs.tube
    adj: dict = defaultdict(list)
    edges = column_edges(cs, masks, pair_state(cs.W, *start), x0=1)
    for p in start:
        edges.append(((0, *tube.coords(p)), (1, *tube.coords(p))))
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    strands = []
    for p in start:
        prev, cur = None, (0, *tube.coords(p))
        walk = [cur]
        while True:
            nxt = [w for w in adj[cur] if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            walk.append(cur)
        strands.append(tuple(walk))
    return tuple(strands)


class PatternEngine:
    """Layered colouring programme over patterns of one span.

    Parameters
    ----------
    tube : Tube
    span : int
        Pattern span ``p >= 2`` (``p - 1`` hinges).
    hamiltonian : bool
        Restrict to patterns that can occur in Hamiltonian polygons.
    prime : int or None
        Colouring prime; candidates are the q-colourable closures.  ``None``
        keeps every proper pattern.
    boundary_columns : int, optional
        For Hamiltonian patterns, the largest number of full columns the
        outer parts of the polygon may use to join the boundary pair; see
        :func:`~.hamiltonian.completable_pairs`.
    """

    def __init__(self, tube: Tube, span: int, hamiltonian: bool = False, prime: int = 3,
                 boundary_columns: int | None = None):
        if span < 2:
            raise ValueError("proper patterns have span at least 2")
        self.tube = tube
        self.span = span
        self.hamiltonian = hamiltonian
        self.prime = prime
        self.cs = cross_section(tube.L, tube.M)
        self.col = SlabColoring(self.cs, prime) if prime else None
        W = self.cs.W
        if hamiltonian:
            self.pairs = sorted(completable_pairs(self.cs, boundary_columns))
        else:
            self.pairs = list(itertools.combinations(range(W), 2))
        self._trans: dict[Mate, list] = {}
        self._build()

    def _steps(self, mate: Mate):
        hit = self._trans.get(mate)
        if hit is None:
            hit = [s for s in self.cs.transitions(mate, self.hamiltonian) if s.loops == 0]
            self._trans[mate] = hit
        return hit

    def _build(self):
        r = self.span - 1
        pairset = set(self.pairs)
        layer0 = {}
        for u, v in self.pairs:
            layer0[(pair_state(self.cs.W, u, v), PAIR_BASIS, 0)] = (u, v)
        layers: list[dict[Joint, list]] = [dict.fromkeys(layer0, None)]
        edges: list[dict[Joint, list[tuple[int, Joint]]]] = []
        for t in range(r):
            last = t == r - 1
            nxt: dict[Joint, None] = {}
            out: dict[Joint, list] = {}
            for joint in layers[-1]:
                mate, R, dK = joint
                lst = []
                for st in self._steps(mate):
                    k = n_strands(st.mate)
                    if last:
                        if k != 2:
                            continue
                        ends = tuple(q for q, m in enumerate(st.mate) if m >= 0)
                        if self.hamiltonian and ends not in pairset:
                            continue
                    elif k < 4:
                        continue
                    if self.col is None:
                        Rn, dKn = R, dK
                    else:
                        Rn, dKn = self.col.advance(mate, R, dK, st.mask, st.mate)
                        if last and not closes_colourable(Rn, dKn):
                            continue
                    j2 = (st.mate, Rn, dKn)
                    lst.append((st.mask, j2))
                    nxt[j2] = None
                out[joint] = lst
            edges.append(out)
            layers.append(nxt)
        # backward pruning
        alive = set(layers[-1])
        for t in range(r - 1, -1, -1):
            keep = {}
            for joint, lst in edges[t].items():
                good = [(m, j) for m, j in lst if j in alive]
                if good:
                    keep[joint] = good
            edges[t] = keep
            alive = set(keep)
        self.layer0 = {j: pair for j, pair in layer0.items() if j in alive}
        self.edges = edges

    def count(self) -> int:
        """Number of colour-surviving patterns."""
        r = self.span - 1
        ways = {j: 1 for j in self.edges[r - 1]}
        memo = [dict() for _ in range(r)]
        for t in range(r - 1, -1, -1):
            for joint, lst in self.edges[t].items():
                memo[t][joint] = sum(1 if t == r - 1 else memo[t + 1][j] for _, j in lst)
        return sum(memo[0].get(j, 0) for j in self.layer0)

    def candidates(self):
        """Yield ``(start_pair, masks)`` of every colour-surviving pattern."""
        r = self.span - 1
        for joint, pair in self.layer0.items():
            stack = [(joint, 0, ())]
            while stack:
                j, t, masks = stack.pop()
                for m, j2 in self.edges[t].get(j, ()):
                    if t == r - 1:
                        yield pair, masks + (m,)
                    else:
                        stack.append((j2, t + 1, masks + (m,)))


def _classify_one(cs, tube, pair, masks):
    s1, s2 = pattern_strands(cs, pair, masks)
    pat = CsPattern.from_strands(s1, s2, tube)
    data = classify(pat)
    return PatternRecord(pair, masks, data.dc, data.nc1, data.nc2, data.classification, pat.n_edges)


def _classify_chunk(args):
    tube, items = args
    cs = cross_section(tube.L, tube.M)
    return [_classify_one(cs, tube, pair, masks) for pair, masks in items]


def _chunks(it, size):
    it = iter(it)
    while True:
        block = list(itertools.islice(it, size))
        if not block:
            return
        yield block


def span_census(tube: Tube, span: int, hamiltonian: bool = False, prime: int = 3,
                keep_records: bool = False, boundary_columns: int | None = None,
                threads: int | None = None) -> SpanCensus:
    """Classify every q-colourable proper pattern of one span.

    Classification runs in ``threads`` worker processes (default
    :func:`thread_count`); results do not depend on the worker count.
    """
    eng = PatternEngine(tube, span, hamiltonian, prime, boundary_columns)
    out = SpanCensus(tube, span, hamiltonian, prime, 0, Counter(), [] if keep_records else None)
    threads = thread_count() if threads is None else max(1, threads)

    def absorb(recs):
        for rec in recs:
            out.candidates += 1
            out.counts[(rec.dc.name, rec.classification)] += 1
            if keep_records:
                out.records.append(rec)

    if threads == 1:
        for pair, masks in eng.candidates():
            absorb([_classify_one(eng.cs, tube, pair, masks)])
        return out
    import multiprocessing as mp

    with mp.get_context("spawn").Pool(threads) as pool:
        jobs = ((tube, block) for block in _chunks(eng.candidates(), 2000))
        for recs in pool.imap(_classify_chunk, jobs):
            absorb(recs)
    return out


def thread_count() -> int:
    env = os.environ.get("TUBEKNOT_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1
