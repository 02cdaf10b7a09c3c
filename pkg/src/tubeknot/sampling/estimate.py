"""Knot-pattern statistics of sampled polygons with 95% intervals.

Proportions use Wilson score intervals and means use normal intervals.

Statistics per knot ``K``:

``NonLocal`` / ``Local`` / ``Indeterminate``
    fraction of polygons containing at least one proper pattern of that
    class with ``DC = K``;
``NonLocalFraction``
    fraction of the polygons with some ``K`` pattern that contain a
    non-local one, i.e. ``P(K^NL) / P(K)``;
``MeanSpan:NonLocal`` / ``MeanSpan:Local``
    mean span of the ``K`` patterns of that class.

A statistic whose sample cell is empty is absent from the output.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import binomtest, norm

from ..errors import EmptyClassCell
from ..lattice import Polygon
from ..patterns import INDETERMINATE, LOCAL, NONLOCAL, NOT_KNOT, classify, decompose, denominator_closure

Z95 = float(norm.ppf(0.975))


@dataclass(frozen=True)
class PatternObs:
    """A proper knot pattern found in a sampled polygon."""

    knot: str
    cls: str
    span: int
    n_edges: int


@dataclass(frozen=True)
class EstimateRecord:
    statistic: str
    knot: str
    estimate: float
    ci_lo: float
    ci_hi: float
    n: int
    s: int
    g: float
    ensemble: str
    tube: str

    def row(self) -> list:
        return [self.tube, self.s, self.g, self.ensemble, self.knot, self.statistic,
                repr(self.estimate), repr(self.ci_lo), repr(self.ci_hi), self.n]


ESTIMATE_HEADER = ["tube", "s", "g", "ensemble", "knot", "class", "estimate", "ci_lo", "ci_hi", "n"]


def wilson(k: int, n: int) -> tuple[float, float, float]:
    """Point estimate and 95% Wilson interval for ``k`` successes in ``n``."""
    if n <= 0:
        raise EmptyClassCell("proportion with no trials")
    ci = binomtest(k, n).proportion_ci(confidence_level=0.95, method="wilson")
    return k / n, float(ci.low), float(ci.high)


def mean_ci(values: Sequence[float]) -> tuple[float, float, float]:
    if len(values) == 0:
        raise EmptyClassCell("mean of an empty cell")
    a = np.asarray(values, dtype=float)
    m = float(a.mean())
    if len(a) < 2:
        return m, m, m
    half = Z95 * float(a.std(ddof=1)) / math.sqrt(len(a))
    return m, m - half, m + half


class PatternClassifier:
    """Classifies the proper patterns of polygons, caching by shape."""

    def __init__(self):
        self._cache: dict = {}

    def _key(self, pat) -> tuple:
        lo = min(v[0] for s in pat.strands for v in s)
        return tuple(tuple((x - lo, y, z) for x, y, z in s) for s in pat.strands)

    def patterns(self, polygon: Polygon) -> list[PatternObs]:
        out = []
        for pat in decompose(polygon):
            if pat.kind != "Proper":
                continue
            key = self._key(pat)
            data = self._cache.get(key)
            if data is None:
                _, dc = denominator_closure(pat)
                data = (dc.name, NOT_KNOT) if dc.is_unknot else (dc.name, classify(pat).classification)
                self._cache[key] = data
            if data[1] == NOT_KNOT:
                continue
            out.append(PatternObs(data[0], data[1], pat.span, pat.n_edges))
        return out


@dataclass
class SampleSummary:
    """Per-knot tallies accumulated over polygons."""

    n_polygons: int = 0
    with_class: Counter = field(default_factory=Counter)  # (knot, cls) -> polygons
    with_knot: Counter = field(default_factory=Counter)  # knot -> polygons
    spans: dict = field(default_factory=dict)  # (knot, cls) -> list of spans

    def add(self, obs: Iterable[PatternObs]) -> None:
        self.n_polygons += 1
        obs = list(obs)
        for k, c in {(o.knot, o.cls) for o in obs}:
            self.with_class[(k, c)] += 1
        for k in {o.knot for o in obs}:
            self.with_knot[k] += 1
        for o in obs:
            self.spans.setdefault((o.knot, o.cls), []).append(o.span)

    def merge(self, other: "SampleSummary") -> "SampleSummary":
        out = SampleSummary(self.n_polygons + other.n_polygons,
                            self.with_class + other.with_class, self.with_knot + other.with_knot, {})
        for d in (self.spans, other.spans):
            for k, v in d.items():
                out.spans.setdefault(k, []).extend(v)
        return out


def summarise(samples: Iterable[Polygon], classifier: PatternClassifier | None = None) -> SampleSummary:
    classifier = classifier or PatternClassifier()
    summ = SampleSummary()
    for p in samples:
        summ.add(classifier.patterns(p))
    return summ


def statistic(summ: SampleSummary, name: str, knot: str) -> tuple[float, float, float, int]:
    """``(estimate, lo, hi, n)`` of one statistic; raises :class:`EmptyClassCell`."""
    if name in (NONLOCAL, LOCAL, INDETERMINATE):
        est = wilson(summ.with_class[(knot, name)], summ.n_polygons)
        return (*est, summ.n_polygons)
    if name == "NonLocalFraction":
        n = summ.with_knot[knot]
        if n == 0:
            raise EmptyClassCell(f"no {knot} patterns observed")
        return (*wilson(summ.with_class[(knot, NONLOCAL)], n), n)
    if name.startswith("MeanSpan:"):
        vals = summ.spans.get((knot, name.split(":", 1)[1]), [])
        return (*mean_ci(vals), len(vals))
    raise ValueError(f"unknown statistic {name!r}")


STATISTICS = (NONLOCAL, LOCAL, INDETERMINATE, "NonLocalFraction", "MeanSpan:NonLocal", "MeanSpan:Local")


def estimate(samples, knots: Sequence[str] = ("3_1",), statistics: Sequence[str] = STATISTICS,
             s: int | None = None, g: float = 0.0, ensemble: str = "fixed-span",
             classifier: PatternClassifier | None = None, tube: str | None = None) -> list[EstimateRecord]:
    """Estimates with 95% intervals for each requested statistic and knot.

    ``samples`` is an iterable of polygons (for instance a
    :class:`~.tables.SampleBatch`) or a precomputed :class:`SampleSummary`.
    Statistics with empty cells are left out.  ``tube`` labels the
    records when it cannot be read from the samples.
    """
    if isinstance(samples, SampleSummary):
        summ = samples
    else:
        if s is None and hasattr(samples, "tables"):
            s = samples.tables.s
            g = samples.tables.g
            if samples.tables.hamiltonian:
                ensemble = "hamiltonian"
        summ = summarise(samples, classifier)
    if tube is None:
        tube = samples.tables.tube.label if hasattr(samples, "tables") else "?"
    out = []
    for k in knots:
        for name in statistics:
            try:
                est, lo, hi, n = statistic(summ, name, k)
            except EmptyClassCell:
                continue
            out.append(EstimateRecord(name, k, est, lo, hi, n, s if s is not None else -1, g, ensemble, tube))
    return out
