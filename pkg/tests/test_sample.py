import math

import numpy as np
import pytest
from scipy import stats

from tubeknot import Tube
from tubeknot.patterns import LOCAL, NONLOCAL, two_sections
from tubeknot.sampling import (
    ESTIMATE_HEADER,
    PatternClassifier,
    SampleSummary,
    build_sampler,
    draw,
    estimate,
    summarise,
    wilson,
)
from tubeknot.sampling.estimate import PatternObs, mean_ci, statistic
from tubeknot.errors import EmptyClassCell
from tubeknot.transfer import (
    ColumnPattern,
    PatternFamily,
    dominant,
    family_probability,
    log_fixed_span_partition,
)
from tubeknot.transfer.columns import n_strands

T21, T31 = Tube(2, 1), Tube(3, 1)


def first_section_probability(tab):
    """Exact probability that the plane x = 1/2 is a 2-section."""
    system = tab.system
    st = tab.start
    w = np.exp(tab.g * st.dn) * tab.v[0][st.dst]
    two = np.array([n_strands(system.states[d]) == 2 for d in st.dst])
    return float(w[two].sum() / w.sum())


def test_draws_are_valid_span_s():
    tab = build_sampler(T21, 5, 0.0)
    batch = draw(tab, seed=3, N=200)
    for p in batch:
        assert p.span == 5
    assert (batch.edges == [p.n for p in batch]).all()


def test_hamiltonian_draws_fill_the_tube():
    tab = build_sampler(T21, 4, 0.0, hamiltonian=True)
    batch = draw(tab, seed=1, N=300)
    assert set(batch.edges.tolist()) == {5 * T21.W}
    assert tab.total_weight() == pytest.approx(64558)


def test_total_weight_is_partition_function():
    tab = build_sampler(T21, 4, 0.7)
    assert tab.log_total == pytest.approx(log_fixed_span_partition(tab.system, 4, 0.7), rel=1e-12)


def test_same_seed_same_stream():
    tab = build_sampler(T21, 6, -0.5)
    a = draw(tab, 11, 5000)
    b = draw(tab, 11, 5000)
    assert np.array_equal(a.masks, b.masks)
    # a smaller batch is a prefix of a larger one
    assert np.array_equal(draw(tab, 11, 4500).masks, a.masks[:4500])
    assert not np.array_equal(draw(tab, 12, 5000).masks, a.masks)
    assert not np.array_equal(draw(tab, 11, 5000, replica=1).masks, a.masks)


def test_long_span_does_not_underflow():
    tab = build_sampler(T31, 200, -2.0)
    assert np.isfinite(tab.log_total)
    assert all(np.isfinite(v).all() for v in tab.v)
    batch = draw(tab, 0, 5)
    assert all(p.span == 200 for p in batch)


def test_mean_edges_matches_derivative():
    s, g, h = 6, 0.2, 1e-5
    tab = build_sampler(T21, s, g)
    exact = (log_fixed_span_partition(tab.system, s, g + h)
             - log_fixed_span_partition(tab.system, s, g - h)) / (2 * h)
    e = draw(tab, 5, 20000).edges
    half = 4 * e.std() / math.sqrt(len(e))
    assert abs(e.mean() - exact) < half


def test_first_section_frequency():
    tab = build_sampler(T21, 4, 0.0)
    p = first_section_probability(tab)
    batch = draw(tab, 9, 20000)
    hits = sum(1 for q in batch if two_sections(q).planes[:1] == (0.5,))
    assert stats.binomtest(hits, len(batch), p).pvalue > 1e-3


def test_wilson_coverage():
    # 200 independent runs at s = 4; the exact value should be covered in >= 90%
    tab = build_sampler(T21, 4, 0.0)
    p = first_section_probability(tab)
    first = {m for m, d in zip(tab.start.masks.tolist(), tab.start.dst.tolist())
             if n_strands(tab.system.states[d]) == 2}
    inside = 0
    for r in range(200):
        batch = draw(tab, 2024, 400, replica=r)
        k = int(np.isin(batch.masks[:, 0], list(first)).sum())
        _, lo, hi = wilson(k, len(batch))
        inside += lo <= p <= hi
    assert inside >= 180


def replay_states(tab, batch, upto):
    """Interface state after hinges ``0 .. upto`` for every draw."""
    first = {int(m): int(d) for m, d in zip(tab.start.masks, tab.start.dst)}
    steps = [{int(m): int(d) for m, d in zip(t.masks, t.dst)} for t in tab.inner]
    cur = np.array([first[int(m)] for m in batch.masks[:, 0]])
    out = [cur]
    for j in range(1, upto + 1):
        cur = np.array([steps[a][int(m)] for a, m in zip(cur, batch.masks[:, j])])
        out.append(cur)
    return out


def test_mid_section_frequency_matches_eigenvectors():
    # span-2 proper patterns starting at the middle section of s = 20 polygons
    s, k = 20, 10
    tab = build_sampler(T31, s, 0.0)
    system = tab.system
    two = np.array([n_strands(st) == 2 for st in system.states])
    pats = []
    for a in np.nonzero(two)[0]:
        pair = tuple(p for p, q in enumerate(system.states[a]) if q >= 0)
        t = tab.inner[a]
        pats += [ColumnPattern(pair, (int(m),)) for m, d in zip(t.masks, t.dst) if two[d]]
    limit = family_probability(PatternFamily.from_patterns(system, pats), dominant(system, 0.0))
    batch = draw(tab, 7, 100_000)
    states = replay_states(tab, batch, k + 1)
    hits = int((two[states[k]] & two[states[k + 1]]).sum())
    assert stats.binomtest(hits, len(batch), limit).pvalue > 1e-3


# -------------------------------------------------------------- estimator


def test_wilson_and_mean_intervals():
    est, lo, hi = wilson(0, 50)
    assert est == 0 and lo == 0 and 0 < hi < 0.1
    est, lo, hi = wilson(25, 50)
    assert lo < 0.5 < hi
    with pytest.raises(EmptyClassCell):
        wilson(0, 0)
    m, lo, hi = mean_ci([4, 6, 5, 5])
    assert lo < m == 5 < hi
    with pytest.raises(EmptyClassCell):
        mean_ci([])


def test_summary_statistics():
    s = SampleSummary()
    s.add([PatternObs("3_1", NONLOCAL, 4, 26)])
    s.add([PatternObs("3_1", NONLOCAL, 6, 30), PatternObs("3_1", LOCAL, 7, 40)])
    s.add([])
    s.add([PatternObs("3_1", LOCAL, 5, 34)])
    assert statistic(s, NONLOCAL, "3_1")[0] == pytest.approx(2 / 4)
    assert statistic(s, "NonLocalFraction", "3_1")[0] == pytest.approx(2 / 3)
    assert statistic(s, "MeanSpan:Local", "3_1")[0] == pytest.approx(6.0)
    with pytest.raises(EmptyClassCell):
        statistic(s, "NonLocalFraction", "4_1")
    merged = s.merge(s)
    assert merged.n_polygons == 8
    assert statistic(merged, NONLOCAL, "3_1")[0] == pytest.approx(0.5)


def test_estimate_records_from_batch():
    tab = build_sampler(T31, 8, 0.0)
    batch = draw(tab, 1, 300)
    recs = estimate(batch, ["3_1"])
    assert recs and all(r.s == 8 and r.tube == "3x1" for r in recs)
    assert len(recs[0].row()) == len(ESTIMATE_HEADER)
    summ = summarise(batch, PatternClassifier())
    assert summ.n_polygons == 300
