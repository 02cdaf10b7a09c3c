import math
from collections import defaultdict

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tubeknot import Tube
from tubeknot.enumeration import count_polygons, dfs_count_polygons, dfs_polygons
from tubeknot.enumeration.census import span_census
from tubeknot.errors import PatternNotRepresentable, StateSpaceOverflow
from tubeknot.patterns import LOCAL, NONLOCAL, decompose
from tubeknot.transfer import (
    ColumnPattern,
    PatternFamily,
    build,
    check_primitive,
    column_pattern,
    dominant,
    edge_counts,
    edge_polynomials,
    family_probability,
    fixed_edge_partition,
    fixed_span_partition,
    free_energy,
    free_energy_per_edge,
    free_energy_per_span,
    g_star,
    hamiltonian_rate,
    limiting_pattern_probability,
    log_fixed_span_partition,
    single_column_total,
    span_count,
)
from tubeknot import validate_polygon
from shapes import TREFOIL_NL_2X1

T11, T21, T31 = Tube(1, 1), Tube(2, 1), Tube(3, 1)


@pytest.fixture(scope="module")
def sys11():
    return build(T11)


@pytest.fixture(scope="module")
def sys21():
    return build(T21)


@pytest.fixture(scope="module")
def ham21():
    return build(T21, hamiltonian=True)


def interface_states(cyc, tube):
    """Left-part connectivity at every plane ``k + 1/2`` of one polygon."""
    s = max(v[0] for v in cyc)
    n = len(cyc)
    out = set()
    for k in range(s):
        adj, cross = defaultdict(list), []
        for i in range(n):
            a, b = cyc[i], cyc[(i + 1) % n]
            if max(a[0], b[0]) <= k:
                adj[a].append(b)
                adj[b].append(a)
            elif min(a[0], b[0]) == k:
                cross.append(a if a[0] == k else b)
        ends = set(cross)
        mate = [-1] * tube.W
        for c in cross:
            prev, cur = None, c
            while True:
                nxt = [w for w in adj[cur] if w != prev]
                if not nxt or (cur != c and cur in ends):
                    break
                prev, cur = cur, nxt[0]
            mate[tube.position(*c[1:])] = tube.position(*cur[1:])
        out.add(tuple(mate))
    return out


# ------------------------------------------------------------------ states


def test_state_counts(sys11, sys21, ham21):
    assert sys11.n_states == 8
    assert build(T11, hamiltonian=True).n_states == 6
    assert sys21.n_states == 73
    assert ham21.n_states == 49


def test_states_match_exhaustive_interfaces(sys11, sys21):
    seen = set()
    for cyc in dfs_polygons(T11, 14):
        seen |= interface_states(cyc, T11)
    assert seen == set(sys11.states)
    seen = set()
    for cyc in dfs_polygons(T21, 12):
        seen |= interface_states(cyc, T21)
    assert seen <= set(sys21.states)


def test_state_cap():
    with pytest.raises(StateSpaceOverflow):
        build(T31, max_states=50)


@pytest.mark.parametrize("tube", [T11, T21, T31, Tube(2, 2)])
def test_primitive(tube):
    check_primitive(build(tube))


# ----------------------------------------------------------- partitions


def test_one_by_one_four_edges(sys11):
    polys = edge_polynomials(sys11, 4)
    assert sum(row[4] for row in polys.values() if len(row) > 4) == 5
    f = 0.7
    assert fixed_edge_partition(sys11, 4, f) == pytest.approx(1 + 4 * math.exp(f), rel=1e-14)


def test_parity_and_minimum_length(sys21):
    table = count_polygons(T21, 14)
    for (n, s), c in table.entries.items():
        assert n % 2 == 0
        assert n >= 2 * s + 2
    assert fixed_edge_partition(sys21, 7, 0.3) == 0


def test_zero_force_is_total_count(sys21):
    table = count_polygons(T21, 12)
    for n in (4, 8, 12):
        assert fixed_edge_partition(sys21, n, 0.0) == pytest.approx(
            sum(c for (m, _), c in table.entries.items() if m == n))


@pytest.mark.parametrize("tube,max_n,spans", [(T11, 12, (1, 2)), (T21, 12, (1,))])
def test_span_count_matches_dfs(tube, max_n, spans):
    # spans whose longest polygons fit under max_n are complete in the DFS table
    dfs = dfs_count_polygons(tube, max_n)
    system = build(tube)
    for s in spans:
        assert span_count(system, s) == sum(c for (n, t), c in dfs.entries.items() if t == s)
        assert fixed_span_partition(system, s) == span_count(system, s)


def test_span_counts_two_by_one(sys21):
    got = [span_count(sys21, s) for s in range(1, 7)]
    assert got == [219, 7631, 264543, 9101347, 312733719, 10745324481]


def test_minimal_edge_limit(sys11):
    # g -> -inf: only the 4 flat (2s+2)-edge rectangles survive
    s, g = 5, -40.0
    lq = log_fixed_span_partition(sys11, s, g)
    assert lq - g * (2 * s + 2) == pytest.approx(math.log(4), abs=1e-9)


def test_log_partition_consistent(sys21):
    s = 4
    for g in (-1.0, 0.0, 0.5):
        exact = sum(c * math.exp(g * n) for n, c in enumerate(edge_polynomials(sys21, 5 * 6)[s]))
        assert log_fixed_span_partition(sys21, s, g) == pytest.approx(math.log(exact), rel=1e-12)


def test_edge_counts_match_table(sys21):
    table = count_polygons(T21, 14)
    for n in (10, 14):
        assert edge_counts(sys21, n) == {s: c for (m, s), c in table.entries.items() if m == n}


# --------------------------------------------------------------- spectra


def test_eigen_residual(sys21):
    for g in (-3.0, 0.0, 2.0):
        e = dominant(sys21, g)
        assert e.residual < 1e-11
        assert e.u @ e.v == pytest.approx(1.0)
        assert (e.u > 0).all() and (e.v > 0).all()


def test_single_column_total(sys21, ham21):
    for g in (-2.0, 0.0, 1.5):
        assert single_column_total(sys21, g) == pytest.approx(1.0, abs=1e-12)
    assert single_column_total(ham21, 0.0) == pytest.approx(1.0, abs=1e-12)


def test_growth_matches_partition(sys21):
    # log Q_s grows by log lambda per span
    g = 0.3
    d = log_fixed_span_partition(sys21, 41, g) - log_fixed_span_partition(sys21, 40, g)
    assert d == pytest.approx(free_energy_per_span(sys21, g), rel=1e-10)


@settings(max_examples=20, deadline=None)
@given(st.floats(-4, 4), st.floats(0.05, 1.0))
def test_lambda_increasing_in_g(g, dg):
    system = build(T21)
    assert dominant(system, g + dg).lam > dominant(system, g).lam


def test_free_energies_convex(sys21):
    gs = np.linspace(-4, 4, 17)
    G = np.array([free_energy_per_span(sys21, g) for g in gs])
    assert (np.diff(G, 2) > -1e-10).all()
    fs = np.linspace(-4, 4, 17)
    F = np.array([free_energy_per_edge(sys21, f) for f in fs])
    assert (np.diff(F, 2) > -1e-9).all()


def test_g_star_root(sys21):
    for f in (-3.0, 0.0, 4.0):
        g = g_star(sys21, f)
        assert dominant(sys21, g).log_lam == pytest.approx(-f, abs=1e-9)


def test_free_energy_dispatch(sys21, ham21):
    assert free_energy(sys21, "PerSpan", 0.5) == free_energy_per_span(sys21, 0.5)
    assert free_energy(sys21, "PerEdge", 1.0) == pytest.approx(free_energy_per_edge(sys21, 1.0))
    assert free_energy(ham21, "HamiltonianRate") == pytest.approx(hamiltonian_rate(ham21))
    with pytest.raises(ValueError):
        free_energy(sys21, "Other")


def test_hamiltonian_rate_values():
    for tube, k in [(T11, 0.3292), (T21, 0.4408), (T31, 0.4881)]:
        assert hamiltonian_rate(build(tube, hamiltonian=True)) == pytest.approx(k, abs=1e-4)


def test_hamiltonian_rate_from_counts():
    # log p^H grows by W * kappa per span
    ham = build(T11, hamiltonian=True)
    d = math.log(span_count(ham, 31)) - math.log(span_count(ham, 30))
    assert d / T11.W == pytest.approx(hamiltonian_rate(ham), rel=1e-8)


# ---------------------------------------------------------- probabilities


@pytest.fixture(scope="module")
def smallest21():
    out = {}
    for s in (6, 7):
        c = span_census(T21, s, keep_records=True)
        for cls in (NONLOCAL, LOCAL):
            pats = [ColumnPattern(r.start, r.masks) for r in c.records
                    if r.dc.name == "3_1" and r.classification == cls]
            if pats and cls not in out:
                out[cls] = pats
    return out


def test_family_additive(sys21, smallest21):
    pats = smallest21[NONLOCAL][:10]
    e = dominant(sys21, 0.4)
    whole = family_probability(PatternFamily.from_patterns(sys21, pats), e)
    parts = sum(family_probability(PatternFamily.from_patterns(sys21, [p]), e) for p in pats)
    assert whole == pytest.approx(parts, rel=1e-12)


def test_column_pattern_round_trip(sys21):
    poly = validate_polygon(TREFOIL_NL_2X1, T21)
    (pat,) = [p for p in decompose(poly) if p.kind == "Proper"]
    cp = column_pattern(pat, T21)
    assert cp.span == 6
    p1 = limiting_pattern_probability(sys21, pat, "fixed-span", 0.0)
    p2 = limiting_pattern_probability(sys21, cp, "fixed-span", 0.0)
    assert p1 == p2 > 0
    with pytest.raises(PatternNotRepresentable):
        column_pattern(decompose(poly)[0], T21)


def test_nonlocal_dominates_local(sys21, smallest21):
    nl = PatternFamily.from_patterns(sys21, smallest21[NONLOCAL])
    lo = PatternFamily.from_patterns(sys21, smallest21[LOCAL])
    assert len(nl) == 116 and len(lo) == 304
    for g in (-5.0, 0.0, 5.0):
        e = dominant(sys21, g)
        assert family_probability(nl, e) > family_probability(lo, e)


def test_fixed_edge_uses_g_star(sys21, smallest21):
    fam = PatternFamily.from_patterns(sys21, smallest21[NONLOCAL])
    f = 1.5
    a = limiting_pattern_probability(sys21, fam, "fixed-edge", f)
    b = family_probability(fam, dominant(sys21, g_star(sys21, f)))
    assert a == b
