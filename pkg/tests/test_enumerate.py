import itertools

import pytest

from tubeknot import Tube
from tubeknot.enumeration import (
    CountTable,
    PatternEngine,
    count_hamiltonian,
    count_polygons,
    dfs_count_polygons,
    dfs_polygons,
    hamiltonian_edge_count,
    knot_census,
    smallest_knot_patterns,
    span_census,
    census_rows,
    write_census_csv,
    CENSUS_HEADER,
)
from tubeknot.enumeration.census import pattern_strands, thread_count
from tubeknot.enumeration.dfs import read_checkpoint, write_checkpoint
from tubeknot.errors import CheckpointError, NotFoundWithinLimit, ResourceBudgetExceeded
from tubeknot.knots import parse_knot
from tubeknot.patterns import LOCAL, NONLOCAL, CsPattern
from tubeknot.transfer import column_pattern

T11, T21, T31 = Tube(1, 1), Tube(2, 1), Tube(3, 1)


def cube_hamiltonian_cycles():
    """Hamiltonian cycles of the 2x2x2 grid graph by brute force."""
    verts = list(itertools.product((0, 1), repeat=3))
    adj = lambda a, b: sum(abs(p - q) for p, q in zip(a, b)) == 1
    first, rest = verts[0], verts[1:]
    cycles = set()
    for perm in itertools.permutations(rest):
        cyc = (first,) + perm
        if all(adj(cyc[i], cyc[(i + 1) % 8]) for i in range(8)):
            cycles.add(frozenset(frozenset((cyc[i], cyc[(i + 1) % 8])) for i in range(8)))
    return len(cycles)


def test_four_edge_polygons():
    table = dfs_count_polygons(T11, 4)
    assert table.total(4) == 5
    assert table.spans(4) == {0: 1, 1: 4}
    assert count_polygons(T11, 4) == table


def test_odd_and_short():
    table = count_polygons(T21, 12)
    assert table.total(5) == 0
    assert table.get(6, 3) == 0  # a span-3 polygon needs 8 edges
    with pytest.raises(ValueError):
        count_polygons(T11, 3)


def test_hamiltonian_counts():
    assert count_hamiltonian(T11, 1) == cube_hamiltonian_cycles() == 6
    assert count_hamiltonian(T11, 2, n=12) == count_hamiltonian(T11, 2)
    assert count_hamiltonian(T11, 2, n=10) == 0
    assert hamiltonian_edge_count(T11, 10) == 0
    assert hamiltonian_edge_count(T11, 8) == 6


def test_hamiltonian_dfs_agreement():
    # Hamiltonian span-2 polygons of 1x1 among all 12-edge polygons
    n = 0
    for cyc in dfs_polygons(T11, 12):
        if len(cyc) == 12 and max(v[0] for v in cyc) == 2:
            n += 1
    assert n == count_hamiltonian(T11, 2)


def test_dfs_matches_transfer_small():
    assert dfs_count_polygons(T21, 10) == count_polygons(T21, 10)


def test_dfs_polygons_yield_valid_cycles():
    from tubeknot import validate_polygon

    seen = set()
    for cyc in dfs_polygons(T21, 8):
        seen.add(validate_polygon(cyc, T21))
    assert len(seen) == count_polygons(T21, 8).total(8) + count_polygons(T21, 8).total(6) + \
        count_polygons(T21, 8).total(4)


def test_checkpoint_resume(tmp_path):
    ck = tmp_path / "run.ck"
    with pytest.raises(ResourceBudgetExceeded):
        dfs_count_polygons(T21, 10, node_limit=2000, checkpoint=str(ck))
    tube, max_n, _ = read_checkpoint(str(ck))
    assert (tube, max_n) == (T21, 10)
    # resume in slices until done
    total = None
    for _ in range(1000):
        try:
            total = dfs_count_polygons(T21, 10, node_limit=20000, checkpoint=str(ck), resume=str(ck))
            break
        except ResourceBudgetExceeded:
            continue
    assert total == dfs_count_polygons(T21, 10)
    with pytest.raises(CheckpointError):
        dfs_count_polygons(T11, 10, resume=str(ck))


def test_corrupt_checkpoint(tmp_path):
    bad = tmp_path / "bad.ck"
    bad.write_bytes(b"not a checkpoint")
    with pytest.raises(CheckpointError):
        read_checkpoint(str(bad))


def test_count_table_helpers():
    t = CountTable(T11, 6, {(4, 0): 1, (4, 1): 4, (6, 1): 16})
    assert t.get(4, 1) == 4 and t.get(8, 2) == 0
    assert t.total(4) == 5


# ----------------------------------------------------------------- census


@pytest.mark.parametrize("tube,span,ham,nl", [(T21, 6, False, 116), (T21, 6, True, 32),
                                               (T31, 4, False, 1964), (T31, 4, True, 232)])
def test_smallest_nonlocal_rows(tube, span, ham, nl):
    c = knot_census(tube, "3_1", ham, span, span)[span]
    assert c.count("3_1", NONLOCAL) == nl
    assert c.count("3_1", LOCAL) == 0


@pytest.mark.parametrize("tube,span", [(T21, 5), (T31, 3)])
def test_no_trefoil_below_smallest_span(tube, span):
    c = span_census(tube, span)
    assert c.count("3_1", NONLOCAL) == c.count("3_1", LOCAL) == 0


def test_not_found_within_limit():
    with pytest.raises(NotFoundWithinLimit):
        smallest_knot_patterns(T21, "3_1", LOCAL, span_limit=6)


def test_pattern_census_record():
    pc = smallest_knot_patterns(T21, "3_1", NONLOCAL, span_limit=6)
    assert pc.smallest_span == 6 and pc.counts_by_span == {6: 116}


def test_colouring_filter_keeps_every_trefoil():
    # the unfiltered span-6 census has the same trefoil counts
    eng = PatternEngine(T21, 6, hamiltonian=True, prime=None, boundary_columns=1)
    full = span_census(T21, 6, True, None, boundary_columns=1)
    assert full.candidates == eng.count()
    assert full.count("3_1", NONLOCAL) == 32


def test_engine_count_matches_candidates():
    eng = PatternEngine(T21, 5, prime=None)
    assert eng.count() == sum(1 for _ in eng.candidates())


@pytest.mark.parametrize("flip", [(True, False), (False, True), (True, True)])
def test_census_symmetric(flip):
    tube = T21
    c = span_census(tube, 6, keep_records=True)
    eng = PatternEngine(tube, 6)
    by_key = {(r.start, r.masks): r for r in c.records}
    image = set()
    for (start, masks), r in by_key.items():
        s1, s2 = pattern_strands(eng.cs, start, masks)
        fy, fz = flip
        f = lambda v: (v[0], tube.L - v[1] if fy else v[1], tube.M - v[2] if fz else v[2])
        cp = column_pattern(CsPattern.from_strands([f(v) for v in s1], [f(v) for v in s2], tube), tube)
        key = (cp.start, cp.masks)
        assert key in by_key
        assert by_key[key].classification == r.classification
        assert by_key[key].dc.name == r.dc.name
        image.add(key)
    assert image == set(by_key)


def test_census_csv():
    knot = parse_knot("3_1")
    ce = knot_census(T21, knot, False, 5, 6)
    rows = census_rows(T21, knot, False, ce)
    assert rows == [["2x1", "3_1", NONLOCAL, "false", 6, 116], ["2x1", "3_1", LOCAL, "false", 6, 0]]
    assert write_census_csv(rows).splitlines()[0] == ",".join(CENSUS_HEADER)


def test_thread_count(monkeypatch):
    monkeypatch.setenv("TUBEKNOT_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.delenv("TUBEKNOT_THREADS")
    assert thread_count() >= 1
