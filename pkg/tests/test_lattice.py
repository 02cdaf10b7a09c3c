import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shapes import TREFOIL_NL_2X1
from tubeknot import Tube, validate_polygon
from tubeknot.errors import (
    DoesNotTouchRoot,
    NotClosed,
    OddOrTooShort,
    OutOfTube,
    SelfIntersecting,
    SpanRangeError,
)
from tubeknot.lattice import (
    format_directions,
    format_vertices,
    hinge,
    parse_directions,
    read_polygon,
    span,
    transform,
    x_edge_counts,
)

SQUARE = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)]
FLAT = [(0, 0, 0), (0, 1, 0), (0, 1, 1), (0, 0, 1)]


def rectangle(s, y=0, z=0, dy=1):
    """Flat span-``s`` rectangle in the plane ``z``."""
    bottom = [(x, y, z) for x in range(s + 1)]
    top = [(x, y + dy, z) for x in range(s, -1, -1)]
    return bottom + top


def test_unit_square():
    p = validate_polygon(SQUARE, Tube(1, 1))
    assert p.n == 4
    assert span(p) == 1


def test_translated_square_misses_root():
    with pytest.raises(DoesNotTouchRoot):
        validate_polygon([(x + 1, y, z) for x, y, z in SQUARE], Tube(1, 1))


def test_repeated_vertex():
    cyc = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0), (0, 0, 0), (1, 0, 0)]
    with pytest.raises((SelfIntersecting, NotClosed)):
        validate_polygon(cyc, Tube(1, 1))
    walk = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 0, 0)]
    with pytest.raises((SelfIntersecting, NotClosed)):
        validate_polygon(walk, Tube(1, 1))


def test_self_intersection_detected():
    # figure-eight through (1,1,0)
    cyc = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (2, 1, 0), (2, 2, 0), (1, 2, 0),
           (1, 1, 0), (0, 1, 0)]
    with pytest.raises(SelfIntersecting):
        validate_polygon(cyc, Tube(2, 1))


def test_other_rejections():
    with pytest.raises(OddOrTooShort):
        validate_polygon(SQUARE[:3], Tube(1, 1))
    with pytest.raises(NotClosed):
        validate_polygon([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 2, 0)], Tube(2, 1))
    with pytest.raises(OutOfTube):
        validate_polygon(rectangle(2, y=1, dy=1), Tube(1, 1))


def test_fig_polygon_span_and_size():
    p = validate_polygon(TREFOIL_NL_2X1, Tube(2, 1))
    assert (p.n, p.span) == (36, 6)


def test_spans_of_squares():
    assert span(validate_polygon(FLAT, Tube(1, 1))) == 0
    assert span(validate_polygon(SQUARE, Tube(1, 1))) == 1


def test_hinge_of_fig_polygon():
    h = hinge(validate_polygon(TREFOIL_NL_2X1, Tube(2, 1)), 1)
    assert set(h.vertices) == {(1, 0, 0), (1, 1, 0), (1, 2, 0), (1, 0, 1), (1, 1, 1), (1, 2, 1)}
    assert {frozenset(e) for e in h.edges} == {
        frozenset({(1, 0, 1), (1, 1, 1)}),
        frozenset({(1, 1, 1), (1, 1, 0)}),
        frozenset({(1, 1, 0), (1, 2, 0)}),
    }


def test_hinge_of_flat_square():
    p = validate_polygon(FLAT, Tube(1, 1))
    h = hinge(p, 0)
    assert set(h.vertices) == set(FLAT)
    assert len(h.edges) == 4
    with pytest.raises(SpanRangeError):
        hinge(p, 1)


def test_swapped_tube_round_trips_user_coordinates():
    t = Tube(1, 2)
    assert (t.L, t.M, t.swapped) == (2, 1, True)
    cyc = [(0, 0, 0), (1, 0, 0), (1, 0, 1), (1, 0, 2), (0, 0, 2), (0, 0, 1)]
    p = validate_polygon(cyc, t)
    assert set(p.external_vertices()) == set(cyc)
    assert read_polygon(format_vertices(p), t) == p


def test_tube_parse():
    assert Tube.parse("3x1") == Tube(3, 1)
    with pytest.raises(ValueError):
        Tube.parse("3by1")


def test_direction_format_round_trip():
    p = validate_polygon(TREFOIL_NL_2X1, Tube(2, 1))
    text = format_directions(p)
    assert text.startswith("@ ")
    assert validate_polygon(parse_directions(text), Tube(2, 1)) == p
    with pytest.raises(NotClosed):
        parse_directions("@ 0 0 0\nR U L\n")


# ---------------------------------------------------------------- properties


@st.composite
def random_polygons(draw):
    """Polygons obtained by random corner flips of a long rectangle in 2x1."""
    tube = Tube(2, 1)
    s = draw(st.integers(1, 6))
    z = draw(st.integers(0, 1))
    y = draw(st.integers(0, 1))
    cyc = rectangle(s, y=y, z=z)
    # push random interior x-edges sideways (a "bump") where room allows
    for _ in range(draw(st.integers(0, 6))):
        n = len(cyc)
        i = draw(st.integers(0, n - 1))
        a, b = cyc[i], cyc[(i + 1) % n]
        d = draw(st.sampled_from([(0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]))
        if (d[1] and a[1] != b[1]) or (d[2] and a[2] != b[2]) or (a[0] != b[0] and d[0]):
            continue
        a2 = tuple(p + q for p, q in zip(a, d))
        b2 = tuple(p + q for p, q in zip(b, d))
        if a2 in cyc or b2 in cyc or not (tube.contains(a2) and tube.contains(b2)):
            continue
        cyc = cyc[: i + 1] + [a2, b2] + cyc[i + 1 :]
    return validate_polygon(cyc, tube)


@settings(max_examples=60, deadline=None)
@given(random_polygons())
def test_serialisation_round_trip(p):
    assert read_polygon(format_vertices(p), p.tube) == p
    assert read_polygon(format_directions(p), p.tube) == p


@settings(max_examples=60, deadline=None)
@given(random_polygons())
def test_plane_crossings_even_and_positive(p):
    for c in x_edge_counts(p):
        assert c >= 2 and c % 2 == 0


@settings(max_examples=60, deadline=None)
@given(random_polygons(), st.data())
def test_canonical_under_rotation_and_reversal(p, data):
    cyc = p.vertex_list()
    k = data.draw(st.integers(0, len(cyc) - 1))
    rot = cyc[k:] + cyc[:k]
    if data.draw(st.booleans()):
        rot = rot[::-1]
    assert validate_polygon(rot, p.tube, internal=True) == p


@settings(max_examples=30, deadline=None)
@given(random_polygons(), st.booleans(), st.booleans())
def test_symmetries_are_involutions(p, fy, fz):
    q = transform(p, flip_y=fy, flip_z=fz)
    assert q.n == p.n and q.span == p.span
    assert transform(q, flip_y=fy, flip_z=fz) == p
