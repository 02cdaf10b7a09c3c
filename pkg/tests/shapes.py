"""Hand-built polygons and patterns shared by the tests.

``TREFOIL_NL_2X1`` is a 36-edge span-6 trefoil polygon in the 2x1 tube
whose proper pattern is non-local; ``TREFOIL_L_2X1`` is the same tube's
40-edge span-7 polygon with a local proper pattern.  The ``PATTERN_*``
pairs are strands in the 1x3 tube given from the first to the last hinge
vertex.
"""

TREFOIL_NL_2X1 = [
    (0, 0, 0), (1, 0, 0), (2, 0, 0), (2, 1, 0), (3, 1, 0), (4, 1, 0),
    (4, 1, 1), (4, 0, 1), (5, 0, 1), (6, 0, 1), (6, 0, 0), (6, 1, 0),
    (6, 2, 0), (5, 2, 0), (4, 2, 0), (3, 2, 0), (2, 2, 0), (1, 2, 0),
    (1, 1, 0), (1, 1, 1), (1, 0, 1), (2, 0, 1), (3, 0, 1), (3, 0, 0),
    (4, 0, 0), (5, 0, 0), (5, 1, 0), (5, 1, 1), (5, 2, 1), (4, 2, 1),
    (3, 2, 1), (2, 2, 1), (1, 2, 1), (0, 2, 1), (0, 1, 1), (0, 0, 1),
]

TREFOIL_L_2X1 = [
    (0, 0, 0), (1, 0, 0), (2, 0, 0), (2, 1, 0), (3, 1, 0), (4, 1, 0),
    (4, 1, 1), (4, 0, 1), (5, 0, 1), (6, 0, 1), (6, 0, 0), (6, 1, 0),
    (6, 2, 0), (5, 2, 0), (4, 2, 0), (3, 2, 0), (2, 2, 0), (1, 2, 0),
    (1, 1, 0), (1, 1, 1), (1, 0, 1), (2, 0, 1), (3, 0, 1), (3, 0, 0),
    (4, 0, 0), (5, 0, 0), (5, 1, 0), (5, 1, 1), (6, 1, 1), (7, 1, 1),
    (7, 2, 1), (6, 2, 1), (5, 2, 1), (4, 2, 1), (3, 2, 1), (2, 2, 1),
    (1, 2, 1), (0, 2, 1), (0, 1, 1), (0, 0, 1),
]

PATTERN_51_NL = (
    [(0, 0, 0), (1, 0, 0), (2, 0, 0), (2, 0, 1), (3, 0, 1), (3, 1, 1), (4, 1, 1), (4, 1, 0), (5, 1, 0)],
    [(0, 1, 0), (0, 1, 1), (0, 1, 2), (1, 1, 2), (1, 0, 2), (1, 0, 3), (2, 0, 3), (3, 0, 3), (3, 1, 3), (3, 1, 2), (4, 1, 2), (5, 1, 2), (5, 1, 1), (5, 0, 1), (5, 0, 0), (4, 0, 0), (3, 0, 0), (3, 1, 0), (2, 1, 0), (2, 1, 1), (1, 1, 1), (1, 0, 1), (0, 0, 1), (0, 0, 2), (0, 0, 3), (0, 1, 3), (1, 1, 3), (2, 1, 3), (2, 1, 2), (2, 0, 2), (3, 0, 2), (4, 0, 2), (5, 0, 2)],
)

PATTERN_31_L = (
    [(0, 0, 0), (1, 0, 0), (1, 1, 0), (2, 1, 0), (3, 1, 0), (3, 0, 0), (2, 0, 0), (2, 0, 1), (3, 0, 1)],
    [(0, 1, 0), (0, 1, 1), (0, 1, 2), (1, 1, 2), (1, 0, 2), (1, 0, 3), (2, 0, 3), (3, 0, 3), (3, 1, 3), (3, 1, 2), (3, 1, 1), (2, 1, 1), (1, 1, 1), (1, 0, 1), (0, 0, 1), (0, 0, 2), (0, 0, 3), (0, 1, 3), (1, 1, 3), (2, 1, 3), (2, 1, 2), (2, 0, 2), (3, 0, 2)],
)

PATTERN_31_NL = (
    [(0, 0, 0), (1, 0, 0), (1, 1, 0), (2, 1, 0), (2, 0, 0), (2, 0, 1), (2, 0, 2), (2, 1, 2), (2, 1, 3), (1, 1, 3), (0, 1, 3), (0, 0, 3), (0, 0, 2), (0, 0, 1), (1, 0, 1), (1, 1, 1), (2, 1, 1)],
    [(0, 1, 0), (0, 1, 1), (0, 1, 2), (1, 1, 2), (1, 0, 2), (1, 0, 3), (2, 0, 3)],
)

#: Hamiltonian span-8 trefoil polygon in the 3x1 tube with no 2-section.
HAM_TREFOIL_3X1 = [
    (0, 0, 0), (0, 0, 1), (1, 0, 1), (1, 1, 1), (2, 1, 1), (3, 1, 1),
    (3, 1, 0), (3, 0, 0), (4, 0, 0), (5, 0, 0), (6, 0, 0), (7, 0, 0),
    (8, 0, 0), (8, 0, 1), (7, 0, 1), (7, 1, 1), (7, 2, 1), (6, 2, 1),
    (6, 2, 0), (7, 2, 0), (7, 1, 0), (8, 1, 0), (8, 1, 1), (8, 2, 1),
    (8, 2, 0), (8, 3, 0), (8, 3, 1), (7, 3, 1), (7, 3, 0), (6, 3, 0),
    (6, 3, 1), (5, 3, 1), (4, 3, 1), (4, 2, 1), (4, 2, 0), (3, 2, 0),
    (2, 2, 0), (2, 1, 0), (1, 1, 0), (1, 0, 0), (2, 0, 0), (2, 0, 1),
    (3, 0, 1), (4, 0, 1), (4, 1, 1), (4, 1, 0), (5, 1, 0), (6, 1, 0),
    (6, 1, 1), (6, 0, 1), (5, 0, 1), (5, 1, 1), (5, 2, 1), (5, 2, 0),
    (5, 3, 0), (4, 3, 0), (3, 3, 0), (3, 3, 1), (3, 2, 1), (2, 2, 1),
    (2, 3, 1), (2, 3, 0), (1, 3, 0), (0, 3, 0), (0, 2, 0), (1, 2, 0),
    (1, 2, 1), (1, 3, 1), (0, 3, 1), (0, 2, 1), (0, 1, 1), (0, 1, 0),
]


def connect_sum_curve(a, b, gap=4):
    """Band sum of two span-6 2x1 polygons placed ``gap`` apart along x.

    The z-edges ``(6,0,0)-(6,0,1)`` of ``a`` and ``(0,0,0)-(0,0,1)`` of the
    shifted ``b`` are replaced by two straight x-runs.
    """
    shift = 6 + gap

    def cut(cycle, e):
        n = len(cycle)
        for i in range(n):
            if {cycle[i], cycle[(i + 1) % n]} == set(e):
                j = (i + 1) % n
                return cycle[j:] + cycle[:j]
        raise ValueError("edge not in cycle")

    pa = cut(list(a), [(6, 0, 0), (6, 0, 1)])
    pb = cut([(x + shift, y, z) for x, y, z in b], [(shift, 0, 0), (shift, 0, 1)])
    # pa runs from one cut end to the other; so does pb
    bridge_out = [(x, pa[-1][1], pa[-1][2]) for x in range(7, shift)]
    if pb[0][2] != pa[-1][2]:
        pb = pb[::-1]
    bridge_back = [(x, pb[-1][1], pb[-1][2]) for x in range(shift - 1, 6, -1)]
    return pa + bridge_out + pb + bridge_back
