"""Exact Alexander polynomials from crossing diagrams.

The presentation matrix has one row per crossing and one column per arc
(arcs run from one under passage to the next).  Deleting one row and one
column leaves a square matrix with entries of degree at most one in
``t``; its determinant is ``Delta(t)`` up to a unit.

The determinant is evaluated exactly by Kronecker substitution: put
``t = 2^K`` with ``2^K`` larger than twice every coefficient bound,
compute one big-integer determinant by fraction-free Bareiss
elimination, and read the coefficients back as balanced base-``2^K``
digits.
"""
from __future__ import annotations

from .diagram import Diagram, require_knot, simplify
from .laurent import SymmetricLaurent


def presentation_rows(diagram: Diagram) -> list[list[tuple[int, int, int]]]:
    """Sparse rows ``[(column, c0, c1), ...]`` meaning ``c0 + c1 t``."""
    require_knot(diagram)
    code = diagram.code[0]
    n = diagram.n_crossings
    arc_in, arc_out, arc_over = [0] * n, [0] * n, [0] * n
    unders = 0
    for c, over in code:
        if over:
            arc_over[c] = unders % n
        else:
            arc_in[c] = unders % n
            arc_out[c] = (unders + 1) % n
            unders += 1
    rows = []
    for c in range(n):
        row: dict[int, list[int]] = {}

        def add(col, c0, c1):
            e = row.setdefault(col, [0, 0])
            e[0] += c0
            e[1] += c1

        add(arc_over[c], 1, -1)
        if diagram.signs[c] > 0:
            add(arc_in[c], 0, 1)
            add(arc_out[c], -1, 0)
        else:
            add(arc_in[c], -1, 0)
            add(arc_out[c], 0, 1)
        rows.append([(col, e[0], e[1]) for col, e in sorted(row.items())])
    return rows


def bareiss_det(m: list[list[int]]) -> int:
    """Exact integer determinant by fraction-free elimination."""
    a = [row[:] for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
            ri[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def _balanced_digits(value: int, base_bits: int, count: int) -> list[int]:
    base = 1 << base_bits
    half = base >> 1
    out = []
    for _ in range(count):
        d = value & (base - 1)
        if d >= half:
            d -= base
        out.append(d)
        value = (value - d) >> base_bits
    if value:
        raise ArithmeticError("coefficient bound violated in Kronecker decoding")
    return out


def alexander(diagram: Diagram, reduce: bool = True) -> SymmetricLaurent:
    """Normalised Alexander polynomial of a knot diagram.

    Parameters
    ----------
    diagram : Diagram
        Single-component diagram.
    reduce : bool
        Apply :func:`~tubeknot.knots.diagram.simplify` first.

    Raises
    ------
    MultiComponent
    """
    require_knot(diagram)
    if reduce:
        diagram = simplify(diagram)
    n = diagram.n_crossings
    if n == 0:
        return SymmetricLaurent.one()
    rows = presentation_rows(diagram)[: n - 1]
    # each row has absolute coefficient sum at most 4
    bits = 2 * n + 2
    t = 1 << bits
    dense = []
    for row in rows:
        r = [0] * (n - 1)
        for col, c0, c1 in row:
            if col < n - 1:
                r[col] = c0 + c1 * t
        dense.append(r)
    det = bareiss_det(dense)
    return SymmetricLaurent(_balanced_digits(det, bits, n))


def alexander_at(diagram: Diagram, t: int, modulus: int | None = None) -> int:
    """Determinant of the reduced presentation matrix at an integer ``t``.

    Used as an independent cross-check of :func:`alexander`.
    """
    require_knot(diagram)
    n = diagram.n_crossings
    if n == 0:
        return 1
    rows = presentation_rows(diagram)[: n - 1]
    dense = []
    for row in rows:
        r = [0] * (n - 1)
        for col, c0, c1 in row:
            if col < n - 1:
                r[col] = c0 + c1 * t
        dense.append(r)
    d = bareiss_det(dense)
    return d % modulus if modulus else d
