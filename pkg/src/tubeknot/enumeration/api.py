"""Counting polygons and censusing smallest knot patterns."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from ..errors import NotFoundWithinLimit, ResourceBudgetExceeded
from ..knots.table import KnotId, parse_knot
from ..lattice import Tube
from ..patterns import LOCAL, NONLOCAL
from ..transfer.partition import edge_polynomials, span_count
from ..transfer.system import MAX_STATES, build
from .census import SpanCensus, span_census
from .dfs import CountTable

CENSUS_HEADER = ["tube", "knot", "class", "hamiltonian", "span", "count"]

#: Hamiltonian patterns: outer parts join the boundary pair inside one column.
HAM_BOUNDARY_COLUMNS = 1


def count_polygons(tube: Tube, max_n: int, max_states: int = MAX_STATES) -> CountTable:
    """Exact ``p_n(s)`` for all ``n <= max_n`` from the column engine.

    Raises
    ------
    ValueError
        If ``max_n < 4``.
    ResourceBudgetExceeded
        If the state space exceeds ``max_states``.
    """
    if max_n < 4:
        raise ValueError("max_n must be at least 4")
    from ..errors import StateSpaceOverflow

    try:
        system = build(tube, max_states=max_states)
    except StateSpaceOverflow as exc:
        raise ResourceBudgetExceeded(str(exc)) from exc
    polys = edge_polynomials(system, max_n)
    entries = {(n, s): c for s, row in polys.items() for n, c in enumerate(row) if c}
    return CountTable(tube, max_n, entries)


def count_hamiltonian(tube: Tube, s: int, n: int | None = None) -> int:
    """Number of span-``s`` polygons visiting every vertex of ``[0, s] x tube``.

    With ``n`` given, counts Hamiltonian polygons with ``n`` edges,
    which is zero unless ``n == (s + 1) W``.
    """
    if s < 0:
        raise ValueError("span must be non-negative")
    if n is not None and n != (s + 1) * tube.W:
        return 0
    system = build(tube, hamiltonian=True)
    return span_count(system, s)


def hamiltonian_edge_count(tube: Tube, n: int) -> int:
    """Hamiltonian polygons with ``n`` edges (of any span)."""
    if n % tube.W:
        return 0
    return count_hamiltonian(tube, n // tube.W - 1)


def _prime_for(knot: KnotId) -> int | None:
    """Smallest prime dividing ``det K`` (``None`` if the determinant is 1)."""
    det = knot.poly.determinant if knot.poly is not None else 1
    p = 2
    while p * p <= det:
        if det % p == 0:
            return p
        p += 1
    return det if det > 1 else None


@dataclass
class PatternCensus:
    """Exact numbers of proper patterns with ``DC = knot`` of one class.

    ``counts_by_span`` covers every span examined; ``smallest_span`` is
    the first span with a nonzero count.
    """

    tube: Tube
    knot: KnotId
    cls: str
    hamiltonian: bool
    smallest_span: int
    counts_by_span: dict[int, int] = field(default_factory=dict)


def knot_census(tube: Tube, knot: KnotId | str, hamiltonian: bool = False, min_span: int = 2,
                max_span: int = 8, progress=None) -> dict[int, SpanCensus]:
    """Classified censuses for spans ``min_span .. max_span`` (both classes)."""
    if isinstance(knot, str):
        knot = parse_knot(knot)
    prime = _prime_for(knot)
    out = {}
    for s in range(min_span, max_span + 1):
        out[s] = span_census(tube, s, hamiltonian, prime,
                             boundary_columns=HAM_BOUNDARY_COLUMNS if hamiltonian else None)
        if progress:
            progress(s, out[s])
    return out


def census_for_class(tube: Tube, knot: KnotId, cls: str, hamiltonian: bool,
                     censuses: dict[int, SpanCensus]) -> PatternCensus:
    counts = {s: c.count(knot.name, cls) for s, c in sorted(censuses.items())}
    found = [s for s, c in counts.items() if c > 0]
    if not found:
        raise NotFoundWithinLimit(
            f"no {cls} {knot.name} pattern in {tube.label} up to span {max(counts)}")
    first = found[0]
    return PatternCensus(tube, knot, cls, hamiltonian, first,
                         {s: c for s, c in counts.items() if s >= first})


def smallest_knot_patterns(tube: Tube, knot: KnotId | str, cls: str, hamiltonian: bool = False,
                           span_limit: int = 8) -> PatternCensus:
    """Census of ``cls`` patterns of ``knot`` for spans up to ``span_limit``.

    Raises
    ------
    NotFoundWithinLimit
        If no such pattern has span at most ``span_limit``.
    """
    if cls not in (LOCAL, NONLOCAL):
        raise ValueError(f"class must be {LOCAL} or {NONLOCAL}")
    if isinstance(knot, str):
        knot = parse_knot(knot)
    censuses = knot_census(tube, knot, hamiltonian, 2, span_limit)
    return census_for_class(tube, knot, cls, hamiltonian, censuses)


def census_rows(tube: Tube, knot: KnotId, hamiltonian: bool, censuses: dict[int, SpanCensus],
                classes=(NONLOCAL, LOCAL)) -> list[list]:
    """CSV rows from the smallest nonzero span of any class onward."""
    nonzero = [s for s, c in censuses.items() if any(c.count(knot.name, k) for k in classes)]
    if not nonzero:
        return []
    first = min(nonzero)
    rows = []
    for s, c in sorted(censuses.items()):
        if s < first:
            continue
        for k in classes:
            rows.append([tube.label, knot.name, k, str(hamiltonian).lower(), s, c.count(knot.name, k)])
    return rows


def write_census_csv(rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CENSUS_HEADER)
    w.writerows(rows)
    return buf.getvalue()
