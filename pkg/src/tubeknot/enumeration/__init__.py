"""Exhaustive counting of polygons and censuses of knot patterns."""
from .api import (
    CENSUS_HEADER,
    PatternCensus,
    census_rows,
    count_hamiltonian,
    count_polygons,
    hamiltonian_edge_count,
    knot_census,
    smallest_knot_patterns,
    write_census_csv,
)
from .census import PatternEngine, PatternRecord, SpanCensus, span_census
from .dfs import CountTable, dfs_count_polygons, dfs_polygons
from .hamiltonian import completable_pairs

__all__ = [
    "CENSUS_HEADER",
    "CountTable",
    "PatternCensus",
    "PatternEngine",
    "PatternRecord",
    "SpanCensus",
    "census_rows",
    "completable_pairs",
    "count_hamiltonian",
    "count_polygons",
    "dfs_count_polygons",
    "dfs_polygons",
    "hamiltonian_edge_count",
    "knot_census",
    "smallest_knot_patterns",
    "span_census",
    "write_census_csv",
]
