"""Transfer matrices: partition functions, free energies and pattern probabilities."""
from .partition import (
    edge_counts,
    edge_polynomials,
    fixed_edge_partition,
    fixed_span_partition,
    log_fixed_span_partition,
    span_count,
)
from .probability import (
    ColumnPattern,
    PatternFamily,
    column_pattern,
    family_probability,
    limiting_pattern_probability,
    single_column_total,
)
from .spectral import (
    Eigen,
    check_primitive,
    dominant,
    free_energy,
    free_energy_per_edge,
    free_energy_per_span,
    g_star,
    hamiltonian_rate,
)
from .system import TransferSystem, build

__all__ = [
    "ColumnPattern",
    "Eigen",
    "PatternFamily",
    "TransferSystem",
    "build",
    "check_primitive",
    "column_pattern",
    "dominant",
    "edge_counts",
    "edge_polynomials",
    "family_probability",
    "fixed_edge_partition",
    "fixed_span_partition",
    "free_energy",
    "free_energy_per_edge",
    "free_energy_per_span",
    "g_star",
    "hamiltonian_rate",
    "limiting_pattern_probability",
    "log_fixed_span_partition",
    "single_column_total",
    "span_count",
]
