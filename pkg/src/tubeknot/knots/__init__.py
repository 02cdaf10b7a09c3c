"""Knot identification for closed lattice curves."""
from .alexander import alexander
from .diagram import (
    ALTERNATE_PROJECTION,
    DEFAULT_PROJECTION,
    Diagram,
    Projection,
    project_diagram,
    simplify,
    write_gauss_codes,
)
from .laurent import SymmetricLaurent
from .table import KnotId, UNKNOT, identify, parse_knot


def identify_curve(curve, projection: Projection = DEFAULT_PROJECTION) -> KnotId:
    """Knot type of one closed lattice curve."""
    return identify(alexander(project_diagram(curve, projection)))


__all__ = [
    "ALTERNATE_PROJECTION",
    "DEFAULT_PROJECTION",
    "Diagram",
    "KnotId",
    "Projection",
    "SymmetricLaurent",
    "UNKNOT",
    "alexander",
    "identify",
    "identify_curve",
    "parse_knot",
    "project_diagram",
    "simplify",
    "write_gauss_codes",
]
