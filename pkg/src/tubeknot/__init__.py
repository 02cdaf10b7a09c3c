"""Knotted self-avoiding polygons in lattice tubes.

Subpackages
-----------
lattice
    Tubes and validated polygons.
knots
    Crossing diagrams, Alexander polynomials and knot identification.
patterns
    2-section decomposition, closures and local/non-local classification.
transfer
    Transfer matrices, partition functions, free energies, limiting
    pattern probabilities.
enumeration
    Exact polygon counts and knot-pattern censuses.
sampling
    Exact fixed-span sampling and estimators.
cli
    Command-line front end.
"""
from .lattice import Polygon, Tube, validate_polygon

__version__ = "0.1.0"

__all__ = ["Polygon", "Tube", "validate_polygon", "__version__"]
