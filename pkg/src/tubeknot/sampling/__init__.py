"""Exact fixed-span sampling and knot-pattern estimators."""
from .estimate import (
    ESTIMATE_HEADER,
    EstimateRecord,
    PatternClassifier,
    SampleSummary,
    estimate,
    summarise,
    wilson,
)
from .tables import RNG_NAME, SampleBatch, SamplerTables, build_sampler, draw, masks_to_polygon

__all__ = [
    "ESTIMATE_HEADER",
    "EstimateRecord",
    "PatternClassifier",
    "RNG_NAME",
    "SampleBatch",
    "SampleSummary",
    "SamplerTables",
    "build_sampler",
    "draw",
    "estimate",
    "masks_to_polygon",
    "summarise",
    "wilson",
]
