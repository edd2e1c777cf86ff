"""Closed geodesics on regular hyperbolic tetrahedra."""

from .errors import (
    ClassificationAmbiguousError,
    ConstructionFailed,
    DegenerateInputError,
    DomainError,
    HypergeoError,
    SequenceError,
    VertexHitError,
)
from .tetrahedron import TetraMetric, edge_length, face_chart, theorem2_rhs
from .development import CrossingSequence, canonical_sequence, develop, validate
from .solver import ClosedGeodesic, NotRealizable, construct_midpoint, solve_class

__version__ = "0.1.0"
