"""Exception types shared across the package."""


class HypergeoError(Exception):
    pass


class DomainError(HypergeoError, ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateInputError(HypergeoError, ValueError):
    """Coincident points or similar input that has no well-defined answer."""


class ClassificationAmbiguousError(HypergeoError):
    """Eigenvalue gaps are too small to tell isometry types apart."""


class SequenceError(HypergeoError, ValueError):
    """A crossing sequence violates its combinatorial invariants."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class VertexHitError(HypergeoError):
    """A traced lattice line passes through a triangulation vertex."""


class ConstructionFailed(HypergeoError):
    """A midpoint construction failed one of its straightness checks."""
