"""Exception types shared across the package."""


class BoundaryQEError(Exception):
    """Base class for all package errors."""


class InvalidSpecError(BoundaryQEError):
    """Domain or run configuration violates its invariants."""


class CornerError(BoundaryQEError):
    """Boundary frame requested exactly at a corner without a side flag."""


class CornerHitError(BoundaryQEError):
    """A billiard ray hit a corner; the trajectory terminates there."""

    def __init__(self, s, n_completed):
        super().__init__(f"ray hit corner at s={s:.12g} after {n_completed} bounces")
        self.s = s
        self.n_completed = n_completed


class GeometryBugError(BoundaryQEError):
    """A ray found no boundary intersection; indicates an internal bug."""


class IndexingError(BoundaryQEError):
    """An oracle matching-equation root was not bracketed as indexed."""


class NotAnEigenvalueError(BoundaryQEError):
    """compute_mode called at a frequency where the operator is not singular."""


class RefinementFailure(BoundaryQEError):
    """Eigenvalue minimization escaped its bracket; candidate dropped."""


class DataError(BoundaryQEError):
    """A Mode is missing arrays required by the requested operation."""


class CacheError(BoundaryQEError):
    """Spectrum cache is missing, malformed, or fails its integrity hash."""
