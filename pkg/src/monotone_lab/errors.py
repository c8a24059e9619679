"""Exception types shared across the package."""


class MonotoneLabError(Exception):
    """Base class for all package errors."""


class GeometryError(MonotoneLabError):
    """Invalid polygon or point outside an expected domain."""


class MeshError(MonotoneLabError):
    """Triangulation failed or a mesh invariant is violated."""


class DomainError(MonotoneLabError):
    """A point lies outside the domain of a map."""


class DegreeUndefinedError(MonotoneLabError):
    """The query point is on (or too close to) the image of the region boundary."""


class NonGenericPointError(MonotoneLabError):
    """The query point lies exactly on the image of a triangle edge.

    Integer-valued outputs must not depend on hidden jitter, so the caller
    is asked to perturb explicitly; ``suggested_offset`` is a safe nudge.
    """

    def __init__(self, message: str, suggested_offset=None):
        super().__init__(message)
        self.suggested_offset = suggested_offset


class FeasibilityError(MonotoneLabError):
    """No feasible deformation is available (initialization or descent)."""


class ConfigError(MonotoneLabError):
    """Invalid run configuration."""
