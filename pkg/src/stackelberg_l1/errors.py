"""Exception hierarchy shared by every module of the package."""


class StackelbergError(ValueError):
    """Base class for all domain errors raised by the package."""


class GeometryError(StackelbergError):
    """Raised when an exact geometric construction cannot be completed."""


class CoincidentSites(GeometryError):
    """Two generator sites occupy the same location."""


class NonSimplePolygon(GeometryError):
    """A polygon self-intersects or is otherwise not simple."""


class OutOfQuadrant(StackelbergError):
    """The queried point lies outside the anchor's Voronoi cell."""


class OnBoundary(StackelbergError):
    """The queried point lies on a configuration line or a quadrant edge."""


class SectionNotPresent(StackelbergError):
    """The requested section does not intersect the quadrant."""


class InconsistentCase(StackelbergError):
    """A theft case does not agree with the section label of the point."""


class OrientationError(StackelbergError):
    """Grid cells must satisfy p/a >= q/b."""


class DomainError(StackelbergError):
    """Generic parameter error (non-positive sizes, bad indices, ...)."""
