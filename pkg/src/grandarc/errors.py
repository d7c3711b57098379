"""Exception types shared across the package.

Operations that return report objects never raise; everything else signals
precondition violations with one of the classes below.
"""


class GrandArcError(Exception):
    """Base class for all package errors."""


class EmptyEndSpace(GrandArcError):
    """Descriptor declares no end classes at all."""


class UnsupportedInfiniteSplitting(GrandArcError):
    """An infinite grand splitting was requested; only finite ones are handled."""


class NoGrandArcs(GrandArcError):
    """The grand arc graph of this descriptor is empty (fewer than two maximal classes)."""


class RequiresStableEnds(GrandArcError):
    """Orbit counting is only valid for descriptors declared stable."""


class ExcludedSurface(GrandArcError):
    """Named special surface excluded from this construction."""


class TruncationTooSmall(GrandArcError):
    """The requested truncation level cannot host the construction."""


class MalformedArc(GrandArcError):
    """Arc literal or crossing data is inconsistent with the surface."""


class MalformedCurve(GrandArcError):
    """Closed curve data is inconsistent, inessential, or not simple."""


class SurfaceMismatch(GrandArcError):
    """Two objects living on different surfaces were combined."""


class NotGrand(GrandArcError):
    """A grand arc was required."""


class NeedsThreeClasses(GrandArcError):
    """Construction requires at least three grand splitting classes."""


class UniverseTooSmall(GrandArcError):
    """The supplied enumeration universe misses a required vertex."""


class EmptyGraph(GrandArcError):
    """Graph construction produced no vertices."""


class NotInUniverse(GrandArcError):
    """Distance query for a vertex outside the graph."""


class TooSmall(GrandArcError):
    """Not enough vertices for the requested statistic."""


class UnsupportedWord(GrandArcError):
    """Mapping class word lacks the support data required here."""


class SupportsOverlap(GrandArcError):
    """Two mapping class words were required to have disjoint supports."""


class NotSupportedOffWitness(GrandArcError):
    """Word must be supported away from the chosen witness region."""


class MalformedInput(GrandArcError):
    """A file or literal failed to parse."""
