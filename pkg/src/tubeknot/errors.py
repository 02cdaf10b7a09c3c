"""Exception taxonomy shared by all modules.

Every domain failure raised by the library derives from
:class:`TubeKnotError`; the command-line front end maps these to exit
code 1 and prints the class name on standard error.
"""


class TubeKnotError(Exception):
    """Base class for all domain errors."""


# lattice
class InvalidPolygon(TubeKnotError):
    """Base class for polygon validation failures."""


class NotClosed(InvalidPolygon):
    """Consecutive vertices are not at unit lattice distance."""


class SelfIntersecting(InvalidPolygon):
    """A vertex is visited twice."""


class OutOfTube(InvalidPolygon):
    """A vertex lies outside the tube."""


class DoesNotTouchRoot(InvalidPolygon):
    """No vertex lies in the plane x = 0."""


class OddOrTooShort(InvalidPolygon):
    """Edge count is odd or smaller than four."""


class SpanRangeError(TubeKnotError, ValueError):
    """A plane index lies outside ``[0, span]``."""


# enumeration
class ResourceBudgetExceeded(TubeKnotError):
    """A configured node or state budget was exhausted."""


class NotFoundWithinLimit(TubeKnotError):
    """No pattern of the requested kind exists up to the span limit."""


class CheckpointError(TubeKnotError):
    """A checkpoint file is malformed or belongs to another run."""


# knots
class DegenerateProjection(TubeKnotError):
    """The projection direction produced a non-regular diagram."""


class MultiComponent(TubeKnotError):
    """A single-component diagram was required."""


class ClosureRoutingFailure(TubeKnotError):
    """A closure arc could not be routed without touching the pattern."""


# patterns
class UnknottedInput(TubeKnotError):
    """A knotted polygon was required."""


class NotAProperPattern(TubeKnotError):
    """The segment is not a proper cs-pattern."""


# transfer
class StateSpaceOverflow(TubeKnotError):
    """The interface state space exceeds the configured cap."""

    def __init__(self, reached: int, cap: int):
        super().__init__(f"state count reached {reached} (cap {cap})")
        self.reached = reached
        self.cap = cap


class BracketingFailure(TubeKnotError):
    """No sign change of the root function inside the search window."""


class NonPrimitiveMatrix(TubeKnotError):
    """The dominant eigenvalue is not simple."""


class PatternNotRepresentable(TubeKnotError):
    """A pattern geometry does not fit the transfer system's tube."""


# sampling
class EmptyClassCell(TubeKnotError):
    """A conditional statistic has an empty conditioning class."""


# cli / report
class SchemaMismatch(TubeKnotError):
    """An input CSV does not carry the expected columns."""

    def __init__(self, column: str, path: str = ""):
        where = f" in {path}" if path else ""
        super().__init__(f"missing or unexpected column {column!r}{where}")
        self.column = column
