"""Exception hierarchy.

Every domain error carries its class name to the CLI, which prints it on
stderr and exits with status 1.
"""


class ChainColorError(Exception):
    """Base class for all domain errors raised by the package."""


class SizeBudget(ChainColorError):
    """An enumeration would exceed its configured cap."""


class NotNested(ChainColorError):
    pass


class AlphaMissing(ChainColorError):
    pass


class OutOfUniverse(ChainColorError):
    pass


class LengthMismatch(ChainColorError):
    pass


class NotAVertex(ChainColorError):
    pass


class EmptyChain(ChainColorError):
    pass


class NotAHomomorphism(ChainColorError):
    pass


class NotComplete(ChainColorError):
    pass


class NotProper(ChainColorError):
    pass


class PartialColoring(ChainColorError):
    pass


class EmptyCandidateSet(ChainColorError):
    pass


class PaletteTooSmall(ChainColorError):
    pass


class NotIndependentFamily(ChainColorError):
    pass


class PropertyViolation(ChainColorError):
    pass


class DomainMismatch(ChainColorError):
    pass


class FamilyUnavailable(ChainColorError):
    pass


class ConditionViolated(ChainColorError):
    pass


class SupportMismatch(ChainColorError):
    pass


class ZeroProbability(ChainColorError):
    pass


class NoCandidate(ChainColorError):
    pass


class BottomCode(ChainColorError):
    pass


class DeltaViolated(ChainColorError):
    pass


class DecodeMismatch(ChainColorError):
    """A decoded message differed from the encoded one."""


class DomainError(ChainColorError, ValueError):
    pass


class NoConvergence(ChainColorError):
    pass
