"""Exception hierarchy shared by all lrmesa modules."""


class LrmesaError(Exception):
    """Base class for all library errors."""


class DomainError(LrmesaError):
    """Input is well formed but mathematically unusable (CLI exit code 2)."""


class InvalidMeasure(DomainError):
    pass


class Inconsistent(DomainError):
    pass


class NegativeDensity(DomainError):
    pass


class NotRigid(DomainError):
    pass


class UnsupportedWitness(DomainError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class SigmaNotZero(DomainError):
    pass


class NegativeProfile(DomainError):
    pass


class CyclicDescendance(DomainError):
    pass


class NoRootInTriangle(DomainError):
    pass


class DecompositionStuck(DomainError):
    pass


class NotATree(DomainError):
    pass


class ResourceLimit(DomainError):
    pass


class AmbientMismatch(DomainError):
    pass


class InconsistentTranslation(LrmesaError):
    pass


class GenericityFailure(LrmesaError):
    """Flags were not generic enough for a construction (CLI exit code 3)."""


class NotAFlag(GenericityFailure):
    pass


class RetryExhausted(GenericityFailure):
    pass
