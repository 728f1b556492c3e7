"""Exception hierarchy shared by all modules."""


class BLMPError(Exception):
    """Base class for every error raised by superblmp."""


class DivisionNearSingularity(BLMPError, ZeroDivisionError):
    """A denominator fell to or below the division floor."""


class SingularPoint(DivisionNearSingularity):
    """A solution is evaluated on (or next to) one of its singularities."""


class DegenerateWronskian(SingularPoint):
    pass


class BranchCutViolation(BLMPError, ValueError):
    pass


class OrderExceeded(BLMPError, IndexError):
    """A derivative was requested beyond the order carried by a jet."""


class GeneratorSetMismatch(BLMPError, ValueError):
    pass


class ParityUndefined(BLMPError, ValueError):
    pass


class ParityMismatch(BLMPError, ValueError):
    pass


class MissingSymbol(BLMPError, KeyError):
    pass


class OrderCapExceeded(BLMPError, ValueError):
    pass


class CapExceeded(BLMPError, ValueError):
    pass


class NonExactDivision(BLMPError, ArithmeticError):
    pass


class InvalidKappa(BLMPError, ValueError):
    pass


class InvariantViolation(BLMPError, ValueError):
    pass


class NegativeQPrime(BLMPError, ValueError):
    pass


class NoConvergence(BLMPError, RuntimeError):
    pass


class DescriptorError(BLMPError, ValueError):
    """A JSON solution descriptor could not be parsed."""
