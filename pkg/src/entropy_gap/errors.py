"""Exception hierarchy shared by every module of the package."""


class EntropyGapError(Exception):
    """Base class for all errors raised by entropy_gap."""


class NotHermitian(EntropyGapError, ValueError):
    pass


class NotPSD(EntropyGapError, ValueError):
    pass


class ConvergenceFailure(EntropyGapError, ArithmeticError):
    pass


class DimensionMismatch(EntropyGapError, ValueError):
    pass


class InvalidState(EntropyGapError, ValueError):
    pass


class InvalidAlpha(EntropyGapError, ValueError):
    pass


class InfeasibleShape(EntropyGapError, ValueError):
    pass


class InvalidDistribution(EntropyGapError, ValueError):
    pass


class SupportDeficient(EntropyGapError, ValueError):
    """An operator needed inside a logarithm or inverse root is rank deficient."""


class InvalidConfig(EntropyGapError, ValueError):
    pass
