"""Exception types raised across potdyn."""


class PotdynError(Exception):
    """Base class for library errors."""


class NonConvergence(PotdynError):
    """Root finder missed its residual target; carries the best iterate."""

    def __init__(self, message, roots=None, residuals=None):
        super().__init__(message)
        self.roots = roots
        self.residuals = residuals


class EmptySet(PotdynError):
    pass


class WindowTooSmall(PotdynError):
    pass


class UnboundedSequence(PotdynError):
    pass


class CountExceedsCandidates(PotdynError):
    pass


class DuplicatePoints(PotdynError):
    pass


class UnsupportedShape(PotdynError):
    pass


class DegreeTooLow(PotdynError):
    pass


class Indeterminate(PotdynError):
    """Orbit left the escape disc but did not reach the escape threshold."""


class TreeTooLarge(PotdynError):
    pass


class ExchangeStalled(PotdynError):
    pass


class IllConditioned(PotdynError):
    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class UnknownFamily(PotdynError):
    pass


class GridTooClose(PotdynError):
    pass
