"""Exception hierarchy shared by every module of the package."""


class LinkcatError(Exception):
    """Base class for all errors raised by linkcat."""


class CapExceeded(LinkcatError):
    """A closure or enumeration grew past its configured cap."""


class NotBijection(LinkcatError):
    pass


class NotInvertible(LinkcatError):
    pass


class NotNormal(LinkcatError):
    pass


class ScaleGuard(LinkcatError):
    """Requested parameters are outside the supported desk-scale range."""


class ValidationFailed(LinkcatError):
    """Input datum failed validation; ``report`` carries the details."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotAPartialOrder(LinkcatError):
    pass


class LinkNotInStabilizer(LinkcatError):
    pass


class IncompatibleInputs(LinkcatError):
    pass


class EmptySelection(LinkcatError):
    pass


class NotRadical(LinkcatError):
    pass


class ChainCap(LinkcatError):
    """Nerve chain count exceeded the configured cap."""


class DegreeOutOfRange(LinkcatError):
    pass


class NotFunctorial(LinkcatError):
    pass


class DisconnectedBasepoint(LinkcatError):
    pass
