class HarperError(Exception):
    """Base class for toolkit errors."""


class DegenerateParams(HarperError):
    """alpha*beta == 0: the fixed points form a continuum."""


class ToleranceAmbiguous(HarperError):
    """A half-line crossing was found but the F^(2n) identity did not verify."""


class EmptyPolygon(HarperError):
    pass


class UpperEndpointNotDiffusive(HarperError):
    """The bisection ceiling did not classify as diffusive within budget."""


class NotCertified(HarperError):
    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class NonpositiveAlpha(HarperError):
    pass


class ToleranceUnreachable(HarperError):
    pass
