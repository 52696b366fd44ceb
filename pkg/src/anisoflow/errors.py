"""Exception hierarchy shared by all modules."""


class AnisoflowError(Exception):
    """Base class for every error raised by this package."""


class TooFewNodes(AnisoflowError):
    pass


class SelfIntersecting(AnisoflowError):
    pass


class NegativeOrientation(AnisoflowError):
    pass


class FlatCurve(AnisoflowError):
    pass


class ZeroVector(AnisoflowError):
    pass


class NonUnitNormal(AnisoflowError):
    pass


class DegenerateAnisotropy(AnisoflowError):
    pass


class GraphLeavesTube(AnisoflowError):
    pass


class NotInTube(AnisoflowError):
    pass


class NewtonDiverged(AnisoflowError):
    pass


class PenaltyTooWeak(AnisoflowError):
    pass


class DissipationViolated(AnisoflowError):
    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class InsufficientData(AnisoflowError):
    pass


class OutOfRange(AnisoflowError):
    pass


class ParseError(AnisoflowError):
    pass


class ValidationError(AnisoflowError):
    pass


class IoError(AnisoflowError):
    pass
