"""Exception types raised on contract violations."""


class AntiparallelError(ValueError):
    """Base class for all input errors raised by this package."""


class NotSquare(AntiparallelError):
    pass


class NotHermitian(AntiparallelError):
    pass


class DimensionMismatch(AntiparallelError):
    pass


class NotUnit(AntiparallelError):
    pass


class NotNormalized(AntiparallelError):
    pass


class EmptyInput(AntiparallelError):
    pass


class LengthMismatch(AntiparallelError):
    pass


class SizeMismatch(AntiparallelError):
    pass


class GammaOutOfRange(AntiparallelError):
    pass


class NotMeridian(AntiparallelError):
    pass


class PriorMismatch(AntiparallelError):
    pass


class DuplicateVectors(AntiparallelError):
    pass
