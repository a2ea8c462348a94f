"""Exception types shared across modules."""


class FreeStatesError(Exception):
    pass


class InvalidGenerator(FreeStatesError, ValueError):
    pass


class RankMismatch(FreeStatesError, ValueError):
    pass


class SphereTooLarge(FreeStatesError, ValueError):
    pass


class DuplicateWord(FreeStatesError, ValueError):
    pass


class NotHermitian(FreeStatesError, ValueError):
    pass


class TooLarge(FreeStatesError, ValueError):
    pass


class LambdaOutOfRange(FreeStatesError, ValueError):
    pass


class PrefixTooShort(FreeStatesError, ValueError):
    pass


class TooDeep(FreeStatesError, ValueError):
    pass


class ZeroNotOnCircle(FreeStatesError, ValueError):
    pass


class NotAZero(ZeroNotOnCircle):
    """A proposed support point is unimodular but not a root of the polynomial."""


class WeightsNotConvex(FreeStatesError, ValueError):
    pass
