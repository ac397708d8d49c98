"""Exception hierarchy shared by every module."""


class ZetasumError(Exception):
    """Base class for all computation errors raised by the package."""


# numkern
class PoleAtOne(ZetasumError):
    pass


class PoleTooClose(ZetasumError):
    pass


class PoleOfChi(ZetasumError):
    pass


class ZeroOfZeta(ZetasumError):
    pass


class PrecisionUnachievable(ZetasumError):
    pass


class NonFiniteValue(ZetasumError):
    pass


# zeros
class MissedZero(ZetasumError):
    pass


class AmbiguousCount(ZetasumError):
    pass


class InsufficientTable(ZetasumError):
    pass


class ZeroTableFormatError(ZetasumError):
    """Raised while parsing a zero-table stream; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class MalformedLine(ZeroTableFormatError):
    pass


class NotAscending(ZeroTableFormatError):
    pass


class VerificationFailed(ZetasumError):
    def __init__(self, gamma: str, message: str = ""):
        super().__init__(f"ordinate {gamma} failed verification" + (f": {message}" if message else ""))
        self.gamma = gamma


# arith / expansions
class InexactX(ZetasumError):
    pass


class XNotInteger(ZetasumError):
    pass


class TablesTooShallow(ZetasumError):
    pass


class OutOfContract(ZetasumError):
    pass
