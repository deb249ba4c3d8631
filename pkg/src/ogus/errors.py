"""Exception hierarchy shared by all modules."""


class OgusError(Exception):
    """Base class; ``kind`` is the stable name used in CLI reports."""

    @property
    def kind(self) -> str:
        return type(self).__name__


class RamifiedOrEvenPlace(OgusError):
    pass


class DenominatorNotUnit(OgusError):
    pass


class NotAUnit(OgusError):
    pass


class NotPrincipalUnit(OgusError):
    pass


class NotInDomain(OgusError):
    pass


class DimensionMismatch(OgusError):
    pass


class NotMonicNormalizable(OgusError):
    pass


class MixedNonIntegralWeight(OgusError):
    pass


class CharpolyMismatch(OgusError):
    pass


class PrecisionExhausted(OgusError):
    pass


class ReconstructionFailed(OgusError):
    def __init__(self, message: str, place=None):
        super().__init__(message)
        self.place = place


class FiltrationNotCoordinateAligned(OgusError):
    pass


class NotAGoodPlace(OgusError):
    pass


class IncompatibleHom(OgusError):
    pass


class NotLEffective(OgusError):
    pass


class NonPositiveEntry(OgusError):
    pass


class ConfigError(OgusError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line
