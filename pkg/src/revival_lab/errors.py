"""Exception hierarchy. Each class maps to a distinct CLI exit code."""


class RevivalLabError(Exception):
    exit_code = 1


class PeriodUndefined(RevivalLabError):
    exit_code = 10


class WindowDegenerate(RevivalLabError):
    exit_code = 11


class NotAvailable(RevivalLabError):
    exit_code = 12


class InsufficientData(RevivalLabError):
    exit_code = 13


class PrecisionExhausted(RevivalLabError):
    exit_code = 14


class EtaTooLarge(RevivalLabError):
    exit_code = 15


class NoResonance(RevivalLabError):
    exit_code = 16


class ShapeMismatch(RevivalLabError):
    exit_code = 17


class NotCoprime(RevivalLabError):
    exit_code = 18


class HypothesisNotMet(RevivalLabError):
    exit_code = 19


class ConfigError(RevivalLabError):
    exit_code = 2


class ParseError(ConfigError):
    exit_code = 3

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ValidationError(ConfigError):
    exit_code = 4
