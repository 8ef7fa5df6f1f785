"""Exception hierarchy.  Each class carries the CLI exit code it maps to."""

from __future__ import annotations


class PadynError(Exception):
    exit_code = 1


class PrecisionExhausted(PadynError):
    """Not enough p-adic digits to certify a result.

    ``suggested_precision`` is filled in when the caller can estimate how
    many pi-digits a retry would need.
    """

    exit_code = 2

    def __init__(self, message: str, suggested_precision: int | None = None):
        super().__init__(message)
        self.suggested_precision = suggested_precision


class DivisionByUncertifiedZero(PrecisionExhausted):
    pass


class ParseError(PadynError):
    exit_code = 3

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
        self.position = position


class ConfigError(PadynError):
    exit_code = 3


class FieldMismatch(PadynError):
    exit_code = 3


class HypothesisViolated(PadynError):
    exit_code = 4


class IndistinguishableFromRootOfUnity(HypothesisViolated):
    pass


class UnsupportedResidueOrder(HypothesisViolated):
    pass


class UnsupportedDegree(HypothesisViolated):
    pass


class CheckNotApplicable(HypothesisViolated):
    pass


class OutsideConvergenceCertificate(HypothesisViolated):
    pass


class TruncationTooShort(PadynError):
    exit_code = 5
