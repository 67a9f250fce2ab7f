"""Exception hierarchy.

Every error carries a short machine ``code`` and the CLI ``exit_status`` it
maps to (1 hypothesis violation, 2 unsupported geometry, 3 parse/manifest).
"""

from __future__ import annotations


class NrCubicError(Exception):
    code = "ERROR"
    exit_status = 2

    def __init__(self, message: str, **witness):
        super().__init__(message)
        self.witness = witness


# -- input / parse (exit 3) -------------------------------------------------

class ParseError(NrCubicError):
    code = "PARSE_ERROR"
    exit_status = 3

    def __init__(self, message: str, position: int | None = None, **witness):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message, position=position, **witness)
        self.position = position


class NotHomogeneous(NrCubicError):
    code = "NOT_HOMOGENEOUS"
    exit_status = 3


class ManifestError(NrCubicError):
    code = "MANIFEST_ERROR"
    exit_status = 3


class InvalidBundle(NrCubicError):
    code = "INVALID_BUNDLE"
    exit_status = 3


class NotIrreducible(NrCubicError):
    """A factor was shown not to be (geometrically) irreducible."""

    code = "NOT_IRREDUCIBLE"
    exit_status = 3


# -- arithmetic contract violations -----------------------------------------

class DegreeMismatch(NrCubicError):
    code = "DEGREE_MISMATCH"
    exit_status = 3


class NotDivisible(NrCubicError):
    code = "NOT_DIVISIBLE"


class RestrictionZero(NrCubicError):
    code = "RESTRICTION_ZERO"


class CarrierMismatch(NrCubicError):
    code = "CARRIER_MISMATCH"


class PointNotOnCurve(NrCubicError):
    code = "POINT_NOT_ON_CURVE"


# -- unsupported geometry (exit 2) ------------------------------------------

class Unsupported(NrCubicError):
    code = "UNSUPPORTED"
    exit_status = 2


class UnsupportedCurve(Unsupported):
    code = "UNSUPPORTED_CURVE"


class UnsupportedLocalGeometry(Unsupported):
    code = "UNSUPPORTED_LOCAL_GEOMETRY"


# -- theorem hypotheses (exit 1) --------------------------------------------

class HypothesisViolation(NrCubicError):
    code = "HYPOTHESIS_VIOLATION"
    exit_status = 1

    def __init__(self, hypothesis: str, message: str, **witness):
        super().__init__(f"{hypothesis}: {message}", hypothesis=hypothesis, **witness)
        self.hypothesis = hypothesis
