"""Exception types shared across the package."""


class BrauerY02Error(Exception):
    """Base class for all package errors."""


# intlinalg
class ContainmentViolation(BrauerY02Error):
    """A lattice that should sit inside another one does not."""


class MatrixParseError(BrauerY02Error, ValueError):
    """Malformed matrix literal. Carries the offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


# cohomology
class InvalidModule(BrauerY02Error):
    """The action matrix does not define a C_n-module on the presented group."""


class TooLarge(BrauerY02Error):
    """The brute-force oracle refuses modules above its size bound."""


class ModelMismatch(BrauerY02Error):
    """A cohomology comparison between two models failed."""


class DegreeOutOfRange(BrauerY02Error, ValueError):
    """Requested cohomological degree outside the supported range."""


# padic / moduli
class NonUnit(BrauerY02Error, ZeroDivisionError):
    """Division by (or inversion of) a non-unit."""


class PrecisionExhausted(BrauerY02Error):
    """Not enough tracked precision is left for the requested operation."""


class NotASquareResidue(BrauerY02Error):
    """The residue of an element is not a square in the residue field."""


class NotASquare(BrauerY02Error):
    """A finite field element is not a square."""


class UnsupportedValuation(BrauerY02Error):
    """The element is not of the shape p^(2j) * unit required by a routine."""


class NotOneUnit(BrauerY02Error):
    """The p-adic logarithm was asked for an element not congruent to 1."""


class ZeroArgument(BrauerY02Error, ValueError):
    """A Hilbert symbol was requested with a zero argument."""


class LiteralParseError(BrauerY02Error, ValueError):
    """Malformed element literal."""


class NotTwoTorsion(BrauerY02Error):
    """The marked point is not a nonzero 2-torsion point."""


class BadCharacteristic(BrauerY02Error):
    """The routine does not support the characteristic of the field."""


class SingularCurve(BrauerY02Error):
    """The Weierstrass model has vanishing discriminant."""


# assembly
class BadP(BrauerY02Error, ValueError):
    """Prime set is empty, misses 2, or contains non-primes."""


class UnsupportedP(BadP):
    """Prime set outside the audited range."""


class UnsupportedBase(BrauerY02Error):
    """The evaluator does not cover this base."""


class MissingTableEntry(BrauerY02Error, KeyError):
    """The shipped base data has no entry for the requested quantity."""


class InfiniteTerm(BrauerY02Error):
    """An exact-sequence order check met an infinite or symbolic term."""


class SymbolicTerm(BrauerY02Error):
    """An operation needs a concrete group but met a symbolic atom."""
