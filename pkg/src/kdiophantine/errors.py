"""Exception hierarchy shared by every module."""


class DiophantineError(Exception):
    """Base class for all errors raised by kdiophantine."""


class NotOddPrime(DiophantineError, ValueError):
    def __init__(self, p):
        self.p = p
        super().__init__(f"{p} is not an odd prime")


class ModulusTooLarge(DiophantineError, ValueError):
    pass


class ZeroInverse(DiophantineError, ZeroDivisionError):
    pass


class OutOfRange(DiophantineError, ValueError):
    pass


class DegenerateLinear(DiophantineError, ValueError):
    pass


class DegenerateQuadratic(DiophantineError, ValueError):
    pass


class DuplicateShifts(DiophantineError, ValueError):
    pass


class ZeroPolynomial(DiophantineError, ValueError):
    pass


class NoRepresentation(DiophantineError, ValueError):
    pass


class ZeroD(DiophantineError, ValueError):
    pass


class WrongResidueClassOfP(DiophantineError, ValueError):
    pass


class BadParameters(DiophantineError, ValueError):
    pass


class KTooLarge(BadParameters):
    def __init__(self, k, m):
        self.k, self.m = k, m
        super().__init__(f"k exceeds m (k={k}, m={m})")


class ResourceLimit(DiophantineError, RuntimeError):
    pass


class NoWitness(DiophantineError, LookupError):
    pass


class VerificationError(DiophantineError, AssertionError):
    """A closed form disagreed with its brute-force twin.

    Never expected to fire; it signals an implementation bug.
    """


class GaussMismatch(VerificationError):
    pass
