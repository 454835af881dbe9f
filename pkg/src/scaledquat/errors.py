"""Exception hierarchy shared by every module."""


class HTError(Exception):
    """Base class for all library errors."""


class ScaleMismatch(HTError, ValueError):
    """Operands carry different scales."""


class DimensionMismatch(HTError, ValueError):
    """Matrix or realization shapes are incompatible."""


class NonInvertible(HTError, ArithmeticError):
    """An element or matrix has no inverse within tolerance."""


class NoInvertiblePivot(NonInvertible):
    """Neither block pivot of a Schur inversion could be inverted."""


class NonInvertibleConstantTerm(NonInvertible):
    """A power series has a non-invertible constant coefficient."""


class NonInvertibleD(NonInvertible):
    """The feedthrough term of a realization is not invertible."""


class GramNotInvertible(NonInvertible):
    """An interpolation Gram matrix could not be inverted."""


class NotContractive(HTError, ValueError):
    """A geometric series guard failed (operator norm not below one)."""


class NotContractivePerturbation(NotContractive):
    """A binomial square root was requested outside its disc of convergence."""


class NotInUnitBall(NotContractive):
    """A Blaschke zero lies outside the open unit ball."""


class SmallnessViolated(NotContractive):
    """The bracket Blaschke factor needs ||a||^2 / (1 - ||a||^2) < 1."""


class ConditionViolated(NotContractive):
    """The mu-variable Blaschke condition sum ||mu_l(a)|| < 1 fails."""


class NotAZero(HTError, ValueError):
    """A series does not vanish at the requested point."""


class OnNullCone(HTError, ArithmeticError):
    """The vector part is not invertible at this point."""


class DomainViolation(HTError, ValueError):
    """A point lies outside the declared kernel domain."""


class DegreeCap(HTError, ValueError):
    """Requested degree exceeds the supported cap."""
