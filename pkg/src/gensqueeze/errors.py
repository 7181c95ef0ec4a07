"""Exception hierarchy shared by all gensqueeze modules."""


class GenSqueezeError(Exception):
    """Base class for every error raised by the package."""


class DegenerateDecomposition(GenSqueezeError, ZeroDivisionError):
    """The normal/antinormal ordering denominator vanishes."""


class CompositionSingularity(GenSqueezeError, ZeroDivisionError):
    """The shared denominator ``1 - B0 B+ (A- + B-)`` vanishes."""


class BranchAmbiguity(GenSqueezeError, ValueError):
    """The group element sits on the cut of the principal logarithm."""


class StepSizeFailure(GenSqueezeError, RuntimeError):
    """Time integration did not reach the requested step-halving tolerance."""


class CutoffTooSmall(GenSqueezeError, ValueError):
    """Fock truncation leaks into the block being compared."""


class SingularTMatrix(GenSqueezeError, ValueError):
    """Closed-form and direct inverses of an evolution matrix disagree."""


class DifferentiationUnstable(GenSqueezeError, RuntimeError):
    """Richardson extrapolation levels disagree."""


class QuadratureNotConverged(GenSqueezeError, RuntimeError):
    """Gauss-Hermite order doubling changed the integral too much."""


class PositivityViolation(GenSqueezeError, ValueError):
    """A Husimi quadratic form is not positive definite."""


class RangeViolation(GenSqueezeError, ValueError):
    """A correlation functional left the unit interval."""
