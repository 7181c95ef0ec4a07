"""Parameter-space arithmetic for exponentials of su(1,1) generators.

An element ``exp(W+ K+ + W0 K0 + W- K-)`` is stored as :class:`AlgebraParams`.
Everything here is representation independent: composition and logarithms go
through the faithful 2x2 representation

    K0 = diag(1/2, -1/2),  K+ = [[0, 1], [0, 0]],  K- = [[0, 0], [-1, 0]],

in which ``exp(p.K) = C(z) 1 + S(z) M`` with ``M**2 = z 1`` and
``z = (W0/2)**2 - W+ W-``.  The hyperbolic radical only ever enters through
the entire functions ``C(z) = cosh(sqrt z)`` and ``S(z) = sinh(sqrt z)/sqrt z``,
so no square-root branch has to be chosen.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchAmbiguity, CompositionSingularity, DegenerateDecomposition

__all__ = [
    "AlgebraParams",
    "UnitaryParams",
    "Ordering",
    "NormalFactors",
    "GroupMatrix",
    "radical_functions",
    "decompose_normal",
    "decompose_antinormal",
    "compose_factors",
    "compose",
    "compose_via_factors",
    "composition_residuals",
    "inverse",
    "is_unitary",
    "matrix_rep",
    "params_from_matrix",
]

_SERIES_RADIUS = 1e-2
_DEGENERACY_RTOL = 1e-12
_DET_RTOL = 1e-12
# 1/(2k)! and 1/(2k+1)! for k = 0..7; |z| < 1e-2 makes the tail < 1e-35
_COSH_COEFFS = np.array([1.0 / math.factorial(2 * k) for k in range(8)])
_SINHC_COEFFS = np.array([1.0 / math.factorial(2 * k + 1) for k in range(8)])


@dataclass(frozen=True)
class AlgebraParams:
    """Coefficients ``(W+, W0, W-)`` of ``exp(W+ K+ + W0 K0 + W- K-)``."""

    omega_plus: complex
    omega_zero: complex
    omega_minus: complex

    def __post_init__(self):
        for name in ("omega_plus", "omega_zero", "omega_minus"):
            value = complex(getattr(self, name))
            if not cmath.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if not cmath.isfinite(self.radical_sq):
            raise ValueError("radical argument overflows")

    @classmethod
    def identity(cls) -> "AlgebraParams":
        return cls(0.0, 0.0, 0.0)

    @classmethod
    def from_array(cls, values) -> "AlgebraParams":
        plus, zero, minus = values
        return cls(plus, zero, minus)

    @property
    def radical_sq(self) -> complex:
        """``(W0/2)**2 - W+ W-``, the square of the hyperbolic radical."""
        return (self.omega_zero / 2) ** 2 - self.omega_plus * self.omega_minus

    def as_array(self) -> np.ndarray:
        return np.array([self.omega_plus, self.omega_zero, self.omega_minus], dtype=complex)

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    def __neg__(self) -> "AlgebraParams":
        return AlgebraParams(-self.omega_plus, -self.omega_zero, -self.omega_minus)


@dataclass(frozen=True)
class UnitaryParams:
    """``(xi, omega)`` of the unitary family ``(W+, W0, W-) = (xi, i omega, -xi*)``.

    ``omega = 0`` gives the ordinary squeeze operators ``S(xi)`` (one mode)
    and ``S2(xi)`` (two modes).
    """

    xi: complex
    omega: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "xi", complex(self.xi))
        object.__setattr__(self, "omega", float(self.omega))

    def to_algebra(self) -> AlgebraParams:
        return AlgebraParams(self.xi, 1j * self.omega, -self.xi.conjugate())


class Ordering(enum.Enum):
    NORMAL = "normal"
    ANTINORMAL = "antinormal"


@dataclass(frozen=True)
class NormalFactors:
    """Three-factor ordered form of a group element.

    NORMAL:      exp(f_plus K+) f_zero**K0 exp(f_minus K-)
    ANTINORMAL:  exp(f_minus K-) f_zero**K0 exp(f_plus K+)

    ``log_zero`` is the logarithm of ``f_zero`` continued from the identity
    along ``s -> s p``; it fixes the branch of ``f_zero**K0`` in
    representations where K0 has non-integer spectrum.
    """

    f_plus: complex
    f_zero: complex
    f_minus: complex
    ordering: Ordering
    log_zero: complex

    def __post_init__(self):
        if self.f_zero == 0:
            raise DegenerateDecomposition("f_zero must be nonzero")

    @property
    def sqrt_zero(self) -> complex:
        return cmath.exp(self.log_zero / 2)


@dataclass(frozen=True)
class GroupMatrix:
    """A 2x2 complex matrix of unit determinant (defining representation)."""

    array: np.ndarray

    def __post_init__(self):
        arr = np.array(self.array, dtype=complex)
        if arr.shape != (2, 2):
            raise ValueError("GroupMatrix needs a 2x2 array")
        arr.setflags(write=False)
        object.__setattr__(self, "array", arr)

    @property
    def determinant(self) -> complex:
        a = self.array
        return a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]

    @property
    def trace(self) -> complex:
        return self.array[0, 0] + self.array[1, 1]

    def __matmul__(self, other: "GroupMatrix") -> "GroupMatrix":
        return GroupMatrix(self.array @ other.array)


def radical_functions(z):
    """Return ``(cosh(sqrt z), sinh(sqrt z)/sqrt z)`` as entire functions of z.

    Accepts scalars or arrays.  A Taylor series is used for ``|z| < 1e-2``.

    >>> radical_functions(0.0)
    ((1+0j), (1+0j))
    """
    zarr = np.asarray(z, dtype=complex)
    scalar = zarr.ndim == 0
    zarr = np.atleast_1d(zarr)
    cosh_part = np.empty_like(zarr)
    sinhc_part = np.empty_like(zarr)

    small = np.abs(zarr) < _SERIES_RADIUS
    if np.any(small):
        zs = zarr[small]
        cosh_part[small] = np.polynomial.polynomial.polyval(zs, _COSH_COEFFS)
        sinhc_part[small] = np.polynomial.polynomial.polyval(zs, _SINHC_COEFFS)
    big = ~small
    if np.any(big):
        root = np.sqrt(zarr[big])
        cosh_part[big] = np.cosh(root)
        sinhc_part[big] = np.sinh(root) / root

    if scalar:
        return complex(cosh_part[0]), complex(sinhc_part[0])
    return cosh_part, sinhc_part


def _check_denominator(den: complex, *numerators: complex, exc=DegenerateDecomposition, what="") -> None:
    scale = 1.0 + max((abs(n) for n in numerators), default=0.0)
    if abs(den) <= _DEGENERACY_RTOL * scale:
        raise exc(f"{what} denominator {den!r} vanishes")


def _continued_log(fn, samples: int = 257) -> complex:
    """log fn(1), continued from fn(0) = 1 along a straight path in s."""
    s = np.linspace(0.0, 1.0, samples)
    values = np.array([fn(si) for si in s], dtype=complex)
    if np.any(values == 0):
        raise DegenerateDecomposition("ordering denominator crosses zero on the path from identity")
    phase = np.unwrap(np.angle(values))
    steps = np.abs(np.diff(phase))
    if steps.size and steps.max() > 0.5:
        # path passes too close to zero for this sampling density
        return _continued_log(fn, samples=4 * samples - 3)
    return complex(math.log(abs(values[-1])), phase[-1])


def _ordering_denominator(p: AlgebraParams, sign: int, scale: float = 1.0):
    zp = AlgebraParams(scale * p.omega_plus, scale * p.omega_zero, scale * p.omega_minus)
    c, s = radical_functions(zp.radical_sq)
    return c + sign * (zp.omega_zero / 2) * s, s, zp


def decompose_normal(p: AlgebraParams) -> NormalFactors:
    """Factor ``exp(p.K)`` as ``exp(A+ K+) A0**K0 exp(A- K-)``."""
    den, s, _ = _ordering_denominator(p, -1)
    num_plus, num_minus = p.omega_plus * s, p.omega_minus * s
    _check_denominator(den, num_plus, num_minus, what="normal-order")
    log_den = _continued_log(lambda x: _ordering_denominator(p, -1, x)[0])
    return NormalFactors(
        f_plus=num_plus / den,
        f_zero=den ** -2,
        f_minus=num_minus / den,
        ordering=Ordering.NORMAL,
        log_zero=-2 * log_den,
    )


def decompose_antinormal(p: AlgebraParams) -> NormalFactors:
    """Factor ``exp(p.K)`` as ``exp(B- K-) B0**K0 exp(B+ K+)``."""
    den, s, _ = _ordering_denominator(p, +1)
    num_plus, num_minus = p.omega_plus * s, p.omega_minus * s
    _check_denominator(den, num_plus, num_minus, what="antinormal-order")
    log_den = _continued_log(lambda x: _ordering_denominator(p, +1, x)[0])
    return NormalFactors(
        f_plus=num_plus / den,
        f_zero=den ** 2,
        f_minus=num_minus / den,
        ordering=Ordering.ANTINORMAL,
        log_zero=2 * log_den,
    )


def _compose_intermediates(a: NormalFactors, b: NormalFactors):
    shared = a.f_minus + b.f_minus
    den = 1 - b.f_zero * b.f_plus * shared
    _check_denominator(den, b.f_zero * b.f_plus * shared, exc=CompositionSingularity, what="composition")
    c_plus = b.f_zero * b.f_plus / den
    c_zero = b.f_zero / den**2
    c_minus = b.f_zero * shared / den
    return c_plus, c_zero, c_minus, den


def compose_factors(p1: AlgebraParams, p2: AlgebraParams) -> tuple[complex, complex, complex]:
    """Intermediates ``(C+, C0, C-)`` that reorder ``exp((A- + B-)K-) B0**K0 exp(B+ K+)``.

    ``A`` are the normal factors of ``p1`` and ``B`` the antinormal factors of
    ``p2``; the result satisfies
    ``exp((A-+B-)K-) B0**K0 exp(B+K+) = exp(C+K+) C0**K0 exp(C-K-)``.
    """
    a = decompose_normal(p1)
    b = decompose_antinormal(p2)
    c_plus, c_zero, c_minus, _ = _compose_intermediates(a, b)
    return c_plus, c_zero, c_minus


def _matrix_from_normal(f_plus: complex, sqrt_zero: complex, f_minus: complex) -> GroupMatrix:
    inv = 1 / sqrt_zero
    return GroupMatrix(
        [[sqrt_zero - f_plus * f_minus * inv, f_plus * inv], [-f_minus * inv, inv]]
    )


def compose_via_factors(p1: AlgebraParams, p2: AlgebraParams) -> AlgebraParams:
    """Composition through the ordered-factor route.

    The normal factors of the product are ``(A+ + A0 C+, A0 C0, C-)``; they
    are turned back into exponent parameters by inverting the ordering
    relations in closed form.
    """
    a = decompose_normal(p1)
    b = decompose_antinormal(p2)
    c_plus, _, c_minus, den = _compose_intermediates(a, b)
    sigma_plus = a.f_plus + a.f_zero * c_plus
    # sqrt(A0 C0) with C0 = B0 / den**2
    sqrt_zero = a.sqrt_zero * b.sqrt_zero / den
    return params_from_matrix(_matrix_from_normal(sigma_plus, sqrt_zero, c_minus))


def composition_residuals(p1: AlgebraParams, p2: AlgebraParams, sigma: AlgebraParams) -> np.ndarray:
    """Residuals of the three relations tying ``sigma`` to ``p1 * p2``.

    Entries: the ratio relation ``Sigma+/Sigma-``, the ``Sigma-`` relation
    ``sqrt(B0/A0)(A- + B-) = Sigma- S(beta**2)`` and the Cartan relation
    ``A0 C0 = (C(beta**2) - Sigma0 S(beta**2)/2)**-2``.  The ratio relation is
    compared in cross-multiplied form so ``Sigma- = 0`` is harmless.
    """
    a = decompose_normal(p1)
    b = decompose_antinormal(p2)
    c_plus, c_zero, c_minus, _ = _compose_intermediates(a, b)
    shared = a.f_minus + b.f_minus
    cs, ss = radical_functions(sigma.radical_sq)
    lhs_ratio_num = a.f_plus + b.f_zero * b.f_plus * (a.f_zero - a.f_plus * shared)
    lhs_ratio_den = b.f_zero * shared
    ratio = lhs_ratio_num * sigma.omega_minus - lhs_ratio_den * sigma.omega_plus
    minus = (b.sqrt_zero / a.sqrt_zero) * shared - sigma.omega_minus * ss
    cartan = a.f_zero * c_zero - (cs - sigma.omega_zero * ss / 2) ** -2
    return np.abs(np.array([ratio, minus, cartan]))


def inverse(p: AlgebraParams) -> AlgebraParams:
    return -p


def is_unitary(p: AlgebraParams, tol: float = 1e-12) -> bool:
    """True when ``p`` lies in the unitary family ``(xi, i omega, -xi*)``."""
    return (
        abs(p.omega_plus + p.omega_minus.conjugate()) <= tol
        and abs(p.omega_zero.real) <= tol
    )


def matrix_rep(p: AlgebraParams) -> GroupMatrix:
    c, s = radical_functions(p.radical_sq)
    half = p.omega_zero / 2
    return GroupMatrix(
        [[c + s * half, s * p.omega_plus], [-s * p.omega_minus, c - s * half]]
    )


def params_from_matrix(m: GroupMatrix, tol: float = 1e-12) -> AlgebraParams:
    """Principal logarithm of a unit-determinant 2x2 matrix.

    Raises :class:`BranchAmbiguity` when ``trace/2`` is real and ``<= -1``,
    i.e. when an eigenvalue lies on the negative real axis.
    """
    g = m.array
    scale = 1.0 + float(np.sum(np.abs(g) ** 2))
    if abs(m.determinant - 1) > _DET_RTOL * scale * 100:
        raise ValueError(f"determinant {m.determinant!r} is not 1")
    w = m.trace / 2
    if abs(w.imag) <= tol * (1 + abs(w)) and w.real <= -1 + tol:
        raise BranchAmbiguity(f"trace/2 = {w!r} lies on the principal-log cut")
    root = cmath.acosh(w)
    z = root * root
    _, s = radical_functions(z)
    if abs(s) <= tol:
        raise BranchAmbiguity("sinh(sqrt z)/sqrt z vanishes; logarithm not unique")
    gen = (g - w * np.eye(2)) / s
    return AlgebraParams(gen[0, 1], gen[0, 0] - gen[1, 1], -gen[1, 0])


def compose(p1: AlgebraParams, p2: AlgebraParams, validate: bool = False, tol: float = 1e-8) -> AlgebraParams:
    """``Sigma`` with ``exp(Sigma.K) = exp(p1.K) exp(p2.K)`` (principal branch).

    The 2x2 product is the authoritative route.  With ``validate=True`` the
    ordered-factor route is evaluated too and a disagreement beyond ``tol``
    raises ``ArithmeticError``; a singular factor route is skipped.
    """
    sigma = params_from_matrix(matrix_rep(p1) @ matrix_rep(p2))
    if validate:
        try:
            other = compose_via_factors(p1, p2)
        except (CompositionSingularity, DegenerateDecomposition):
            return sigma
        gap = np.max(np.abs(sigma.as_array() - other.as_array()))
        if gap > tol * (1 + sigma.norm()):
            raise ArithmeticError(f"matrix and factor routes disagree by {gap:.3e}")
    return sigma
