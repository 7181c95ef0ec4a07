"""Detuned parametric amplifier.

Heisenberg solution as a 4x4 c-number matrix acting on the operator column
``O = (a, a+, b, b+)``, so that ``U+ O U = T O``.  Row layout::

    [ mu_a   nu_a   chi_a  eta_a ]
    [ nu_a*  mu_a*  eta_a* chi_a*]
    [ mu_b   nu_b   chi_b  eta_b ]
    [ nu_b*  mu_b*  eta_b* chi_b*]

Inside this module ``eta_a``/``eta_b`` are matrix elements; the pump
frequency is ``AmplifierConfig.eta``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import CutoffTooSmall, SingularTMatrix
from .fock import FockRep, OperatorMatrix, RepKind, evolve, exponentiate_params, moment_value
from .states import InitialState, Number, second_moments
from .su11 import UnitaryParams, radical_functions

__all__ = [
    "AmplifierConfig",
    "DetuningWarning",
    "TMatrix",
    "EvolutionFactors",
    "heisenberg_solution",
    "check_constraints",
    "invert",
    "factor_evolution",
    "fock_factorized",
    "compare_up_to_phase",
    "mean_photon",
    "intensity_correlation",
    "random_tmatrix",
    "SYMPLECTIC_E",
]

SYMPLECTIC_E = np.diag([1.0, -1.0, 1.0, -1.0])


class DetuningWarning(UserWarning):
    """Detuning is not small compared with the carrier frequencies."""


@dataclass(frozen=True)
class AmplifierConfig:
    omega_a: float
    omega_b: float
    kappa: complex
    delta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "omega_a", float(self.omega_a))
        object.__setattr__(self, "omega_b", float(self.omega_b))
        object.__setattr__(self, "kappa", complex(self.kappa))
        object.__setattr__(self, "delta", float(self.delta))
        if not (self.omega_a > 0 and self.omega_b > 0):
            raise ValueError("omega_a and omega_b must be positive")
        vals = (self.omega_a, self.omega_b, self.kappa.real, self.kappa.imag, self.delta)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("amplifier parameters must be finite")
        if abs(self.delta / (self.omega_a + self.omega_b)) >= 0.1:
            warnings.warn(
                f"|delta/(omega_a+omega_b)| = {abs(self.delta / (self.omega_a + self.omega_b)):.3g} >= 0.1",
                DetuningWarning,
                stacklevel=2,
            )

    @property
    def eta(self) -> float:
        """Pump frequency."""
        return self.omega_a + self.omega_b + self.delta

    @property
    def rate_sq(self) -> float:
        """Squared gain rate ``|kappa|^2 - delta^2/4``; negative when over-detuned."""
        return abs(self.kappa) ** 2 - self.delta**2 / 4


_COEFF_SLOTS = {
    "mu_a": (0, 0), "nu_a": (0, 1), "chi_a": (0, 2), "eta_a": (0, 3),
    "mu_b": (2, 0), "nu_b": (2, 1), "chi_b": (2, 2), "eta_b": (2, 3),
}


@dataclass(frozen=True)
class TMatrix:
    """Bogoliubov matrix ``T`` with ``U+ O U = T O``."""

    matrix: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError("TMatrix must be 4x4")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_coefficients(cls, mu_a=0, nu_a=0, chi_a=0, eta_a=0, mu_b=0, nu_b=0, chi_b=0, eta_b=0, time=0.0):
        c = np.conj
        m = np.array(
            [
                [mu_a, nu_a, chi_a, eta_a],
                [c(nu_a), c(mu_a), c(eta_a), c(chi_a)],
                [mu_b, nu_b, chi_b, eta_b],
                [c(nu_b), c(mu_b), c(eta_b), c(chi_b)],
            ],
            dtype=complex,
        )
        return cls(m, time)

    @classmethod
    def identity(cls) -> "TMatrix":
        return cls(np.eye(4))

    def coefficients(self) -> dict[str, complex]:
        return {k: complex(self.matrix[i, j]) for k, (i, j) in _COEFF_SLOTS.items()}

    def __getattr__(self, name):
        if name in _COEFF_SLOTS:
            i, j = _COEFF_SLOTS[name]
            return complex(self.matrix[i, j])
        raise AttributeError(name)

    def __matmul__(self, other: "TMatrix") -> "TMatrix":
        return TMatrix(self.matrix @ other.matrix, self.time + other.time)


def heisenberg_solution(cfg: AmplifierConfig, t: float) -> TMatrix:
    """Exact ``T(t)`` for the detuned amplifier.

    The hyperbolic factors enter as ``cosh(phi t)`` and ``sinh(phi t)/phi =
    t S(phi^2 t^2)``, so the over-detuned regime needs no separate branch.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    cosh, sinhc = radical_functions(cfg.rate_sq * t * t)
    gain = cosh + 0.5j * cfg.delta * t * sinhc
    cross = -1j * np.conj(cfg.kappa) * t * sinhc
    ph_a = np.exp(-1j * (cfg.omega_a + cfg.delta / 2) * t)
    ph_b = np.exp(-1j * (cfg.omega_b + cfg.delta / 2) * t)
    return TMatrix.from_coefficients(
        mu_a=ph_a * gain, eta_a=ph_a * cross, chi_b=ph_b * gain, nu_b=ph_b * cross, time=t
    )


def check_constraints(T: TMatrix) -> np.ndarray:
    """Absolute residuals of the four commutator identities.

    ``[a,a+] = 1``, ``[b,b+] = 1``, ``[a,b] = 0`` and ``[a,b+] = 0`` for the
    evolved operators.
    """
    c = T.coefficients()
    sq = lambda z: abs(z) ** 2  # noqa: E731
    r1 = sq(c["mu_a"]) - sq(c["nu_a"]) + sq(c["chi_a"]) - sq(c["eta_a"]) - 1
    r2 = sq(c["mu_b"]) - sq(c["nu_b"]) + sq(c["chi_b"]) - sq(c["eta_b"]) - 1
    r3 = c["mu_a"] * c["nu_b"] - c["nu_a"] * c["mu_b"] + c["chi_a"] * c["eta_b"] - c["eta_a"] * c["chi_b"]
    r4 = (
        c["mu_a"] * np.conj(c["mu_b"])
        - c["nu_a"] * np.conj(c["nu_b"])
        + c["chi_a"] * np.conj(c["chi_b"])
        - c["eta_a"] * np.conj(c["eta_b"])
    )
    return np.abs(np.array([r1, r2, r3, r4]))


def invert(T: TMatrix, tol: float = 1e-10) -> TMatrix:
    """Closed-form inverse ``E T+ E`` with ``E = diag(1, -1, 1, -1)``.

    The commutator identities are exactly the statement ``T E T+ = E``.  The
    result is checked against a direct LU inverse; disagreement beyond
    ``tol`` (relative to the condition number) raises
    :class:`SingularTMatrix`.
    """
    m = T.matrix
    inv = SYMPLECTIC_E @ m.conj().T @ SYMPLECTIC_E
    try:
        direct = np.linalg.inv(m)
    except np.linalg.LinAlgError as exc:
        raise SingularTMatrix("T is singular") from exc
    scale = np.linalg.norm(m, 2) * np.linalg.norm(inv, 2)
    err = np.linalg.norm(inv - direct, 2) / np.linalg.norm(direct, 2)
    if not err <= tol * max(1.0, scale):
        raise SingularTMatrix(f"closed-form inverse off by {err:.2e}; constraints violated?")
    return TMatrix(inv, -T.time)


@dataclass(frozen=True)
class EvolutionFactors:
    """``U(t) = R(theta_a, theta_b) T2(xi, omega)``.

    ``R = exp(-i (theta_a n_a + theta_b n_b))`` and ``two_mode`` carries the
    ``(xi, omega)`` of the generalized two-mode squeezer.
    """

    theta_a: float
    theta_b: float
    two_mode: UnitaryParams
    time: float = 0.0

    def tmatrix(self) -> TMatrix:
        """Bogoliubov matrix of ``R T2``."""
        xi, om = self.two_mode.xi, self.two_mode.omega
        cosh, sinhc = radical_functions(abs(xi) ** 2 - om**2 / 4)
        gain = cosh + 0.5j * om * sinhc
        cross = xi * sinhc
        ph_a, ph_b = np.exp(-1j * self.theta_a), np.exp(-1j * self.theta_b)
        return TMatrix.from_coefficients(
            mu_a=ph_a * gain, eta_a=ph_a * cross, chi_b=ph_b * gain, nu_b=ph_b * cross, time=self.time
        )


def factor_evolution(cfg: AmplifierConfig, t: float) -> EvolutionFactors:
    if t < 0:
        raise ValueError("t must be >= 0")
    return EvolutionFactors(
        theta_a=(cfg.omega_a + cfg.delta / 2) * t,
        theta_b=(cfg.omega_b + cfg.delta / 2) * t,
        two_mode=UnitaryParams(-1j * np.conj(cfg.kappa) * t, cfg.delta * t),
        time=t,
    )


def fock_factorized(factors: EvolutionFactors, rep: FockRep, interior: int | None = None) -> OperatorMatrix:
    """Truncated matrix of ``R T2``."""
    if rep.kind is not RepKind.TWO_MODE:
        raise ValueError("two-mode representation required")
    n = rep.photon_numbers()
    rot = np.exp(-1j * (factors.theta_a * n[:, 0] + factors.theta_b * n[:, 1]))
    t2 = exponentiate_params(factors.two_mode.to_algebra(), rep, interior)
    return OperatorMatrix(rot[:, None] * t2.matrix, rep, t2.interior_block)


def compare_up_to_phase(u: np.ndarray, v: np.ndarray) -> tuple[float, float]:
    """Best global phase ``theta`` with ``u ~ e^{i theta} v`` and the residual.

    Returns ``(max|u - e^{i theta} v|, theta)``.
    """
    overlap = np.vdot(v, u)
    theta = float(np.angle(overlap)) if abs(overlap) > 0 else 0.0
    return float(np.max(np.abs(u - np.exp(1j * theta) * v))), theta


def mean_photon(cfg: AmplifierConfig, t: float, state: InitialState) -> tuple[float, float]:
    """``(<n_a(t)>, <n_b(t)>)`` from ``T`` and the initial second moments."""
    T = heisenberg_solution(cfg, t).matrix
    evolved = T @ second_moments(state) @ T.T
    return float(evolved[1, 0].real), float(evolved[3, 2].real)


def intensity_correlation(
    cfg: AmplifierConfig, t: float, state: Number, cutoff: int = 30, leak_tol: float = 1e-10
) -> float:
    """``<n_a(t) n_b(t)>`` for a number-state input, from the Fock oracle.

    Raises :class:`CutoffTooSmall` when the evolved state touches the
    truncation edge.
    """
    if not isinstance(state, Number):
        raise TypeError("intensity correlation is defined here for number-state inputs")
    ms = evolve(cfg, t, state, FockRep(RepKind.TWO_MODE, cutoff), leak_tol=leak_tol)
    # a+a b+b as the normally ordered moment (1,1,1,1)
    return float(moment_value(ms, 1, 1, 1, 1).real)


def random_tmatrix(rng: np.random.Generator, scale: float = 1.0) -> TMatrix:
    """Random matrix obeying the commutator identities.

    Draws a real symplectic map on ``(x_a, y_a, x_b, y_b)`` and moves it to
    the ``(a, a+, b, b+)`` basis.
    """
    j2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
    omega = np.kron(np.eye(2), j2)
    h = rng.normal(size=(4, 4)) * scale
    sym = scipy.linalg.expm(omega @ (h + h.T) / 2)
    w = np.kron(np.eye(2), np.array([[1, 1j], [1, -1j]]))
    return TMatrix(w @ sym @ np.linalg.inv(w))
