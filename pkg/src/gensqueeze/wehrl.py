"""Husimi functions and Wehrl entropies of the amplified two-mode field.

Husimi functions are normalised against ``d^2 alpha / pi`` per mode and
entropies are in nats.  Real coordinates are ``r = (Re a_a, Im a_a, Re a_b,
Im a_b)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Union

import numpy as np
from scipy.special import roots_hermite

from . import kernels
from .amplifier import AmplifierConfig, heisenberg_solution
from .errors import PositivityViolation, QuadratureNotConverged, RangeViolation
from .states import Coherent, Thermal, symmetric_covariance
from .su11 import radical_functions

__all__ = [
    "HusimiCoherentParams",
    "HusimiThermalParams",
    "LogQuadratic",
    "QuadratureSpec",
    "EntropyReport",
    "husimi_coherent_params",
    "husimi_thermal_params",
    "husimi_coherent",
    "husimi_marginal_coherent",
    "husimi_thermal",
    "husimi_marginal_thermal",
    "husimi_log_quadratic",
    "husimi_moments",
    "entropy_numeric",
    "entropy_closed",
    "entropy_report_numeric",
    "correlation",
]

_W1 = np.array([[1.0, 1j], [1.0, -1j]])  # (a, a+) = W (x, y)
_W = np.kron(np.eye(2), _W1)


def _hyperbolic(cfg: AmplifierConfig, t: float):
    """``cosh(phi t)`` and ``sinh(phi t)/phi``."""
    cosh, sinhc = radical_functions(cfg.rate_sq * t * t)
    return complex(cosh).real, complex(sinhc).real * t


def _gain_sq(cfg: AmplifierConfig, t: float) -> float:
    """``(|kappa|/phi)^2 sinh^2(phi t)``, the vacuum photon number."""
    _, sh = _hyperbolic(cfg, t)
    return abs(cfg.kappa) ** 2 * sh * sh


# -- closed-form Husimi functions --------------------------------------------


@dataclass(frozen=True)
class HusimiCoherentParams:
    a_zero: complex
    a_plus: complex
    gamma_map: np.ndarray  # rows give gamma_a, gamma_b on (a_a, a_a*, a_b, a_b*)
    eps_a: complex
    eps_b: complex
    zeta_a: complex
    zeta_b: complex

    def __post_init__(self):
        if not 0 < abs(self.a_zero) <= 1 + 1e-12:
            raise PositivityViolation(f"|A0| = {abs(self.a_zero)} outside (0, 1]")


def husimi_coherent_params(cfg: AmplifierConfig, state: Coherent, t: float) -> HusimiCoherentParams:
    ch, sh = _hyperbolic(cfg, t)
    d2 = cfg.delta / 2
    th_a, th_b = (cfg.omega_a + d2) * t, (cfg.omega_b + d2) * t
    gain = ch + 1j * d2 * sh
    cross = 1j * np.conj(cfg.kappa) * sh
    gmap = np.zeros((2, 4), dtype=complex)
    gmap[0, 0] = np.exp(1j * th_a) * np.conj(gain)
    gmap[0, 3] = cross * np.exp(-1j * th_b)
    gmap[1, 2] = np.exp(1j * th_b) * np.conj(gain)
    gmap[1, 1] = cross * np.exp(-1j * th_a)
    za, zb = state.zeta_a, state.zeta_b
    return HusimiCoherentParams(
        a_zero=gain**-2,
        a_plus=cross / gain,
        gamma_map=gmap,
        eps_a=(gain * za - cross * np.conj(zb)) * np.exp(-1j * th_a),
        eps_b=(gain * zb - cross * np.conj(za)) * np.exp(-1j * th_b),
        zeta_a=za,
        zeta_b=zb,
    )


def _gammas(par: HusimiCoherentParams, alpha_a, alpha_b):
    aa, ab = np.asarray(alpha_a, dtype=complex), np.asarray(alpha_b, dtype=complex)
    vec = (aa, np.conj(aa), ab, np.conj(ab))
    ga = sum(par.gamma_map[0, j] * vec[j] for j in range(4))
    gb = sum(par.gamma_map[1, j] * vec[j] for j in range(4))
    return ga, gb


def husimi_coherent(cfg: AmplifierConfig, state: Coherent, t: float, alpha_a, alpha_b):
    """Joint Husimi function for a coherent input (vectorised)."""
    par = husimi_coherent_params(cfg, state, t)
    ga, gb = _gammas(par, alpha_a, alpha_b)
    da, db = ga - par.zeta_a, gb - par.zeta_b
    expo = -(np.abs(da) ** 2 + np.abs(db) ** 2) + 2 * np.real(np.conj(par.a_plus) * da * db)
    return abs(par.a_zero) * np.exp(expo)


def husimi_marginal_coherent(cfg: AmplifierConfig, state: Coherent, t: float, mode: str, alpha):
    par = husimi_coherent_params(cfg, state, t)
    eps = _mode_pick(mode, par.eps_a, par.eps_b)
    w = abs(par.a_zero)
    return w * np.exp(-w * np.abs(np.asarray(alpha, dtype=complex) - eps) ** 2)


def _mode_pick(mode: str, a, b):
    mode = mode.upper()
    if mode == "A":
        return a
    if mode == "B":
        return b
    raise ValueError("mode must be 'A' or 'B'")


@dataclass(frozen=True)
class HusimiThermalParams:
    ell_a: float
    ell_b: float
    ell_ab: complex
    g: Callable[[float, float], float]

    def __post_init__(self):
        if not (self.ell_a > 0 and self.ell_b > 0 and self.ell_a * self.ell_b - abs(self.ell_ab) ** 2 > 0):
            raise PositivityViolation("thermal Husimi quadratic form is not positive definite")


def husimi_thermal_params(cfg: AmplifierConfig, state: Thermal, t: float) -> HusimiThermalParams:
    ch, sh = _hyperbolic(cfg, t)
    na, nb = state.nbar_a, state.nbar_b
    gain_sq = _gain_sq(cfg, t)

    def g(x: float, y: float) -> float:
        return (na * x + 1) * (nb * y + 1) + (na + nb + 1) * gain_sq

    g11 = g(1, 1)
    ell_ab = (
        1j * cfg.kappa * sh * (ch - 1j * cfg.delta / 2 * sh) * (na + nb + 1) / g11 * np.exp(1j * cfg.eta * t)
    )
    return HusimiThermalParams(ell_a=g(1, 0) / g11, ell_b=g(0, 1) / g11, ell_ab=complex(ell_ab), g=g)


def husimi_thermal(cfg: AmplifierConfig, state: Thermal, t: float, alpha_a, alpha_b):
    par = husimi_thermal_params(cfg, state, t)
    aa, ab = np.asarray(alpha_a, dtype=complex), np.asarray(alpha_b, dtype=complex)
    expo = -(par.ell_b * np.abs(aa) ** 2 + par.ell_a * np.abs(ab) ** 2) + 2 * np.real(par.ell_ab * aa * ab)
    return np.exp(expo) / par.g(1, 1)


def husimi_marginal_thermal(cfg: AmplifierConfig, state: Thermal, t: float, mode: str, alpha):
    par = husimi_thermal_params(cfg, state, t)
    width = _mode_pick(mode, par.g(1, 0), par.g(0, 1))
    if not width > 0:
        raise PositivityViolation("marginal width must be positive")
    return np.exp(-np.abs(np.asarray(alpha, dtype=complex)) ** 2 / width) / width


# -- log-quadratic forms -----------------------------------------------------


@dataclass(frozen=True)
class LogQuadratic:
    """``ln h(r) = log_norm - (r - center).P.(r - center)`` in real coordinates."""

    log_norm: float
    center: np.ndarray
    precision: np.ndarray

    @property
    def dims(self) -> int:
        return self.center.size

    def __call__(self, r: np.ndarray) -> np.ndarray:
        d = np.atleast_2d(r) - self.center
        return np.exp(self.log_norm - np.einsum("ki,ij,kj->k", d, self.precision, d))


def _pair_form(diag_a: float, diag_b: float, cross: complex) -> np.ndarray:
    """Matrix ``K`` with ``v.K.v = da|g_a|^2 + db|g_b|^2 - 2 Re(cross g_a g_b)``."""
    cr, ci = cross.real, cross.imag
    nb = np.array([[cr, -ci], [-ci, -cr]])
    k = np.diag([diag_a, diag_a, diag_b, diag_b]).astype(float)
    k[:2, 2:] -= nb
    k[2:, :2] -= nb.T
    return k


def _real_rows(gmap: np.ndarray) -> np.ndarray:
    rows = gmap @ _W
    return np.array([rows[0].real, rows[0].imag, rows[1].real, rows[1].imag])


def husimi_log_quadratic(cfg: AmplifierConfig, state, t: float, mode: str | None = None) -> LogQuadratic:
    """Closed-form Husimi function (joint or marginal) as a :class:`LogQuadratic`."""
    if isinstance(state, Coherent):
        par = husimi_coherent_params(cfg, state, t)
        w = abs(par.a_zero)
        if mode is not None:
            eps = _mode_pick(mode, par.eps_a, par.eps_b)
            return LogQuadratic(math.log(w), np.array([eps.real, eps.imag]), w * np.eye(2))
        m = _real_rows(par.gamma_map)
        k = _pair_form(1.0, 1.0, np.conj(par.a_plus))
        shift = np.array([par.zeta_a.real, par.zeta_a.imag, par.zeta_b.real, par.zeta_b.imag])
        return LogQuadratic(math.log(w), np.linalg.solve(m, shift), m.T @ k @ m)
    if isinstance(state, Thermal):
        par = husimi_thermal_params(cfg, state, t)
        if mode is not None:
            width = _mode_pick(mode, par.g(1, 0), par.g(0, 1))
            return LogQuadratic(-math.log(width), np.zeros(2), np.eye(2) / width)
        k = _pair_form(par.ell_b, par.ell_a, par.ell_ab)
        return LogQuadratic(-math.log(par.g(1, 1)), np.zeros(4), k)
    raise TypeError("closed forms exist for coherent and thermal inputs only")


def husimi_moments(cfg: AmplifierConfig, state, t: float, mode: str | None = None):
    """Mean and covariance of the Husimi distribution from ``T`` and the input.

    Independent of the closed forms: the symmetrised covariance is carried
    by the real Bogoliubov map and a vacuum quarter is added per quadrature.
    """
    T = heisenberg_solution(cfg, t).matrix
    real_map = np.real(np.linalg.solve(_W, T @ _W))
    mean0, cov0 = symmetric_covariance(state)
    mean = real_map @ mean0
    cov = real_map @ cov0 @ real_map.T + 0.25 * np.eye(4)
    if mode is None:
        return mean, cov
    sl = slice(0, 2) if _mode_pick(mode, "A", "B") == "A" else slice(2, 4)
    return mean[sl], cov[sl, sl]


# -- entropies ---------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureSpec:
    """Gauss-Hermite tensor rule after whitening by ``(mean, cov)``.

    The result at ``order`` is certified against ``order // 2``.
    """

    mean: np.ndarray
    cov: np.ndarray
    order: int = 40
    tol: float = 1e-6
    check: bool = True


@lru_cache(maxsize=None)
def _gh_rule(order: int):
    x, w = roots_hermite(order)
    return x, np.log(w)


def _entropy_at(h, spec: QuadratureSpec, order: int) -> float:
    dims = spec.mean.size
    chol = np.linalg.cholesky(spec.cov)
    scale = math.log(2.0) * dims / 2 + math.log(abs(np.linalg.det(chol))) - (dims // 2) * math.log(math.pi)
    nodes, logw = _gh_rule(order)
    if isinstance(h, LogQuadratic):
        lin = math.sqrt(2.0) * chol
        d = spec.mean - h.center
        q = lin.T @ h.precision @ lin
        b = 2 * lin.T @ h.precision @ d
        l0 = h.log_norm - d @ h.precision @ d
        return math.exp(scale) * kernels.gh_log_quadratic(nodes, logw, q, b, l0)
    grids = np.meshgrid(*([nodes] * dims), indexing="ij")
    u = np.stack([g.ravel() for g in grids], axis=1)
    lw = sum(np.meshgrid(*([logw] * dims), indexing="ij")).ravel()
    r = spec.mean + math.sqrt(2.0) * u @ chol.T
    vals = np.asarray(h(r), dtype=float)
    if np.any(vals < 0):
        raise PositivityViolation("Husimi evaluator returned negative values")
    with np.errstate(divide="ignore", invalid="ignore"):
        integrand = np.where(vals > 0, -vals * np.log(vals), 0.0)
    return math.exp(scale) * math.fsum(integrand * np.exp(lw + np.einsum("ki,ki->k", u, u)))


def entropy_numeric(h: Union[LogQuadratic, Callable], dims: int, quad: QuadratureSpec) -> float:
    """``-int h ln h d^{dims} r / pi^{dims/2}`` by whitened Gauss-Hermite quadrature.

    ``h`` is a :class:`LogQuadratic` (compiled tensor kernel) or a callable
    taking an ``(n, dims)`` array of real coordinates.  Raises
    :class:`QuadratureNotConverged` when halving the order moves the result
    by more than ``quad.tol``.
    """
    if dims not in (2, 4) or quad.mean.size != dims:
        raise ValueError("dims must be 2 or 4 and match the whitening mean")
    value = _entropy_at(h, quad, quad.order)
    if quad.check:
        coarse = _entropy_at(h, quad, quad.order // 2)
        if abs(value - coarse) > quad.tol:
            raise QuadratureNotConverged(f"order {quad.order // 2} -> {quad.order} changes entropy by {abs(value - coarse):.2e}")
    return value


@dataclass(frozen=True)
class EntropyReport:
    joint: float
    partial_a: float
    partial_b: float
    cond_a: float
    cond_b: float
    correlation: float

    @classmethod
    def from_entropies(cls, joint: float, partial_a: float, partial_b: float) -> "EntropyReport":
        return cls(
            joint=joint,
            partial_a=partial_a,
            partial_b=partial_b,
            cond_a=joint - partial_a,
            cond_b=joint - partial_b,
            correlation=correlation(joint, partial_a, partial_b),
        )

    def as_dict(self) -> dict[str, float]:
        return {k: getattr(self, k) for k in ("joint", "partial_a", "partial_b", "cond_a", "cond_b", "correlation")}


def correlation(joint: float, partial_a: float, partial_b: float, tol: float = 1e-9) -> float:
    """``2 (1 - joint / (partial_a + partial_b))``.

    Values within ``tol`` of ``[0, 1]`` are clamped; anything further out
    raises :class:`RangeViolation`.
    """
    total = partial_a + partial_b
    if not total > 0:
        raise ValueError("partial entropies must have a positive sum")
    c = 2 * (1 - joint / total)
    if c < -tol or c > 1 + tol:
        raise RangeViolation(f"correlation {c!r} outside [0, 1]")
    return min(max(c, 0.0), 1.0)


def entropy_closed(cfg: AmplifierConfig, state, t: float) -> EntropyReport:
    if isinstance(state, Coherent):
        x = math.log1p(_gain_sq(cfg, t))
        return EntropyReport.from_entropies(2 + x, 1 + x, 1 + x)
    if isinstance(state, Thermal):
        g = husimi_thermal_params(cfg, state, t).g
        return EntropyReport.from_entropies(2 + math.log(g(1, 1)), 1 + math.log(g(1, 0)), 1 + math.log(g(0, 1)))
    raise TypeError("closed forms exist for coherent and thermal inputs only")


def entropy_report_numeric(cfg: AmplifierConfig, state, t: float, order: int = 40, tol: float = 1e-6) -> EntropyReport:
    """Quadrature of the closed-form Husimi functions, whitened by :func:`husimi_moments`."""
    values = []
    for mode, dims in ((None, 4), ("A", 2), ("B", 2)):
        mean, cov = husimi_moments(cfg, state, t, mode)
        h = husimi_log_quadratic(cfg, state, t, mode)
        values.append(entropy_numeric(h, dims, QuadratureSpec(mean, cov, order, tol)))
    return EntropyReport.from_entropies(*values)
