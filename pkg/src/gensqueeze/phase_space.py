"""Characteristic and Wigner functions of the amplified two-mode field.

Phase-space points are conjugate-paired 4-vectors ``(c_a, c_a*, c_b, c_b*)``
matching the operator column ``(a, a+, b, b+)``.  Time evolution acts by the
pullback ``Z = T^{-1} X``: ``W(X; t) = W(Z; 0)`` and ``C(G; t) = C(Y; 0)``.

Normalisations: Wigner functions integrate to one against
``d^2 alpha_a d^2 alpha_b / pi^2``; ``C(G) = Tr[D(xi_a) D(xi_b) rho]`` with
``D(xi) = exp(xi a+ - xi* a)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .amplifier import SYMPLECTIC_E, AmplifierConfig, TMatrix, heisenberg_solution, invert
from .errors import DifferentiationUnstable
from .states import Coherent, InitialState, Number, Thermal

__all__ = [
    "Role",
    "PhasePoint",
    "SymplecticConvention",
    "Coherent",
    "Number",
    "Thermal",
    "InitialState",
    "laguerre",
    "characteristic_t0",
    "characteristic_t",
    "wigner_t0",
    "wigner_t",
    "pullback",
    "pushforward",
    "moment",
    "MAX_MOMENT_ORDER",
]

MAX_MOMENT_ORDER = 6


class Role(enum.Enum):
    X = "X"  # Wigner argument at time t
    Z = "Z"  # Wigner argument pulled back to t = 0
    G = "G"  # characteristic argument at time t
    Y = "Y"  # characteristic argument pulled back to t = 0


_PULLED = {Role.X: Role.Z, Role.G: Role.Y}
_PUSHED = {v: k for k, v in _PULLED.items()}


@dataclass(frozen=True)
class PhasePoint:
    c_a: complex
    c_b: complex
    role: Role = Role.X

    def __post_init__(self):
        object.__setattr__(self, "c_a", complex(self.c_a))
        object.__setattr__(self, "c_b", complex(self.c_b))
        object.__setattr__(self, "role", Role(self.role))

    def vector(self) -> np.ndarray:
        return np.array([self.c_a, self.c_a.conjugate(), self.c_b, self.c_b.conjugate()])

    @classmethod
    def from_vector(cls, v, role: Role) -> "PhasePoint":
        v = np.asarray(v)
        if not (np.isclose(v[1], np.conj(v[0]), rtol=1e-9, atol=1e-12) and np.isclose(v[3], np.conj(v[2]), rtol=1e-9, atol=1e-12)):
            raise ValueError("vector is not conjugate-paired")
        return cls(v[0], v[2], role)


class SymplecticConvention:
    """Sign matrix ``E = I (x) S`` with ``S = diag(1, -1)``.

    ``D(G) = exp(-G+ E O)`` is the two-mode displacement
    ``exp(xi_a a+ - xi_a* a) exp(xi_b b+ - xi_b* b)``.
    """

    I2 = np.eye(2)
    S2 = np.diag([1.0, -1.0])
    E = SYMPLECTIC_E


def _require(point: PhasePoint, *roles: Role) -> None:
    if point.role not in roles:
        raise ValueError(f"expected role in {[r.value for r in roles]}, got {point.role.value}")


def laguerre(n: int, x):
    """``L_n(x)`` by the three-term recurrence (scalar or array ``x``)."""
    if n < 0 or int(n) != n:
        raise ValueError("n must be a non-negative integer")
    x = np.asarray(x, dtype=float)
    prev, cur = np.ones_like(x), 1.0 - x
    if n == 0:
        return prev if prev.ndim else float(prev)
    for k in range(1, int(n)):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur if np.ndim(cur) else float(cur)


# -- values at t = 0 (vectorised over beta arrays) --------------------------


def _char0(state: InitialState, beta_a, beta_b):
    ba, bb = np.asarray(beta_a, dtype=complex), np.asarray(beta_b, dtype=complex)
    sa, sb = np.abs(ba) ** 2, np.abs(bb) ** 2
    if isinstance(state, Coherent):
        phase = 2j * ((ba * np.conj(state.zeta_a)).imag + (bb * np.conj(state.zeta_b)).imag)
        return np.exp(-0.5 * (sa + sb) + phase)
    if isinstance(state, Number):
        return np.exp(-0.5 * (sa + sb)) * laguerre(state.n_a, sa) * laguerre(state.n_b, sb) + 0j
    if isinstance(state, Thermal):
        return np.exp(-0.5 * ((1 + 2 * state.nbar_a) * sa + (1 + 2 * state.nbar_b) * sb)) + 0j
    raise TypeError(f"unknown initial state {state!r}")


def _wigner0(state: InitialState, gamma_a, gamma_b):
    ga, gb = np.asarray(gamma_a, dtype=complex), np.asarray(gamma_b, dtype=complex)
    if isinstance(state, Coherent):
        return 4 * np.exp(-2 * (np.abs(ga - state.zeta_a) ** 2 + np.abs(gb - state.zeta_b) ** 2))
    if isinstance(state, Number):
        sa, sb = np.abs(ga) ** 2, np.abs(gb) ** 2
        sign = (-1) ** (state.n_a + state.n_b)
        return 4 * sign * np.exp(-2 * (sa + sb)) * laguerre(state.n_a, 4 * sa) * laguerre(state.n_b, 4 * sb)
    if isinstance(state, Thermal):
        wa, wb = 1 + 2 * state.nbar_a, 1 + 2 * state.nbar_b
        return 4 / (wa * wb) * np.exp(-2 * (np.abs(ga) ** 2 / wa + np.abs(gb) ** 2 / wb))
    raise TypeError(f"unknown initial state {state!r}")


def characteristic_t0(state: InitialState, y: PhasePoint) -> complex:
    _require(y, Role.Y)
    return complex(_char0(state, y.c_a, y.c_b))


def wigner_t0(state: InitialState, z: PhasePoint) -> float:
    _require(z, Role.Z)
    return float(np.real(_wigner0(state, z.c_a, z.c_b)))


# -- propagation -------------------------------------------------------------


def pullback(T: TMatrix, x: PhasePoint) -> PhasePoint:
    """``Z = T^{-1} X`` (or ``Y = T^{-1} G``)."""
    _require(x, Role.X, Role.G)
    z = invert(T).matrix @ x.vector()
    return PhasePoint(z[0], z[2], _PULLED[x.role])


def pushforward(T: TMatrix, z: PhasePoint) -> PhasePoint:
    """``X = T Z`` (or ``G = T Y``)."""
    _require(z, Role.Z, Role.Y)
    x = T.matrix @ z.vector()
    return PhasePoint(x[0], x[2], _PUSHED[z.role])


def _pulled_arrays(T: TMatrix, ca, cb):
    inv = invert(T).matrix
    ca, cb = np.asarray(ca, dtype=complex), np.asarray(cb, dtype=complex)
    vec = (ca, np.conj(ca), cb, np.conj(cb))
    za = sum(inv[0, j] * vec[j] for j in range(4))
    zb = sum(inv[2, j] * vec[j] for j in range(4))
    return za, zb


def wigner_t(state: InitialState, cfg: AmplifierConfig, t: float, x: PhasePoint) -> float:
    _require(x, Role.X)
    return wigner_t0(state, pullback(heisenberg_solution(cfg, t), x))


def characteristic_t(state: InitialState, cfg: AmplifierConfig, t: float, g: PhasePoint) -> complex:
    _require(g, Role.G)
    return characteristic_t0(state, pullback(heisenberg_solution(cfg, t), g))


def wigner_grid(state: InitialState, cfg: AmplifierConfig, t: float, alpha_a, alpha_b) -> np.ndarray:
    """Vectorised :func:`wigner_t` over broadcastable complex arrays."""
    za, zb = _pulled_arrays(heisenberg_solution(cfg, t), alpha_a, alpha_b)
    return np.real(_wigner0(state, za, zb))


__all__.append("wigner_grid")


# -- normally ordered moments ------------------------------------------------


@lru_cache(maxsize=None)
def _stencil(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Central second-order-accurate stencil for ``d^order/dx^order``."""
    half = (order + 1) // 2 if order else 0
    offs = np.arange(-half, half + 1, dtype=float)
    if order == 0:
        return np.array([0.0]), np.array([1.0])
    vander = np.array([offs**k / math.factorial(k) for k in range(offs.size)])
    rhs = np.zeros(offs.size)
    rhs[order] = 1.0
    weights = np.linalg.solve(vander, rhs)
    keep = np.abs(weights) > 1e-14
    return offs[keep], weights[keep]


def _wirtinger_to_real(p: int, q: int) -> dict[tuple[int, int], complex]:
    """``d_xi^p d_xi*^q`` as a combination of ``d_x^i d_y^j``.

    ``d_xi = (d_x - i d_y)/2`` and ``d_xi* = (d_x + i d_y)/2``.
    """
    out: dict[tuple[int, int], complex] = {}
    for j in range(p + 1):
        for l in range(q + 1):
            coeff = math.comb(p, j) * (-1j) ** (p - j) * math.comb(q, l) * (1j) ** (q - l) / 2 ** (p + q)
            key = (j + l, p + q - j - l)
            out[key] = out.get(key, 0) + coeff
    return {k: v for k, v in out.items() if abs(v) > 0}


def _real_partial(f, orders: tuple[int, int, int, int], h: float) -> complex:
    """Tensor-product central difference of a function of four real variables."""
    axes = [_stencil(o) for o in orders]
    grids = np.meshgrid(*[a[0] for a in axes], indexing="ij")
    wts = np.ones(grids[0].shape)
    for k, (_, w) in enumerate(axes):
        shape = [1, 1, 1, 1]
        shape[k] = w.size
        wts = wts * w.reshape(shape)
    vals = f(*(g * h for g in grids))
    return complex(np.sum(wts * vals)) / h ** sum(orders)


def moment(
    state: InitialState,
    cfg: AmplifierConfig,
    t: float,
    p: int,
    q: int,
    r: int,
    s: int,
    h: float = 1e-2,
    rtol: float = 1e-4,
) -> complex:
    """``<a+^p a^q b+^r b^s>`` at time ``t`` from the characteristic function.

    Applies ``(-1)^(q+s) d_xa^p d_xa*^q d_xb^r d_xb*^s`` to
    ``exp((|xa|^2 + |xb|^2)/2) C(G; t)`` at the origin.  Derivatives are
    taken in real coordinates with central differences at steps ``4h, 2h, h``
    and two Richardson sweeps.  Raises :class:`DifferentiationUnstable`
    when the last two Richardson estimates differ by more than ``rtol``
    (relative, with unit floor).
    """
    orders = (p, q, r, s)
    if any(int(o) != o or o < 0 for o in orders):
        raise ValueError("moment orders must be non-negative integers")
    if sum(orders) > MAX_MOMENT_ORDER:
        raise ValueError(f"total order is capped at {MAX_MOMENT_ORDER}")
    if sum(orders) == 0:
        return 1.0 + 0j
    T = heisenberg_solution(cfg, t)

    def f(xa, ya, xb, yb):
        ga, gb = xa + 1j * ya, xb + 1j * yb
        ba, bb = _pulled_arrays(T, ga, gb)
        return np.exp(0.5 * (np.abs(ga) ** 2 + np.abs(gb) ** 2)) * _char0(state, ba, bb)

    terms_a = _wirtinger_to_real(p, q)
    terms_b = _wirtinger_to_real(r, s)

    def estimate(step):
        total = 0j
        for (ia, ja), ca in terms_a.items():
            for (ib, jb), cb in terms_b.items():
                total += ca * cb * _real_partial(f, (ia, ja, ib, jb), step)
        return total

    d4, d2, d1 = (estimate(k * h) for k in (4, 2, 1))
    r1, r2 = (4 * d2 - d4) / 3, (4 * d1 - d2) / 3
    best = (16 * r2 - r1) / 15
    if abs(best - r2) > rtol * max(1.0, abs(best)):
        raise DifferentiationUnstable(f"Richardson levels disagree: {r2} vs {best}")
    return (-1) ** (q + s) * best
