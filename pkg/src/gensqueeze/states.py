"""Two-mode initial preparations at t = 0."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = ["Coherent", "Number", "Thermal", "InitialState", "second_moments", "symmetric_covariance"]


@dataclass(frozen=True)
class Coherent:
    zeta_a: complex = 0j
    zeta_b: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "zeta_a", complex(self.zeta_a))
        object.__setattr__(self, "zeta_b", complex(self.zeta_b))


@dataclass(frozen=True)
class Number:
    n_a: int = 0
    n_b: int = 0

    def __post_init__(self):
        for name in ("n_a", "n_b"):
            value = getattr(self, name)
            if int(value) != value or value < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {value}")
            object.__setattr__(self, name, int(value))


@dataclass(frozen=True)
class Thermal:
    nbar_a: float = 0.0
    nbar_b: float = 0.0

    def __post_init__(self):
        for name in ("nbar_a", "nbar_b"):
            value = float(getattr(self, name))
            if not value >= 0:
                raise ValueError(f"{name} must be >= 0, got {value}")
            object.__setattr__(self, name, value)


InitialState = Union[Coherent, Number, Thermal]


def _means(state: InitialState) -> np.ndarray:
    """<O> for O = (a, a+, b, b+)."""
    if isinstance(state, Coherent):
        za, zb = state.zeta_a, state.zeta_b
        return np.array([za, za.conjugate(), zb, zb.conjugate()])
    return np.zeros(4, dtype=complex)


def _occupations(state: InitialState) -> tuple[float, float]:
    if isinstance(state, Number):
        return float(state.n_a), float(state.n_b)
    if isinstance(state, Thermal):
        return state.nbar_a, state.nbar_b
    return 0.0, 0.0


def second_moments(state: InitialState) -> np.ndarray:
    """Matrix ``M[i, j] = <O_i O_j>`` for O = (a, a+, b, b+) at t = 0.

    All three families are product states that are diagonal in the number
    basis up to a displacement, so the only non-trivial moments are
    ``<a a+> = n + 1`` and ``<a+ a> = n`` on top of ``<O_i><O_j>``.
    """
    m = _means(state)
    out = np.outer(m, m).astype(complex)
    na, nb = _occupations(state)
    for offset, occ in ((0, na), (2, nb)):
        out[offset, offset + 1] += occ + 1
        out[offset + 1, offset] += occ
    return out


def symmetric_covariance(state: InitialState) -> tuple[np.ndarray, np.ndarray]:
    """Real quadrature mean and symmetrised covariance at t = 0.

    Quadratures are ``x = (a + a+)/2`` and ``y = (a - a+)/(2i)`` per mode,
    ordered ``(x_a, y_a, x_b, y_b)``; the vacuum has variance 1/4.
    """
    m = _means(state)
    mean = np.array([m[0].real, m[0].imag, m[2].real, m[2].imag])
    na, nb = _occupations(state)
    cov = np.diag([0.25 * (1 + 2 * na)] * 2 + [0.25 * (1 + 2 * nb)] * 2)
    return mean, cov
