"""Pure numpy versions of the compiled kernels."""
from __future__ import annotations

import math

import numpy as np


def _pair_apply(w: np.ndarray, y: np.ndarray, c: complex) -> np.ndarray:
    # out[j] = c w[j+1] y[j+1] - conj(c) w[j] y[j-1] within each sector
    out = np.zeros_like(y)
    out[:, :-1] = c * w[:, 1:, None] * y[:, 1:]
    out[:, 1:] -= np.conj(c) * w[:, 1:, None] * y[:, :-1]
    return out


def rk4_sector_chain(weights, y0, kappa: complex, delta: float, t: float, steps: int) -> np.ndarray:
    """Fixed-step RK4 for ``y' = -i (kappa e^{i delta s} ab + h.c.) y``.

    ``weights[s, j] = sqrt(n_a n_b)`` of position ``j`` in sector ``s``;
    ``y0`` has shape ``(sectors, width, columns)``.
    """
    w = np.asarray(weights, dtype=float)
    y = np.array(y0, dtype=complex)
    h = t / steps
    coupling = lambda s: -1j * kappa * np.exp(1j * delta * s)  # noqa: E731
    for n in range(steps):
        s = n * h
        k1 = _pair_apply(w, y, coupling(s))
        k2 = _pair_apply(w, y + (h / 2) * k1, coupling(s + h / 2))
        k3 = _pair_apply(w, y + (h / 2) * k2, coupling(s + h / 2))
        k4 = _pair_apply(w, y + h * k3, coupling(s + h))
        y = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
    return y


def gh_log_quadratic(nodes, log_weights, q, b, l0: float, chunk: int = 1 << 18) -> float:
    """``sum_k W_k e^{|u_k|^2} (-h ln h)(u_k)`` on a Gauss-Hermite tensor grid.

    ``ln h(u) = l0 - u.Q.u - b.u``.  Weights enter as logs so that the
    ``e^{|u|^2}`` factor never overflows at high order.
    """
    x = np.asarray(nodes, dtype=float)
    lw = np.asarray(log_weights, dtype=float)
    q = np.asarray(q, dtype=float)
    b = np.asarray(b, dtype=float)
    d, n = q.shape[0], x.size
    total = n**d
    acc = 0.0
    for start in range(0, total, chunk):
        flat = np.arange(start, min(total, start + chunk))
        idx = np.stack([(flat // n**i) % n for i in range(d)], axis=1)
        u = x[idx]
        lh = l0 - np.einsum("ki,ij,kj->k", u, q, u) - u @ b
        expo = lw[idx].sum(axis=1) + lh + np.einsum("ki,ki->k", u, u)
        acc += math.fsum(-np.exp(expo) * lh)
    return acc
