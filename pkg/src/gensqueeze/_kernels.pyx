# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops.  Same signatures as ``_kernels_py``."""
import numpy as np

from libc.math cimport cos, exp, sin


cdef void _pair_apply(const double[:, ::1] w, double complex[:, :, ::1] y,
                      double complex[:, :, ::1] out, double complex c) noexcept nogil:
    # out = c * ab y - conj(c) * a+b+ y, sector by sector
    cdef Py_ssize_t S = y.shape[0], W = y.shape[1], K = y.shape[2]
    cdef Py_ssize_t s, j, k
    cdef double complex cb = c.real - 1j * c.imag
    cdef double complex v
    for s in range(S):
        for j in range(W):
            for k in range(K):
                v = 0
                if j + 1 < W:
                    v = v + c * w[s, j + 1] * y[s, j + 1, k]
                if j > 0:
                    v = v - cb * w[s, j] * y[s, j - 1, k]
                out[s, j, k] = v


cdef inline double complex _coupling(double complex kappa, double delta, double s) noexcept nogil:
    # -i kappa e^{i delta s}
    return -1j * kappa * (cos(delta * s) + 1j * sin(delta * s))


def rk4_sector_chain(weights, y0, double complex kappa, double delta, double t, Py_ssize_t steps):
    cdef const double[:, ::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    y_arr = np.array(y0, dtype=np.complex128, order="C", copy=True)
    cdef double complex[:, :, ::1] y = y_arr
    cdef double complex[:, :, ::1] k1 = np.empty_like(y_arr)
    cdef double complex[:, :, ::1] k2 = np.empty_like(y_arr)
    cdef double complex[:, :, ::1] k3 = np.empty_like(y_arr)
    cdef double complex[:, :, ::1] k4 = np.empty_like(y_arr)
    cdef double complex[:, :, ::1] tmp = np.empty_like(y_arr)
    cdef Py_ssize_t S = y.shape[0], W = y.shape[1], K = y.shape[2]
    cdef Py_ssize_t n, s, j, k
    cdef double h = t / steps, t0
    with nogil:
        for n in range(steps):
            t0 = n * h
            _pair_apply(w, y, k1, _coupling(kappa, delta, t0))
            for s in range(S):
                for j in range(W):
                    for k in range(K):
                        tmp[s, j, k] = y[s, j, k] + 0.5 * h * k1[s, j, k]
            _pair_apply(w, tmp, k2, _coupling(kappa, delta, t0 + 0.5 * h))
            for s in range(S):
                for j in range(W):
                    for k in range(K):
                        tmp[s, j, k] = y[s, j, k] + 0.5 * h * k2[s, j, k]
            _pair_apply(w, tmp, k3, _coupling(kappa, delta, t0 + 0.5 * h))
            for s in range(S):
                for j in range(W):
                    for k in range(K):
                        tmp[s, j, k] = y[s, j, k] + h * k3[s, j, k]
            _pair_apply(w, tmp, k4, _coupling(kappa, delta, t0 + h))
            for s in range(S):
                for j in range(W):
                    for k in range(K):
                        y[s, j, k] = y[s, j, k] + (h / 6.0) * (
                            k1[s, j, k] + 2.0 * k2[s, j, k] + 2.0 * k3[s, j, k] + k4[s, j, k])
    return y_arr


def gh_log_quadratic(nodes, log_weights, q, b, double l0):
    cdef const double[::1] x = np.ascontiguousarray(nodes, dtype=np.float64)
    cdef const double[::1] lw = np.ascontiguousarray(log_weights, dtype=np.float64)
    cdef const double[:, ::1] Q = np.ascontiguousarray(q, dtype=np.float64)
    cdef const double[::1] B = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t d = Q.shape[0], n = x.shape[0]
    if d > 4 or d < 1:
        raise ValueError("1 to 4 dimensions supported")
    cdef Py_ssize_t idx[4]
    cdef double u[4]
    cdef Py_ssize_t i, j, total = 1, p, r
    cdef double quad, lin, lh, lwsum, norm2, acc = 0.0, comp = 0.0, term, ysum, tsum
    for i in range(d):
        total *= n
    with nogil:
        for p in range(total):
            r = p
            for i in range(d):
                idx[i] = r % n
                r = r // n
                u[i] = x[idx[i]]
            quad = 0.0
            lin = 0.0
            lwsum = 0.0
            norm2 = 0.0
            for i in range(d):
                lin = lin + B[i] * u[i]
                lwsum = lwsum + lw[idx[i]]
                norm2 = norm2 + u[i] * u[i]
                for j in range(d):
                    quad = quad + Q[i, j] * u[i] * u[j]
            lh = l0 - quad - lin
            term = -exp(lwsum + lh + norm2) * lh
            # compensated summation
            ysum = term - comp
            tsum = acc + ysum
            comp = (tsum - acc) - ysum
            acc = tsum
    return acc
