"""Truncated Fock-space oracle.

Explicit matrices for ladder operators, su(1,1) generators in the one- and
two-mode boson representations, their exponentials and the numerically
integrated amplifier propagator.  Everything analytic in the package is
checked against these brute-force objects.

Two-mode basis index: ``n_a * (cutoff + 1) + n_b``.
"""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from . import kernels
from .errors import CutoffTooSmall, StepSizeFailure
from .states import Coherent, InitialState, Number, Thermal
from .su11 import AlgebraParams, NormalFactors, Ordering

__all__ = [
    "RepKind",
    "FockRep",
    "OperatorMatrix",
    "MixedState",
    "ladder_matrices",
    "generators",
    "casimir",
    "matexp",
    "exponentiate_params",
    "ordered_product",
    "propagator",
    "product_block",
    "doubling_change",
    "refine_interior",
    "default_interior",
    "interior_indices",
    "coherent_vector",
    "displacement",
    "initial_state",
    "evolve",
    "expectation",
    "husimi_value",
    "characteristic_value",
    "wigner_value",
    "moment_value",
]

# beyond this exp(norm) overflows double precision
MATEXP_NORM_LIMIT = 700.0


class RepKind(enum.Enum):
    ONE_MODE = "one_mode"
    TWO_MODE = "two_mode"


@dataclass(frozen=True)
class FockRep:
    kind: RepKind
    cutoff: int

    def __post_init__(self):
        if int(self.cutoff) != self.cutoff or self.cutoff < 2:
            raise ValueError(f"cutoff must be an integer >= 2, got {self.cutoff}")
        object.__setattr__(self, "cutoff", int(self.cutoff))
        object.__setattr__(self, "kind", RepKind(self.kind))

    @property
    def dim(self) -> int:
        n = self.cutoff + 1
        return n if self.kind is RepKind.ONE_MODE else n * n

    def photon_numbers(self) -> np.ndarray:
        """Per-basis-state photon numbers, shape (dim,) or (dim, 2)."""
        n = np.arange(self.cutoff + 1)
        if self.kind is RepKind.ONE_MODE:
            return n
        na, nb = np.meshgrid(n, n, indexing="ij")
        return np.stack([na.ravel(), nb.ravel()], axis=1)

    def sectors(self) -> list[np.ndarray]:
        """Index sets invariant under all three generators.

        One mode: photon-number parity.  Two modes: ``n_a - n_b``.
        """
        n = self.photon_numbers()
        if self.kind is RepKind.ONE_MODE:
            return [np.flatnonzero(n % 2 == r) for r in (0, 1)]
        diff = n[:, 0] - n[:, 1]
        return [np.flatnonzero(diff == d) for d in range(-self.cutoff, self.cutoff + 1)]


@dataclass
class OperatorMatrix:
    """Dense truncated operator plus the per-mode photon bound of its trusted block."""

    matrix: np.ndarray
    rep: FockRep
    interior_block: int

    def __post_init__(self):
        if self.matrix.shape != (self.rep.dim, self.rep.dim):
            raise ValueError("matrix shape does not match representation")
        if not 0 <= self.interior_block <= self.rep.cutoff:
            raise ValueError("interior_block out of range")

    @property
    def dimension(self) -> int:
        return self.rep.dim

    def block(self, bound: int | None = None) -> np.ndarray:
        idx = interior_indices(self.rep, self.interior_block if bound is None else bound)
        return self.matrix[np.ix_(idx, idx)]

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(
            self.matrix @ other.matrix, self.rep, min(self.interior_block, other.interior_block)
        )


def interior_indices(rep: FockRep, bound: int) -> np.ndarray:
    """Basis indices whose per-mode photon numbers are all ``<= bound``."""
    n = rep.photon_numbers()
    if rep.kind is RepKind.ONE_MODE:
        return np.flatnonzero(n <= bound)
    return np.flatnonzero((n[:, 0] <= bound) & (n[:, 1] <= bound))


def default_interior(rep: FockRep, norm: float) -> int:
    """``cutoff - 2 ceil(norm sqrt(cutoff))``, floored at zero."""
    return max(0, rep.cutoff - 2 * math.ceil(norm * math.sqrt(rep.cutoff)))


def ladder_matrices(cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    """Truncated annihilation and creation matrices on ``|0>, ..., |cutoff>``."""
    if cutoff < 2:
        raise ValueError("cutoff must be >= 2")
    a = np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), k=1).astype(complex)
    return a, a.conj().T.copy()


def _mode_operators(rep: FockRep):
    a, ad = ladder_matrices(rep.cutoff)
    if rep.kind is RepKind.ONE_MODE:
        return a, ad
    eye = np.eye(rep.cutoff + 1)
    return np.kron(a, eye), np.kron(ad, eye), np.kron(eye, a), np.kron(eye, ad)


@functools.lru_cache(maxsize=16)
def _generators_cached(rep: FockRep):
    a, ad = ladder_matrices(rep.cutoff)
    n = rep.photon_numbers()
    if rep.kind is RepKind.ONE_MODE:
        k_plus, k_minus = 0.5 * ad @ ad, 0.5 * a @ a
        k_zero = np.diag(0.5 * (n + 0.5)).astype(complex)
    else:
        k_plus, k_minus = np.kron(ad, ad), np.kron(a, a)
        k_zero = np.diag(0.5 * (n[:, 0] + n[:, 1] + 1)).astype(complex)
    for m in (k_plus, k_minus, k_zero):
        m.setflags(write=False)
    return k_plus, k_minus, k_zero


def generators(rep: FockRep) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(K+, K-, K0)`` as dense (read-only) matrices.

    One mode: ``K+ = a+^2/2``, ``K- = a^2/2``, ``K0 = (a+a + 1/2)/2``.
    Two modes: ``K+ = a+ b+``, ``K- = a b``, ``K0 = (a+a + b+b + 1)/2``.
    K0 is built from the photon numbers, so it is exact at every level.
    """
    return _generators_cached(rep)


def casimir(rep: FockRep) -> OperatorMatrix:
    """``K0^2 - {K-, K+}/2``; trusted two levels below the cutoff."""
    kp, km, k0 = generators(rep)
    mat = k0 @ k0 - 0.5 * (km @ kp + kp @ km)
    return OperatorMatrix(mat, rep, max(0, rep.cutoff - 2))


def _spectral_norm_bound(m: np.ndarray) -> float:
    if m.shape[0] <= 400:
        return float(np.linalg.norm(m, 2))
    bound = math.sqrt(np.linalg.norm(m, 1) * np.linalg.norm(m, np.inf))
    return bound


def matexp(m):
    """Matrix exponential (Pade scaling and squaring).

    Accepts an ndarray or :class:`OperatorMatrix`.  Raises ``OverflowError``
    when the spectral norm exceeds ``MATEXP_NORM_LIMIT``.
    """
    arr = m.matrix if isinstance(m, OperatorMatrix) else np.asarray(m)
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    if _spectral_norm_bound(arr) > MATEXP_NORM_LIMIT and np.linalg.norm(arr, 2) > MATEXP_NORM_LIMIT:
        raise OverflowError("matrix norm exceeds the exponential's accuracy range")
    out = scipy.linalg.expm(arr)
    if isinstance(m, OperatorMatrix):
        return OperatorMatrix(out, m.rep, m.interior_block)
    return out


def _sector_expm(gen: np.ndarray, rep: FockRep) -> np.ndarray:
    out = np.zeros_like(gen, dtype=complex)
    for idx in rep.sectors():
        block = np.ix_(idx, idx)
        out[block] = matexp(gen[block])
    return out


def exponentiate_params(p: AlgebraParams, rep: FockRep, interior: int | None = None) -> OperatorMatrix:
    """Truncated matrix of ``exp(W+ K+ + W0 K0 + W- K-)``.

    The generator is block diagonal over :meth:`FockRep.sectors`, so each
    sector is exponentiated separately.
    """
    kp, km, k0 = generators(rep)
    gen = p.omega_plus * kp + p.omega_zero * k0 + p.omega_minus * km
    if interior is None:
        interior = default_interior(rep, p.norm())
    return OperatorMatrix(_sector_expm(gen, rep), rep, interior)


def _sector_generator(p: AlgebraParams, rep: FockRep, idx: np.ndarray) -> np.ndarray:
    """Generator restricted to one sector, built without the dense generators.

    Sector indices ascend in ``n_a`` (two modes) or ``n`` (one mode), so K+
    only links consecutive positions.
    """
    n = rep.photon_numbers()[idx]
    if rep.kind is RepKind.ONE_MODE:
        lo = n[:-1]
        link = 0.5 * np.sqrt((lo + 1.0) * (lo + 2.0))
        diag = 0.5 * (n + 0.5)
    else:
        lo = n[:-1]
        link = np.sqrt((lo[:, 0] + 1.0) * (lo[:, 1] + 1.0))
        diag = 0.5 * (n[:, 0] + n[:, 1] + 1.0)
    gen = np.diag(p.omega_zero * diag.astype(complex))
    gen += np.diag(p.omega_plus * link, k=-1) + np.diag(p.omega_minus * link, k=1)
    return gen


def product_block(params: Sequence[AlgebraParams], rep: FockRep, bound: int) -> np.ndarray:
    """Trusted block of ``exp(p_1.K) exp(p_2.K) ...`` computed sector by sector.

    Only sectors touching the block are exponentiated, which keeps the
    cutoff-doubling check cheap for two-mode representations.
    """
    keep = interior_indices(rep, bound)
    pos = {int(k): i for i, k in enumerate(keep)}
    out = np.zeros((keep.size, keep.size), dtype=complex)
    for idx in rep.sectors():
        inside = [i for i, k in enumerate(idx) if int(k) in pos]
        if not inside:
            continue
        prod = np.eye(idx.size, dtype=complex)
        for p in params:
            prod = prod @ matexp(_sector_generator(p, rep, idx))
        where = [pos[int(idx[i])] for i in inside]
        out[np.ix_(where, where)] = prod[np.ix_(inside, inside)]
    return out


def doubling_change(params: Sequence[AlgebraParams], rep: FockRep, bound: int) -> float:
    """Relative change of :func:`product_block` when the cutoff doubles."""
    small = product_block(params, rep, bound)
    big = product_block(params, FockRep(rep.kind, 2 * rep.cutoff), bound)
    return float(np.linalg.norm(small - big) / np.linalg.norm(big))


def refine_interior(
    param_lists: Sequence[Sequence[AlgebraParams]], rep: FockRep, tol: float, start: int | None = None
) -> int:
    """Largest bound whose blocks move by < ``0.1 * tol`` under cutoff doubling.

    Every product in ``param_lists`` must pass.  Raises
    :class:`CutoffTooSmall` if not even the vacuum block does.
    """
    bound = rep.cutoff - 2 if start is None else start
    while bound >= 0:
        if all(doubling_change(seq, rep, bound) < 0.1 * tol for seq in param_lists):
            return bound
        bound -= 1
    raise CutoffTooSmall("no interior block survives cutoff doubling")


def factor_sequence(factors: NormalFactors) -> list[AlgebraParams]:
    """The three single-generator exponents of an ordered form, left to right."""
    plus = AlgebraParams(factors.f_plus, 0, 0)
    cartan = AlgebraParams(0, factors.log_zero, 0)
    minus = AlgebraParams(0, 0, factors.f_minus)
    if factors.ordering is Ordering.NORMAL:
        return [plus, cartan, minus]
    return [minus, cartan, plus]


def converged_block(
    params: Sequence[AlgebraParams], rep: FockRep, bound: int, tol: float, max_cutoff: int = 1000
) -> np.ndarray:
    """:func:`product_block` at the smallest doubled cutoff whose next doubling
    moves it by less than ``0.1 * tol`` (relative).

    Needed for products such as antinormal-ordered forms whose low block sums
    over arbitrarily high intermediate levels.
    """
    cur = rep
    block = product_block(params, cur, bound)
    while 2 * cur.cutoff <= max_cutoff:
        cur = FockRep(cur.kind, 2 * cur.cutoff)
        nxt = product_block(params, cur, bound)
        if np.linalg.norm(nxt - block) < 0.1 * tol * np.linalg.norm(nxt):
            return nxt
        block = nxt
    raise CutoffTooSmall(f"block not converged at cutoff {cur.cutoff}")


def ordered_product(factors: NormalFactors, rep: FockRep, interior: int = 0) -> OperatorMatrix:
    """Fock realisation of a three-factor ordered form.

    ``f_zero**K0`` is taken as ``exp(log_zero K0)``.
    """
    kp, km, k0 = generators(rep)
    raise_ = _sector_expm(factors.f_plus * kp, rep)
    lower = _sector_expm(factors.f_minus * km, rep)
    cartan = np.diag(np.exp(factors.log_zero * np.diag(k0)))
    if factors.ordering is Ordering.NORMAL:
        mat = raise_ @ cartan @ lower
    else:
        mat = lower @ cartan @ raise_
    return OperatorMatrix(mat, rep, interior)


# --------------------------------------------------------------------------
# amplifier propagator


def _sector_batch(rep: FockRep):
    """Sector layout for the pair coupling.

    Inside an ``n_a - n_b`` sector (indices ascending in ``n_a``) the pair
    annihilator ``ab`` only links neighbours, ``ab e_{j+1} = w_{j+1} e_j``
    with ``w = sqrt(n_a n_b)``.  Returns the sectors and the zero-padded
    weights.
    """
    secs = rep.sectors()
    width = max(len(i) for i in secs)
    n = rep.photon_numbers()
    weights = np.zeros((len(secs), width))
    for s, idx in enumerate(secs):
        weights[s, : len(idx)] = np.sqrt(n[idx, 0] * n[idx, 1])
    return secs, weights


def propagator(
    cfg,
    t: float,
    rep: FockRep,
    initial: np.ndarray | None = None,
    tol: float = 1e-8,
    interior: int | None = None,
    max_doublings: int = 16,
    columns: str = "all",
) -> OperatorMatrix | np.ndarray:
    """Time-ordered propagator of the detuned amplifier Hamiltonian.

    ``H(t) = wa a+a + wb b+b + kappa a b e^{i eta t} + kappa* a+b+ e^{-i eta t}``
    is integrated in the frame rotating with ``wa a+a + wb b+b`` (exact
    diagonal phases), where the coupling only oscillates at the detuning.
    The coupling conserves ``n_a - n_b``, so the sectors are integrated as
    one padded batch.  Fixed-step RK4; the step count doubles until the
    trusted rows change by less than ``tol``.

    With ``initial`` (a ``(dim, k)`` array of state columns) the evolved
    columns are returned as an array.  Otherwise the matrix is returned;
    ``columns="interior"`` integrates only the trusted columns and leaves
    the others as NaN.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if rep.kind is not RepKind.TWO_MODE:
        raise ValueError("the amplifier lives in the two-mode representation")
    if columns not in ("all", "interior"):
        raise ValueError("columns must be 'all' or 'interior'")
    if interior is None:
        interior = max(0, rep.cutoff - 2)
    trusted = np.zeros(rep.dim, dtype=bool)
    trusted[interior_indices(rep, interior)] = True

    full = initial is None
    if full:
        keep = trusted if columns == "interior" else np.ones(rep.dim, dtype=bool)
        init = np.eye(rep.dim, dtype=complex)[:, keep]
        col_trusted = trusted[keep]
    else:
        init = np.asarray(initial, dtype=complex).reshape(rep.dim, -1)
        col_trusted = np.ones(init.shape[1], dtype=bool)

    secs, w = _sector_batch(rep)
    picks = [np.flatnonzero(np.any(init[idx] != 0, axis=0)) for idx in secs]
    width, depth = w.shape[1], max(1, max(len(c) for c in picks))
    y0 = np.zeros((len(secs), width, depth), dtype=complex)
    row_mask = np.zeros((len(secs), width), dtype=bool)
    col_mask = np.zeros((len(secs), depth), dtype=bool)
    for s, (idx, cols) in enumerate(zip(secs, picks)):
        y0[s, : len(idx), : len(cols)] = init[np.ix_(idx, cols)]
        row_mask[s, : len(idx)] = trusted[idx]
        col_mask[s, : len(cols)] = col_trusted[cols]
    both = row_mask[:, :, None] & col_mask[:, None, :]

    kappa, delta = complex(cfg.kappa), float(cfg.delta)
    if t == 0:
        result = y0
    else:
        rate = abs(kappa) * (rep.cutoff + 1) + abs(delta)
        steps = max(4, math.ceil(t * rate / 0.5))
        prev = kernels.rk4_sector_chain(w, y0, kappa, delta, t, steps)
        for _ in range(max_doublings):
            steps *= 2
            result = kernels.rk4_sector_chain(w, y0, kappa, delta, t, steps)
            change = float(np.max(np.abs(result - prev), where=both, initial=0.0))
            if change < tol:
                break
            prev = result
        else:
            raise StepSizeFailure(f"step halving still changes the result by {change:.2e}")

    out = np.zeros(init.shape, dtype=complex)
    for s, (idx, cols) in enumerate(zip(secs, picks)):
        out[np.ix_(idx, cols)] += result[s, : len(idx), : len(cols)]
    n = rep.photon_numbers()
    out *= np.exp(-1j * t * (cfg.omega_a * n[:, 0] + cfg.omega_b * n[:, 1]))[:, None]
    if not full:
        return out
    if columns == "all":
        return OperatorMatrix(out, rep, interior)
    mat = np.full((rep.dim, rep.dim), np.nan, dtype=complex)
    mat[:, trusted] = out
    return OperatorMatrix(mat, rep, interior)


# --------------------------------------------------------------------------
# states and expectation values


def coherent_vector(alpha: complex, cutoff: int) -> np.ndarray:
    """Truncated single-mode coherent-state amplitudes (not renormalised)."""
    n = np.arange(cutoff + 1)
    log_fact = np.array([math.lgamma(k + 1) for k in n])
    alpha = complex(alpha)
    if alpha == 0:
        out = np.zeros(cutoff + 1, dtype=complex)
        out[0] = 1.0
        return out
    mag = np.exp(n * math.log(abs(alpha)) - 0.5 * log_fact - 0.5 * abs(alpha) ** 2)
    return mag * np.exp(1j * n * np.angle(alpha))


def displacement(alpha: complex, cutoff: int, margin: int = 40) -> np.ndarray:
    """Single-mode ``exp(alpha a+ - alpha* a)`` restricted to ``|0..cutoff>``.

    Exponentiated on a larger space and cut back so the kept block does not
    feel the truncation.
    """
    big = cutoff + margin
    a, ad = ladder_matrices(big)
    full = scipy.linalg.expm(alpha * ad - np.conj(alpha) * a)
    return full[: cutoff + 1, : cutoff + 1]


@dataclass
class MixedState:
    """``rho = sum_j weights[j] |v_j><v_j|`` with vectors as columns."""

    vectors: np.ndarray
    weights: np.ndarray
    rep: FockRep
    truncated_mass: float = 0.0
    meta: dict = field(default_factory=dict)

    def density(self) -> np.ndarray:
        return (self.vectors * self.weights) @ self.vectors.conj().T


def _thermal_weights(nbar: float, cutoff: int) -> np.ndarray:
    n = np.arange(cutoff + 1)
    if nbar == 0:
        return (n == 0).astype(float)
    return (nbar / (nbar + 1)) ** n / (nbar + 1)


def initial_state(state: InitialState, rep: FockRep, weight_floor: float = 1e-16) -> MixedState:
    """Fock realisation of a product initial state."""
    if rep.kind is not RepKind.TWO_MODE:
        raise ValueError("initial states are two-mode")
    c = rep.cutoff
    if isinstance(state, Coherent):
        va, vb = coherent_vector(state.zeta_a, c), coherent_vector(state.zeta_b, c)
        vec = np.kron(va, vb)
        lost = 1.0 - float(np.vdot(vec, vec).real)
        return MixedState(vec[:, None], np.ones(1), rep, lost)
    if isinstance(state, Number):
        if max(state.n_a, state.n_b) > c:
            raise CutoffTooSmall("number state above the cutoff")
        vec = np.zeros(rep.dim, dtype=complex)
        vec[state.n_a * (c + 1) + state.n_b] = 1.0
        return MixedState(vec[:, None], np.ones(1), rep, 0.0)
    if isinstance(state, Thermal):
        w = np.kron(_thermal_weights(state.nbar_a, c), _thermal_weights(state.nbar_b, c))
        keep = np.flatnonzero(w > weight_floor)
        vecs = np.zeros((rep.dim, keep.size), dtype=complex)
        vecs[keep, np.arange(keep.size)] = 1.0
        return MixedState(vecs, w[keep], rep, 1.0 - float(w[keep].sum()))
    raise TypeError(f"unknown initial state {state!r}")


def top_population(ms: MixedState, margin: int = 2) -> float:
    """Weighted population within ``margin`` levels of the cutoff in either mode."""
    n = ms.rep.photon_numbers()
    top = np.flatnonzero((n[:, 0] > ms.rep.cutoff - margin) | (n[:, 1] > ms.rep.cutoff - margin))
    probs = np.abs(ms.vectors[top]) ** 2
    return float(probs.sum(axis=0) @ ms.weights)


def evolve(cfg, t: float, state: InitialState, rep: FockRep, leak_tol: float = 1e-10) -> MixedState:
    """``rho(t) = U rho(0) U+`` with ``U`` from :func:`propagator`.

    Raises :class:`CutoffTooSmall` when the evolved state has more than
    ``leak_tol`` population at the truncation edge or the initial state was
    cut by more than ``leak_tol``.
    """
    ms = initial_state(state, rep)
    if ms.truncated_mass > leak_tol:
        raise CutoffTooSmall(f"initial state loses {ms.truncated_mass:.2e} to truncation")
    vecs = propagator(cfg, t, rep, initial=ms.vectors)
    out = MixedState(vecs, ms.weights, rep, ms.truncated_mass)
    edge = top_population(out)
    if edge > leak_tol:
        raise CutoffTooSmall(f"population {edge:.2e} reaches the cutoff")
    return out


def expectation(ms: MixedState, op) -> complex:
    """``Tr[rho op]`` for a dense or sparse operator."""
    applied = op @ ms.vectors
    return complex(np.einsum("ij,ij,j->", ms.vectors.conj(), applied, ms.weights))


def husimi_value(ms: MixedState, alpha_a: complex, alpha_b: complex) -> float:
    """``<alpha_a, alpha_b| rho |alpha_a, alpha_b>``."""
    probe = np.kron(coherent_vector(alpha_a, ms.rep.cutoff), coherent_vector(alpha_b, ms.rep.cutoff))
    amps = probe.conj() @ ms.vectors
    return float(np.sum(ms.weights * np.abs(amps) ** 2))


def characteristic_value(ms: MixedState, xi_a: complex, xi_b: complex) -> complex:
    """``Tr[D(xi_a) D(xi_b) rho]``."""
    c = ms.rep.cutoff
    disp = np.kron(displacement(xi_a, c), displacement(xi_b, c))
    return expectation(ms, disp)


def wigner_value(ms: MixedState, alpha_a: complex, alpha_b: complex) -> float:
    """Displaced-parity Wigner value, normalised to ``d^2a d^2b / pi^2``.

    ``W = 4 Tr[rho D(alpha) (-1)^(n_a + n_b) D(alpha)+]``.
    """
    c = ms.rep.cutoff
    disp = np.kron(displacement(alpha_a, c), displacement(alpha_b, c))
    n = ms.rep.photon_numbers()
    parity = (-1.0) ** (n[:, 0] + n[:, 1])
    shifted = disp.conj().T @ ms.vectors
    val = np.einsum("ij,i,ij,j->", shifted.conj(), parity, shifted, ms.weights)
    return float(4 * val.real)


def moment_value(ms: MixedState, p: int, q: int, r: int, s: int) -> complex:
    """``<a+^p a^q b+^r b^s>`` from the truncated state.

    Powers are applied right to left so truncation of intermediate vectors
    cannot inject spurious amplitude.
    """
    a, ad = ladder_matrices(ms.rep.cutoff)
    eye = np.eye(ms.rep.cutoff + 1)
    seq: Sequence[np.ndarray] = (
        [np.kron(ad, eye)] * p + [np.kron(a, eye)] * q + [np.kron(eye, ad)] * r + [np.kron(eye, a)] * s
    )
    vecs = ms.vectors
    for op in reversed(seq):
        vecs = op @ vecs
    return complex(np.einsum("ij,ij,j->", ms.vectors.conj(), vecs, ms.weights))
