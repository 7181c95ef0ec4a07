import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gensqueeze import AlgebraParams, AmplifierConfig, Coherent, CutoffTooSmall, Number, Thermal, UnitaryParams
from gensqueeze.fock import (
    FockRep,
    MixedState,
    OperatorMatrix,
    RepKind,
    casimir,
    characteristic_value,
    coherent_vector,
    converged_block,
    factor_sequence,
    displacement,
    evolve,
    exponentiate_params,
    generators,
    husimi_value,
    initial_state,
    interior_indices,
    ladder_matrices,
    matexp,
    moment_value,
    ordered_product,
    product_block,
    propagator,
    refine_interior,
    wigner_value,
)
from gensqueeze.su11 import decompose_antinormal, decompose_normal, radical_functions

from conftest import dissipative_params, unitary_params

ONE = FockRep(RepKind.ONE_MODE, 60)
TWO = FockRep(RepKind.TWO_MODE, 25)


def comm(x, y):
    return x @ y - y @ x


def test_rep_validation():
    with pytest.raises(ValueError):
        FockRep(RepKind.ONE_MODE, 1)
    assert FockRep(RepKind.TWO_MODE, 4).dim == 25
    with pytest.raises(ValueError):
        ladder_matrices(1)


def test_ladder_examples():
    a, ad = ladder_matrices(10)
    e1 = np.zeros(11)
    e1[1] = 1
    assert (a @ e1)[0] == 1
    assert np.allclose(np.diag(ad @ a), np.arange(11))
    c = comm(a, ad)
    assert np.max(np.abs(c[:10, :10] - np.eye(10))) < 1e-14


def test_generator_examples():
    _, _, k0 = generators(FockRep(RepKind.ONE_MODE, 10))
    assert np.allclose(np.diag(k0), np.arange(11) / 2 + 0.25)
    rep = FockRep(RepKind.TWO_MODE, 6)
    _, _, k0 = generators(rep)
    n = rep.photon_numbers()
    assert np.allclose(np.diag(k0), (n[:, 0] + n[:, 1] + 1) / 2)


@pytest.mark.parametrize("rep", [FockRep(RepKind.ONE_MODE, 20), FockRep(RepKind.TWO_MODE, 8)])
def test_su11_commutators(rep):
    kp, km, k0 = generators(rep)
    idx = interior_indices(rep, rep.cutoff - 2)
    blk = np.ix_(idx, idx)
    assert np.max(np.abs((comm(km, kp) - 2 * k0)[blk])) < 1e-12
    assert np.max(np.abs((comm(k0, kp) - kp)[blk])) < 1e-12
    assert np.max(np.abs((comm(k0, km) + km)[blk])) < 1e-12


def test_casimir_values():
    c1 = casimir(FockRep(RepKind.ONE_MODE, 20))
    assert np.allclose(np.diag(c1.block()), -3 / 16)
    assert np.allclose(c1.block() - np.diag(np.diag(c1.block())), 0)
    rep = FockRep(RepKind.TWO_MODE, 8)
    c2 = casimir(rep)
    n = rep.photon_numbers()
    idx = interior_indices(rep, c2.interior_block)
    diff = n[idx, 0] - n[idx, 1]
    k = (np.abs(diff) + 1) / 2
    assert np.allclose(np.diag(c2.block()), k * (k - 1))
    assert np.allclose(np.diag(c2.block())[diff == 0], -0.25)


@pytest.mark.parametrize("rep", [FockRep(RepKind.ONE_MODE, 20), FockRep(RepKind.TWO_MODE, 8)])
def test_casimir_commutes(rep):
    c = casimir(rep).matrix
    idx = interior_indices(rep, rep.cutoff - 4)
    for g in generators(rep):
        assert np.max(np.abs(comm(c, g)[np.ix_(idx, idx)])) < 1e-12


def test_matexp_examples(rng):
    assert np.allclose(matexp(np.zeros((4, 4))), np.eye(4))
    d = rng.normal(size=5) + 1j * rng.normal(size=5)
    assert np.allclose(matexp(np.diag(d)), np.diag(np.exp(d)))
    with pytest.raises(OverflowError):
        matexp(np.diag([800.0, 0.0]))
    with pytest.raises(ValueError):
        matexp(np.array([[np.nan]]))


@given(st.integers(0, 2**32 - 1), st.floats(0.01, 5.0))
@settings(max_examples=50, deadline=None)
def test_matexp_inverse(seed, scale):
    g = np.random.default_rng(seed)
    m = scale * (g.normal(size=(6, 6)) + 1j * g.normal(size=(6, 6))) / 6
    assert np.max(np.abs(matexp(m) @ matexp(-m) - np.eye(6))) < 1e-10


def test_exponentiate_identity():
    assert np.allclose(exponentiate_params(AlgebraParams.identity(), ONE).matrix, np.eye(ONE.dim))


def test_squeezed_vacuum_column():
    # exp(r (a+^2 - a^2)/2) |0>: the K+ coefficient is +r, so amplitudes carry (+tanh r)^n
    r = 0.5
    u = exponentiate_params(AlgebraParams(r, 0, -r), ONE)
    col = u.matrix[:, 0]
    for n in range(15):
        expect = math.tanh(r) ** n * math.sqrt(math.factorial(2 * n)) / (2**n * math.factorial(n)) / math.sqrt(math.cosh(r))
        assert abs(col[2 * n] - expect) < 1e-12
        assert abs(col[2 * n + 1]) == 0


def test_two_mode_unitarity(rng):
    for _ in range(10):
        p = unitary_params(rng)
        bound = refine_interior([[p]], TWO, 1e-10)
        u = exponentiate_params(p, TWO).matrix
        idx = interior_indices(TWO, bound)
        defect = (u.conj().T @ u)[np.ix_(idx, idx)] - np.eye(idx.size)
        assert np.max(np.abs(defect)) < 1e-10


def test_refine_interior_and_doubling():
    p = AlgebraParams(0.5, 0, -0.5)
    bound = refine_interior([[p]], ONE, 1e-8)
    assert 20 < bound <= ONE.cutoff - 2
    with pytest.raises(CutoffTooSmall):
        refine_interior([[AlgebraParams(3.0, 0, -3.0)]], FockRep(RepKind.ONE_MODE, 4), 1e-12)
    block = product_block([p, -p], ONE, 10)
    assert np.allclose(block, np.eye(11), atol=1e-10)


@pytest.mark.parametrize("rep", [ONE, TWO], ids=["one_mode", "two_mode"])
@pytest.mark.parametrize("draw", [unitary_params, dissipative_params], ids=["unitary", "dissipative"])
def test_decomposition_soundness(rep, draw, rng):
    for _ in range(3):
        p = draw(rng)
        bound = refine_interior([[p]], rep, 1e-8)
        target = exponentiate_params(p, rep).block(bound)
        # normal order is exact on any block: every intermediate level lies below it
        normal = ordered_product(decompose_normal(p), rep).block(bound)
        assert np.allclose(normal, product_block(factor_sequence(decompose_normal(p)), rep, bound), atol=1e-12)
        # antinormal order sums over levels above the block; grow the cutoff until it settles
        anti = converged_block(factor_sequence(decompose_antinormal(p)), rep, bound, 1e-8)
        for got in (normal, anti):
            assert np.linalg.norm(got - target) / np.linalg.norm(target) < 1e-8


def _bogoliubov(rep, p, xi, w):
    """``a U`` and ``U (gain a + cross partner)``.

    Equivalent to ``U+ a U = gain a + cross partner`` for unitary ``U`` and
    needs only one level beyond the compared block.
    """
    c, s = radical_functions(abs(xi) ** 2 - w**2 / 4)
    gain, cross = c + 0.5j * w * s, xi * s
    u = exponentiate_params(p, rep).matrix
    a, ad = ladder_matrices(rep.cutoff)
    if rep.kind is RepKind.TWO_MODE:
        eye = np.eye(rep.cutoff + 1)
        a, partner = np.kron(a, eye), np.kron(eye, ad)
    else:
        partner = ad
    return a @ u, u @ (gain * a + cross * partner)


@pytest.mark.parametrize("rep", [ONE, TWO], ids=["one_mode", "two_mode"])
@pytest.mark.parametrize("xi,w", [(0.4 - 0.2j, 0.3), (0.1 + 0.1j, 1.2), (0.3j, 0.0)])
def test_bogoliubov_action(rep, xi, w):
    # w = 1.2 with |xi| = 0.14 puts phi^2 < 0 (trigonometric regime)
    p = UnitaryParams(xi, w).to_algebra()
    bound = refine_interior([[p]], rep, 1e-8) - 1
    lhs, rhs = _bogoliubov(rep, p, xi, w)
    idx = interior_indices(rep, bound)
    assert np.max(np.abs((lhs - rhs)[np.ix_(idx, idx)])) < 1e-8


def test_operator_matrix_validation():
    with pytest.raises(ValueError):
        OperatorMatrix(np.eye(3), FockRep(RepKind.ONE_MODE, 4), 1)
    with pytest.raises(ValueError):
        OperatorMatrix(np.eye(5), FockRep(RepKind.ONE_MODE, 4), 9)


# -- propagator ------------------------------------------------------------------


CFG = AmplifierConfig(1.0, 2.0, 0.3j, 0.05)


def test_propagator_t0():
    rep = FockRep(RepKind.TWO_MODE, 6)
    assert np.allclose(propagator(CFG, 0.0, rep).matrix, np.eye(rep.dim))


def test_propagator_uncoupled():
    rep = FockRep(RepKind.TWO_MODE, 6)
    cfg = AmplifierConfig(1.3, 0.7, 0.0, 0.1)
    u = propagator(cfg, 0.8, rep).matrix
    n = rep.photon_numbers()
    assert np.allclose(u, np.diag(np.exp(-0.8j * (1.3 * n[:, 0] + 0.7 * n[:, 1]))), atol=1e-14)


def test_propagator_validation():
    with pytest.raises(ValueError):
        propagator(CFG, 1.0, FockRep(RepKind.ONE_MODE, 6))
    with pytest.raises(ValueError):
        propagator(CFG, -1.0, FockRep(RepKind.TWO_MODE, 6))


def test_propagator_interior_columns_match_full():
    rep = FockRep(RepKind.TWO_MODE, 10)
    full = propagator(CFG, 1.0, rep, interior=5)
    part = propagator(CFG, 1.0, rep, interior=5, columns="interior")
    assert np.allclose(full.block(5), part.block(5), atol=1e-9)


# -- states and expectation values --------------------------------------------------


def test_coherent_vector_and_displacement():
    v = coherent_vector(0.7 - 0.2j, 40)
    assert abs(np.vdot(v, v) - 1) < 1e-14
    d = displacement(0.7 - 0.2j, 40)
    assert np.allclose(d[:, 0], v, atol=1e-12)


def test_initial_states():
    rep = FockRep(RepKind.TWO_MODE, 20)
    th = initial_state(Thermal(0.5, 0.2), rep)
    assert abs(np.trace(th.density()) + th.truncated_mass - 1) < 1e-14
    with pytest.raises(CutoffTooSmall):
        initial_state(Number(21, 0), rep)
    with pytest.raises(CutoffTooSmall):
        evolve(CFG, 0.0, Coherent(4.0, 0), FockRep(RepKind.TWO_MODE, 6))


def test_vacuum_values():
    rep = FockRep(RepKind.TWO_MODE, 12)
    ms = initial_state(Coherent(0, 0), rep)
    assert husimi_value(ms, 0, 0) == pytest.approx(1.0)
    assert characteristic_value(ms, 0.3, 0.0) == pytest.approx(math.exp(-0.045))
    assert wigner_value(ms, 0, 0) == pytest.approx(4.0)
    assert moment_value(ms, 0, 0, 0, 0) == pytest.approx(1.0)
    one = initial_state(Number(1, 0), rep)
    assert wigner_value(one, 0, 0) == pytest.approx(-4.0)


def test_mixed_state_density_trace():
    rep = FockRep(RepKind.TWO_MODE, 4)
    vecs = np.eye(rep.dim)[:, :2].astype(complex)
    ms = MixedState(vecs, np.array([0.25, 0.75]), rep)
    assert np.trace(ms.density()) == pytest.approx(1.0)


def test_conservation_drift():
    rep = FockRep(RepKind.TWO_MODE, 30)
    n = rep.photon_numbers()
    diff = np.diag(n[:, 0] - n[:, 1]).astype(complex)
    cfg = AmplifierConfig(1.0, 1.5, 0.4, 0.2)
    from gensqueeze.fock import expectation

    state = Coherent(0.4, -0.3j)
    values = [expectation(evolve(cfg, t, state, rep), diff).real for t in np.linspace(0, 1.25, 5)]
    assert np.max(np.abs(np.array(values) - values[0])) < 1e-8
