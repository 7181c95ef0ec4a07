import math
import warnings

import numpy as np
import pytest

from gensqueeze import (
    AmplifierConfig,
    Coherent,
    PositivityViolation,
    QuadratureNotConverged,
    RangeViolation,
    Thermal,
    correlation,
    entropy_closed,
    entropy_numeric,
)
from gensqueeze.amplifier import DetuningWarning
from gensqueeze.fock import FockRep, RepKind, evolve, husimi_value
from gensqueeze.wehrl import (
    EntropyReport,
    HusimiCoherentParams,
    HusimiThermalParams,
    LogQuadratic,
    QuadratureSpec,
    entropy_report_numeric,
    husimi_coherent,
    husimi_coherent_params,
    husimi_log_quadratic,
    husimi_marginal_coherent,
    husimi_marginal_thermal,
    husimi_moments,
    husimi_thermal,
    husimi_thermal_params,
)

from conftest import log_gain_correlation, random_config

# frozen from the closed forms (independent check: direct evaluation of ln cosh)
JOINT_KT1 = 2.8675616609660546
PARTIAL_KT1 = 1.8675616609660544
C_KT1 = 0.46454244542441564
C_KT10 = 0.9490152438197332

RESONANT = AmplifierConfig(1.0, 1.5, 0.5)


def gh2(f, mean, width, order=60):
    """int f(alpha) d^2 alpha for f concentrated in a disc of radius ~sqrt(width) around mean."""
    x, w = np.polynomial.hermite.hermgauss(order)
    u, v = np.meshgrid(x, x, indexing="ij")
    wt = np.outer(w, w)
    s = math.sqrt(width)
    pts = mean + s * (u + 1j * v)
    return np.sum(wt * np.exp(u**2 + v**2) * f(pts)) * s * s


# -- coherent Husimi ------------------------------------------------------------


def test_coherent_husimi_examples():
    state = Coherent(0.3 - 0.2j, 0.5j)
    assert husimi_coherent(RESONANT, state, 0.0, state.zeta_a, state.zeta_b) == pytest.approx(1.0)
    cfg = AmplifierConfig(1.0, 1.5, 1.0)
    assert husimi_coherent(cfg, Coherent(0, 0), 1.0, 0, 0) == pytest.approx(math.cosh(1) ** -2, abs=1e-14)
    assert husimi_coherent(cfg, Coherent(0, 0), 1.0, 0, 0) == pytest.approx(0.4200, abs=1e-4)


def test_coherent_params_positivity():
    par = husimi_coherent_params(RESONANT, Coherent(0, 0), 2.0)
    assert 0 < abs(par.a_zero) <= 1
    with pytest.raises(PositivityViolation):
        HusimiCoherentParams(1.5, 0, np.zeros((2, 4)), 0, 0, 0, 0)


@pytest.mark.parametrize("detuned", [False, True])
def test_coherent_husimi_vs_oracle(detuned, rng):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DetuningWarning)
        cfg = AmplifierConfig(1.0, 1.4, 0.3 - 0.2j, 0.4 if detuned else 0.0)
    state = Coherent(0.4 + 0.1j, -0.3j)
    t = 1.2
    ms = evolve(cfg, t, state, FockRep(RepKind.TWO_MODE, 30))
    for _ in range(20):
        a, b = (complex(*rng.normal(scale=0.8, size=2)) for _ in range(2))
        assert abs(husimi_coherent(cfg, state, t, a, b) - husimi_value(ms, a, b)) < 1e-6


def test_coherent_marginals():
    state = Coherent(0.3 - 0.2j, 0.5j)
    for mode, z in (("A", state.zeta_a), ("B", state.zeta_b)):
        assert husimi_marginal_coherent(RESONANT, state, 0.0, mode, z + 0.5) == pytest.approx(math.exp(-0.25))
    with pytest.raises(ValueError):
        husimi_marginal_coherent(RESONANT, state, 0.0, "C", 0)
    cfg = AmplifierConfig(1.0, 1.5, 0.4 + 0.3j, 0.1)
    t = 1.3
    par = husimi_coherent_params(cfg, state, t)
    w = abs(par.a_zero)
    # normalization
    total = gh2(lambda a: husimi_marginal_coherent(cfg, state, t, "A", a), par.eps_a, 1 / w)
    assert total / math.pi == pytest.approx(1.0, abs=1e-10)
    # numeric marginalization of the joint function over alpha_b
    for alpha_a in (par.eps_a, par.eps_a + 0.4 - 0.7j):
        joint = gh2(lambda b: husimi_coherent(cfg, state, t, alpha_a, b), par.eps_b, 1 / w)
        assert joint / math.pi == pytest.approx(husimi_marginal_coherent(cfg, state, t, "A", alpha_a), abs=1e-6)


# -- thermal Husimi -------------------------------------------------------------


def test_thermal_t0_factorizes(rng):
    state = Thermal(0.7, 0.2)
    for _ in range(10):
        a, b = (complex(*rng.normal(size=2)) for _ in range(2))
        expect = math.exp(-abs(a) ** 2 / 1.7) / 1.7 * math.exp(-abs(b) ** 2 / 1.2) / 1.2
        assert husimi_thermal(RESONANT, state, 0.0, a, b) == pytest.approx(expect, rel=1e-13)
    par = husimi_thermal_params(RESONANT, state, 0.0)
    assert par.ell_ab == 0 and par.g(1, 1) == pytest.approx(1.7 * 1.2)


def test_thermal_zero_temperature_is_vacuum(rng):
    cfg = AmplifierConfig(1.0, 1.5, 0.3 + 0.4j, 0.1)
    for _ in range(10):
        a, b = (complex(*rng.normal(size=2)) for _ in range(2))
        assert husimi_thermal(cfg, Thermal(0, 0), 0.9, a, b) == pytest.approx(husimi_coherent(cfg, Coherent(0, 0), 0.9, a, b), rel=1e-12)


def test_thermal_husimi_vs_oracle(rng):
    cfg = AmplifierConfig(1.0, 1.4, 0.3 - 0.2j, 0.05)
    state = Thermal(0.5, 0.3)
    t = 1.0
    ms = evolve(cfg, t, state, FockRep(RepKind.TWO_MODE, 40))
    for _ in range(20):
        a, b = (complex(*rng.normal(scale=0.8, size=2)) for _ in range(2))
        assert abs(husimi_thermal(cfg, state, t, a, b) - husimi_value(ms, a, b)) < 1e-6
    for mode in ("A", "B"):
        width = husimi_thermal_params(cfg, state, t).g(*((1, 0) if mode == "A" else (0, 1)))
        assert husimi_marginal_thermal(cfg, state, t, mode, 0) == pytest.approx(1 / width)


def test_thermal_positivity():
    with pytest.raises(PositivityViolation):
        HusimiThermalParams(1.0, 1.0, 1.5, lambda x, y: 1.0)


# -- quadrature ---------------------------------------------------------------------


def _spec(cfg, state, t, mode=None, **kw):
    mean, cov = husimi_moments(cfg, state, t, mode)
    return QuadratureSpec(mean, cov, **kw)


def test_entropy_numeric_examples():
    vac = Coherent(0, 0)
    assert entropy_numeric(husimi_log_quadratic(RESONANT, vac, 0.0, "A"), 2, _spec(RESONANT, vac, 0.0, "A")) == pytest.approx(1.0, abs=1e-12)
    assert entropy_numeric(husimi_log_quadratic(RESONANT, vac, 0.0), 4, _spec(RESONANT, vac, 0.0)) == pytest.approx(2.0, abs=1e-12)
    th = Thermal(1.0, 0.0)
    got = entropy_numeric(husimi_log_quadratic(RESONANT, th, 0.0), 4, _spec(RESONANT, th, 0.0))
    assert got == pytest.approx(2 + math.log(2), abs=1e-10)


def test_entropy_numeric_callable_route():
    cfg = AmplifierConfig(1.0, 1.5, 0.3 + 0.1j, 0.05)
    state = Coherent(0.2, -0.1j)
    h = husimi_log_quadratic(cfg, state, 1.5)

    def joint(r):
        return husimi_coherent(cfg, state, 1.5, r[:, 0] + 1j * r[:, 1], r[:, 2] + 1j * r[:, 3])

    spec = _spec(cfg, state, 1.5, order=16)
    assert entropy_numeric(joint, 4, spec) == pytest.approx(entropy_numeric(h, 4, spec), abs=1e-9)
    assert entropy_numeric(h, 4, spec) == pytest.approx(entropy_closed(cfg, state, 1.5).joint, abs=1e-9)


def test_entropy_numeric_not_converged():
    # whitening far narrower than the integrand leaves the rule unconverged
    h = LogQuadratic(0.0, np.zeros(2), np.eye(2))
    with pytest.raises(QuadratureNotConverged):
        entropy_numeric(h, 2, QuadratureSpec(np.zeros(2), 0.01 * np.eye(2), order=8))


def test_husimi_moments_match_closed_precision(rng):
    for k in range(10):
        cfg = random_config(rng, detuned=k % 2 == 1)
        t = rng.uniform(0, 3)
        for state in (Coherent(*(complex(*rng.normal(size=2)) for _ in range(2))), Thermal(*rng.uniform(0, 2, 2))):
            mean, cov = husimi_moments(cfg, state, t)
            h = husimi_log_quadratic(cfg, state, t)
            assert np.allclose(h.precision, np.linalg.inv(cov) / 2, atol=1e-10)
            assert np.allclose(h.center, mean, atol=1e-10)


# -- closed forms ------------------------------------------------------------------------


def test_entropy_closed_coherent_examples():
    r0 = entropy_closed(RESONANT, Coherent(0.3, 0.1j), 0.0)
    assert (r0.joint, r0.partial_a, r0.partial_b, r0.cond_a, r0.cond_b, r0.correlation) == (2, 1, 1, 1, 1, 0)
    cfg = AmplifierConfig(1.0, 1.5, 1.0)
    r = entropy_closed(cfg, Coherent(0, 0), 1.0)
    assert r.joint == pytest.approx(JOINT_KT1, abs=1e-13)
    assert r.joint == pytest.approx(2.8676, abs=1e-4)
    assert r.partial_a == pytest.approx(PARTIAL_KT1, abs=1e-13)
    assert r.correlation == pytest.approx(C_KT1, abs=1e-13)
    assert entropy_closed(cfg, Coherent(0, 0), 10.0).correlation == pytest.approx(C_KT10, abs=1e-12)


def test_entropy_closed_thermal_t0():
    r = entropy_closed(RESONANT, Thermal(0.8, 0.3), 0.0)
    assert r.joint == pytest.approx(2 + math.log(1.8 * 1.3))
    assert r.joint == pytest.approx(r.partial_a + r.partial_b)
    assert r.correlation == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(TypeError):
        entropy_closed(RESONANT, object(), 1.0)


def test_correlation_examples():
    assert correlation(3.0, 1.5, 1.5) == 0
    assert correlation(2.0, 1.0, 1.0 + 1e-12) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(RangeViolation):
        correlation(3.5, 1.5, 1.5)
    with pytest.raises(RangeViolation):
        correlation(0.1, 1.5, 1.5)
    with pytest.raises(ValueError):
        correlation(0.0, 0.0, 0.0)


def test_correlation_equals_log_gain_form(rng):
    for k in range(50):
        cfg = random_config(rng, detuned=k % 2 == 1)
        t = rng.uniform(0, 10)
        assert abs(entropy_closed(cfg, Coherent(0.2, 0.1), t).correlation - log_gain_correlation(cfg, t)) < 1e-12


def test_report_serialization():
    r = EntropyReport.from_entropies(3.0, 2.0, 1.8)
    d = r.as_dict()
    assert list(d) == ["joint", "partial_a", "partial_b", "cond_a", "cond_b", "correlation"]
    assert d["cond_a"] == pytest.approx(1.0) and d["cond_b"] == pytest.approx(1.2)


def test_numeric_report_matches_closed(rng):
    for k in range(6):
        cfg = random_config(rng, detuned=k % 2 == 1)
        t = rng.uniform(0, 4)
        for state in (Coherent(0.3, -0.2j), Thermal(0.6, 0.1)):
            a = entropy_closed(cfg, state, t).as_dict()
            b = entropy_report_numeric(cfg, state, t).as_dict()
            assert max(abs(a[k2] - b[k2]) for k2 in a) < 1e-6


def test_thermal_correlation_open_interval(rng):
    for _ in range(20):
        cfg = random_config(rng)
        t = rng.uniform(0.1, 5)
        c = entropy_closed(cfg, Thermal(*rng.uniform(0, 3, 2)), t).correlation
        assert 0 < c < 1
