import math

import numpy as np
import pytest

from nucleus import (
    ComputationError,
    EnergySpectrum,
    InputError,
    ParameterError,
    beta_sweep,
    gibbs_operator,
    gibbs_weights,
    rho_p,
)
from nucleus.gibbs import geometric_betas, truncation_dim


def rho1_linear(beta):
    return math.exp(-beta) / -math.expm1(-beta)


def test_gibbs_norm_decays():
    norms = [np.linalg.norm(gibbs_operator(EnergySpectrum.linear(1), b, 5).matrix, 2) for b in (1, 5, 20)]
    np.testing.assert_allclose(norms, [math.exp(-1), math.exp(-5), math.exp(-20)], rtol=1e-14)


def test_gibbs_zero_energies_identity():
    op = gibbs_operator(EnergySpectrum.explicit([0, 0, 0]), 2.5, 3)
    np.testing.assert_array_equal(op.matrix, np.eye(3))


def test_gibbs_rho1_linear_dim50():
    w = gibbs_weights(EnergySpectrum.linear(1), 1.0, 50)
    # the dropped tail is e^-51 / (1 - e^-1)
    assert abs(math.fsum(w) - rho1_linear(1.0)) < 1e-16
    # singular values below 1e-12 of the largest are flushed, which caps
    # the agreement of rho_p on the dense operator
    op = gibbs_operator(EnergySpectrum.linear(1), 1.0, 50)
    flushed = math.fsum(x for x in w if x < 1e-12 * w[0])
    assert abs(rho_p(op, 1) - rho1_linear(1.0)) <= flushed + 1e-15


def test_gibbs_operator_matches_sweep(rng):
    spec = EnergySpectrum.power(0.7, 1.3)
    op = gibbs_operator(spec, 0.8, 200)
    t = beta_sweep(spec, [0.8], 1.5)
    assert rho_p(op, 1.5) == pytest.approx(t.rows[0].rho_p, rel=1e-12)


@pytest.mark.parametrize("beta", [0, -1, math.inf])
def test_gibbs_rejects_beta(beta):
    with pytest.raises(ParameterError):
        gibbs_weights(EnergySpectrum.linear(1), beta, 3)


def test_spectrum_validation():
    with pytest.raises(InputError):
        EnergySpectrum.linear(0)
    with pytest.raises(InputError):
        EnergySpectrum.explicit([2, 1])
    with pytest.raises(InputError):
        EnergySpectrum.power(1, -1)
    with pytest.raises(ParameterError):
        EnergySpectrum.explicit([1, 2]).energies(3)


@pytest.mark.parametrize("spec", [EnergySpectrum.linear(2), EnergySpectrum.power(1, 2), EnergySpectrum.explicit([0, 1, 1, 3])])
def test_spectrum_roundtrip(spec):
    s2 = EnergySpectrum.from_dict(spec.to_dict())
    np.testing.assert_array_equal(s2.energies(4), spec.energies(4))


# --- sweeps --------------------------------------------------------------------

def test_sweep_linear_p1_closed_form():
    betas = geometric_betas(2.0, 0.01, 12)
    t = beta_sweep(EnergySpectrum.linear(1), betas, 1)
    for r in t.rows:
        assert r.rho_p == pytest.approx(rho1_linear(r.beta), rel=1e-12)
    # slopes approach 1 from above as beta shrinks
    slopes = [r.log_slope for r in t.rows[1:]]
    assert slopes[-1] == pytest.approx(1.0, abs=0.01)
    assert all(s > 1 for s in slopes)


def test_sweep_power_p2_closed_form():
    t = beta_sweep(EnergySpectrum.power(1, 1), [1.0, 0.3, 0.1], 2)
    for r in t.rows:
        closed = math.exp(-2 * r.beta) / -math.expm1(-2 * r.beta)
        assert r.rho_p**2 == pytest.approx(closed, rel=1e-12)
        assert r.nu2 == pytest.approx(closed, rel=1e-12)


def test_sweep_nu2_explicit():
    e = [0.0, 0.5, 2.0]
    t = beta_sweep(EnergySpectrum.explicit(e), [0.7], 1)
    assert t.rows[0].nu2 == pytest.approx(math.fsum(math.exp(-1.4 * x) for x in e), rel=1e-15)
    assert t.rows[0].log_slope is None


@pytest.mark.parametrize("p", [0.5, 1, 2, 3])
def test_sweep_monotone(p):
    t = beta_sweep(EnergySpectrum.power(1, 1.5), geometric_betas(3, 0.05, 15), p)
    vals = [r.rho_p for r in t.rows]
    assert all(b > a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("p", [0.5, 1, 2.5])
@pytest.mark.parametrize("spec", [EnergySpectrum.linear(1), EnergySpectrum.power(0.5, 0.8)])
def test_truncation_soundness(spec, p):
    for beta in (2.0, 0.3, 0.05):
        n = truncation_dim(spec, beta, p)
        w1 = gibbs_weights(spec, beta, n)
        w2 = gibbs_weights(spec, beta, 2 * n)
        r1 = math.fsum(w1**p) ** (1 / p)
        r2 = math.fsum(w2**p) ** (1 / p)
        assert abs(r2 - r1) < 1e-10 * r2
        assert abs(math.fsum(w2**2) - math.fsum(w1**2)) < 1e-10 * math.fsum(w2**2)


def test_sweep_budget_error_names_beta():
    spec = EnergySpectrum.linear(1)
    with pytest.raises(ComputationError, match=r"smallest admissible beta is ([0-9.e+-]+)") as info:
        beta_sweep(spec, [1.0, 1e-3], 1, dim=1000)
    b_min = float(info.value.args[0].rsplit(" ", 1)[1])
    assert truncation_dim(spec, b_min, 1, cap=1000) is not None
    assert truncation_dim(spec, b_min * 0.99, 1, cap=1000) is None


def test_sweep_rejects_order():
    with pytest.raises(ParameterError):
        beta_sweep(EnergySpectrum.linear(1), [0.1, 0.2], 1)


def test_sweep_csv():
    t = beta_sweep(EnergySpectrum.linear(1), [1.0, 0.5], 1)
    lines = t.to_csv().splitlines()
    assert lines[0] == "beta,rho_p,nu2,log_slope"
    assert lines[1].endswith(",")
    beta, rho, _, slope = lines[2].split(",")
    assert float(rho) == t.rows[1].rho_p
    assert float(slope) == t.rows[1].log_slope
