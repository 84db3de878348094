import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_decomposition, rel_entrywise
from nucleus import (
    ComputationError,
    Decomposition,
    InputError,
    ParameterError,
    nu2_trace,
    phys_cost,
    pietsch_bound,
    pietsch_decompose,
    reconstruct,
    rho_p,
    spectral_decompose,
)
from oracles import frobenius_sq_entrywise


def test_phys_cost_spectral_diag():
    d = spectral_decompose(np.diag([2.0, 1.0]))
    assert d.n_stored == 2
    assert phys_cost(d, 1) == pytest.approx(3.0, rel=1e-15)


@pytest.mark.parametrize("p", [0.3, 1, 2, 7.5])
def test_phys_cost_single_term(p):
    d = Decomposition.from_terms([((1.0, 0.0), (0.0, 3.0))], (2, 2))
    assert phys_cost(d, p) == pytest.approx(3.0, rel=1e-15)


def test_phys_cost_p2_is_frobenius(rng):
    m = rng.standard_normal((4, 4))
    d = spectral_decompose(m)
    assert phys_cost(d, 2) == pytest.approx(math.sqrt(frobenius_sq_entrywise(m)), rel=1e-12)


@pytest.mark.parametrize("p", [0, -0.5])
def test_phys_cost_rejects_nonpositive_p(p):
    with pytest.raises(ParameterError):
        phys_cost(spectral_decompose(np.eye(2)), p)


def test_decomposition_validation():
    with pytest.raises(InputError, match="both ell and phi zero"):
        Decomposition.from_terms([((0.0, 0.0), (0.0,))], (1, 2))
    with pytest.raises(InputError):
        Decomposition(np.ones((2, 3)), np.ones((2, 4)), (5, 3))
    with pytest.raises(InputError):
        Decomposition(np.ones((1, 2)), np.array([[np.inf]]), (1, 2))
    with pytest.raises(InputError):
        Decomposition(np.ones((1, 2)), np.ones((1, 1)), (1, 2), multiplicity=[0.5])


def test_decomposition_json_roundtrip(rng):
    d = random_decomposition(rng, 3, 2, 4)
    d2 = Decomposition.from_dict(d.to_dict())
    np.testing.assert_array_equal(d2.ell, d.ell)
    np.testing.assert_array_equal(d2.phi, d.phi)
    assert d2.dims == d.dims
    with pytest.raises(InputError):
        Decomposition.from_dict({"dims": [2, 2], "terms": [{"ell": [1], "phi": [1, 2]}]})


def test_apply_matches_reconstruct(rng):
    d = random_decomposition(rng, 5, 3, 4)
    x = rng.standard_normal(4)
    np.testing.assert_allclose(d.apply(x), reconstruct(d).matrix @ x, rtol=1e-13)


# --- spectral decomposition -------------------------------------------------

def test_spectral_rank_one():
    m = np.outer([1.0, 2.0, 3.0], [0.5, -1.0])
    d = spectral_decompose(m)
    assert d.n_stored == 1
    assert rel_entrywise(reconstruct(d).matrix, m) < 1e-14


def test_spectral_roundtrip(rng):
    m = rng.standard_normal((5, 3))
    assert rel_entrywise(reconstruct(spectral_decompose(m)).matrix, m) < 1e-10


def test_spectral_unit_phi(rng):
    d = spectral_decompose(rng.standard_normal((4, 6)))
    np.testing.assert_allclose(d.phi_norms, 1.0, rtol=1e-14)


def test_spectral_cost_squared_is_trace(rng):
    m = rng.standard_normal((5, 5))
    d = spectral_decompose(m)
    assert phys_cost(d, 2) ** 2 == pytest.approx(np.trace(m @ m.T), rel=1e-10)


@pytest.mark.parametrize("p", [0.4, 1, 1.5, 3])
def test_spectral_cost_equals_rho_p(rng, p):
    m = rng.standard_normal((6, 4))
    assert phys_cost(spectral_decompose(m), p) == pytest.approx(rho_p(m, p), rel=1e-12)


def test_reconstruct_empty():
    d = Decomposition.empty((3, 2))
    np.testing.assert_array_equal(reconstruct(d).matrix, np.zeros((3, 2)))
    assert phys_cost(d, 1.5) == 0.0


# --- dyadic (Pietsch) construction ------------------------------------------

def test_pietsch_diag_p1():
    d = pietsch_decompose(np.diag([1.0, 0.5]), 1)
    cost = phys_cost(d, 1)
    assert cost <= 2**5 * 1.5
    # exact truncations make the ladder reproduce the singular terms
    assert cost == pytest.approx(1.5, rel=1e-14)


def test_pietsch_zero_operator():
    d = pietsch_decompose(np.zeros((3, 3)), 1)
    assert d.n_stored == 0
    assert phys_cost(d, 1) == 0.0


def test_pietsch_random_p_half(rng):
    m = rng.standard_normal((8, 8))
    d = pietsch_decompose(m, 0.5)
    assert rel_entrywise(reconstruct(d).matrix, m) < 1e-8
    assert phys_cost(d, 0.5) <= 2**8 * rho_p(m, 0.5)


def test_pietsch_ladder_blocks(rng):
    """Terms come in dyadic blocks of sizes 2, 4, 8, ..."""
    m = rng.standard_normal((20, 20))
    d = pietsch_decompose(m, 1)
    assert d.n_stored == 20
    # block boundaries at ranks 2, 6, 14: each block's functionals span the
    # corresponding band of right singular vectors
    _, _, vt = np.linalg.svd(m)
    for lo, hi in [(0, 2), (2, 6), (6, 14), (14, 20)]:
        block = d.ell[lo:hi]
        proj = block @ vt[lo:hi].T @ vt[lo:hi]
        np.testing.assert_allclose(proj, block, atol=1e-10)


@pytest.mark.parametrize("p", [0, -1])
def test_pietsch_rejects_p(p):
    with pytest.raises(ParameterError):
        pietsch_decompose(np.eye(2), p)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**31),
    st.sampled_from([0.4, 0.7, 1, 1.5, 2, 3]),
)
def test_pietsch_bound_property(rows, cols, seed, p):
    m = np.random.default_rng(seed).standard_normal((rows, cols))
    d = pietsch_decompose(m, p)
    assert phys_cost(d, p) <= pietsch_bound(m, p)
    assert rel_entrywise(reconstruct(d).matrix, m) < 1e-8


# --- trace formula -----------------------------------------------------------

def test_nu2_trace_examples(rng):
    assert nu2_trace(np.diag([1.0, 0.5])) == 1.25
    assert nu2_trace(np.zeros((2, 2))) == 0.0
    m = rng.standard_normal((4, 4))
    s = np.linalg.svd(m, compute_uv=False)
    assert nu2_trace(m) == pytest.approx(float(np.sum(s**2)), rel=1e-12)
    assert nu2_trace(m) == pytest.approx(frobenius_sq_entrywise(m), rel=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10), st.integers(1, 10), st.integers(0, 2**31))
def test_spectral_optimality_anchor(rows, cols, seed):
    m = np.random.default_rng(seed).standard_normal((rows, cols))
    assert phys_cost(spectral_decompose(m), 2) ** 2 == pytest.approx(nu2_trace(m), rel=1e-10)


def test_expand_limits():
    d = Decomposition(np.ones((1, 1)), np.ones((1, 1)), (1, 1), multiplicity=[10**7])
    with pytest.raises(ComputationError):
        d.expand()
