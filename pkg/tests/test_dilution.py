import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_decomposition, rel_entrywise
from nucleus import (
    Decomposition,
    InputError,
    ParameterError,
    alpha_window,
    default_alpha,
    dilute_uniform,
    independent_dilute,
    independent_factor,
    math_cost,
    phys_cost,
    reconstruct,
    schauder_schedule,
    schauder_sum,
    spectral_decompose,
    uniform_factor,
)

BASEL = math.pi**2 / 6


# --- uniform dilution --------------------------------------------------------

def test_uniform_p2_m4_halves_cost(rng):
    d = random_decomposition(rng, 4, 3, 3)
    assert phys_cost(dilute_uniform(d, 4), 2) / phys_cost(d, 2) == pytest.approx(0.5, rel=1e-12)


def test_uniform_p1_unchanged(rng):
    d = random_decomposition(rng, 4, 3, 3)
    for m in (2, 17, 10**6):
        assert phys_cost(dilute_uniform(d, m), 1) == phys_cost(d, 1)


def test_uniform_p_half_increases(rng):
    d = random_decomposition(rng, 4, 3, 3)
    assert phys_cost(dilute_uniform(d, 4), 0.5) / phys_cost(d, 0.5) == pytest.approx(4.0, rel=1e-12)


def test_uniform_reconstruct_bitwise(rng):
    d = random_decomposition(rng, 5, 4, 3)
    np.testing.assert_array_equal(reconstruct(dilute_uniform(d, 7)).matrix, reconstruct(d).matrix)


def test_uniform_matches_explicit_copies(rng):
    """Grouped copies cost exactly what the listed-out copies cost."""
    d = random_decomposition(rng, 3, 2, 2)
    g = dilute_uniform(d, 5)
    e = g.expand()
    assert e.n_stored == 15
    np.testing.assert_allclose(e.phi[:5], np.repeat(d.phi[:1] / 5, 5, axis=0))
    for p in (0.5, 1, 1.5, 3):
        assert phys_cost(e, p) == pytest.approx(phys_cost(g, p), rel=1e-12)
    for p in (1, 1.5, 2, math.inf):
        assert math_cost(e, p).math_upper == pytest.approx(math_cost(g, p).math_upper, rel=1e-9)
    assert rel_entrywise(reconstruct(e).matrix, reconstruct(d).matrix) < 1e-12


@pytest.mark.parametrize("m", [1, 0, -3, 2.5, True])
def test_uniform_rejects_bad_m(m):
    with pytest.raises(ParameterError):
        dilute_uniform(spectral_decompose(np.eye(2)), m)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(0, 2**31),
    st.sampled_from([2, 3, 10, 1000, 10**6]),
    st.sampled_from([0.5, 1, 1.5, 2, 4]),
)
def test_exact_dilution_factor(seed, m, p):
    d = random_decomposition(np.random.default_rng(seed), 6, 4, 5)
    ratio = phys_cost(dilute_uniform(d, m), p) / phys_cost(d, p)
    assert ratio == pytest.approx(uniform_factor(m, p), rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.floats(1.05, 5), st.floats(1e-9, 1.0))
def test_vanishing_index(seed, p, t_frac):
    d = random_decomposition(np.random.default_rng(seed), 4, 3, 3)
    cost = phys_cost(d, p)
    t = t_frac * cost
    m = math.ceil((cost / t) ** (p / (p - 1))) + 1
    if m > 2**62:
        return
    diluted = phys_cost(dilute_uniform(d, m), p)
    if m < 2**40:
        assert diluted < t
    else:
        # the "+1" margin is below double resolution once m is this large
        assert diluted <= t * (1 + 1e-12)


@pytest.mark.parametrize("p", [1.5, 2, 3, math.inf])
def test_math_cost_invariant_under_uniform_dilution(rng, p):
    d = random_decomposition(rng, 4, 3, 3)
    a = math_cost(d, p)
    b = math_cost(dilute_uniform(d, 9), p)
    assert b.bound_kind == a.bound_kind
    assert b.math_lower == pytest.approx(a.math_lower, rel=1e-9)
    assert b.math_upper == pytest.approx(a.math_upper, rel=1e-9)


# --- Schauder schedule -------------------------------------------------------

def test_schauder_unit_terms_p2():
    d = Decomposition(np.eye(3), np.eye(3), (3, 3))
    out, sched = schauder_schedule(d, 2)
    assert sched == [2, 5, 10]
    assert phys_cost(out, 2) ** 2 < BASEL


def test_schauder_small_terms_untouched():
    ell = np.diag([0.5, 0.2, 0.1])
    d = Decomposition(ell, np.eye(3), (3, 3))
    out, sched = schauder_schedule(d, 2)
    assert sched == [1, 1, 1]
    np.testing.assert_array_equal(out.ell, d.ell)
    np.testing.assert_array_equal(out.multiplicity, 1)


def test_schauder_zero_phi_term():
    d = Decomposition([[1.0, 0.0], [3.0, 4.0]], [[0.0], [1.0]], (1, 2))
    _, sched = schauder_schedule(d, 2)
    assert sched[0] == 1


def test_schauder_is_minimal(rng):
    d = random_decomposition(rng, 50, 3, 3)
    p = 1.5
    _, sched = schauder_schedule(d, p)
    for k, (m, c) in enumerate(zip(sched, d.term_norms), start=1):
        assert m ** (1 - p) * c**p < 1 / k**2
        if m > 1:
            assert (m - 1) ** (1 - p) * c**p >= 1 / k**2 * (1 - 1e-12)


@pytest.mark.parametrize("p", [1.2, 1.5, 2, 3])
def test_schauder_basel_bound(rng, p):
    for _ in range(10):
        d = random_decomposition(rng, 50, 4, 4)
        out, sched = schauder_schedule(d, p)
        direct = math.fsum(m ** (1 - p) * c**p for m, c in zip(sched, d.term_norms))
        assert direct < BASEL
        assert schauder_sum(out, p) == pytest.approx(direct, rel=1e-12)
        assert rel_entrywise(reconstruct(out).matrix, reconstruct(d).matrix) < 1e-10


@pytest.mark.parametrize("p", [1, 0.5])
def test_schauder_rejects_p(p):
    with pytest.raises(ParameterError):
        schauder_schedule(spectral_decompose(np.eye(2)), p)


def test_schauder_rejects_grouped():
    with pytest.raises(InputError):
        schauder_schedule(dilute_uniform(spectral_decompose(np.eye(2)), 2), 2)


# --- independence-preserving split -------------------------------------------

def test_alpha_window_p2():
    lo, hi = alpha_window(2)
    assert lo == 0.5 and hi == pytest.approx(0.70711, abs=1e-5)
    assert default_alpha(2) == pytest.approx(0.60355, abs=1e-5)
    assert independent_factor(2) <= math.sqrt(2) * default_alpha(2) < 1


def test_independent_rank_and_projection(rng):
    d = random_decomposition(rng, 4, 6, 5)
    out = independent_dilute(d, 2)
    assert out.n_stored == 8
    assert out.dims == (6 + 4, 5)
    assert np.linalg.matrix_rank(out.phi_dense()) == 8
    proj = reconstruct(out).matrix[:6]
    assert rel_entrywise(proj, reconstruct(d).matrix) < 1e-10
    assert np.all(reconstruct(out).matrix[6:] == 0)


def test_independent_rank_with_dependent_input(rng):
    """Only the fresh directions are new: rank grows by exactly K."""
    d = random_decomposition(rng, 5, 3, 2)
    out = independent_dilute(d, 2)
    assert np.linalg.matrix_rank(out.phi_dense()) == 3 + 5


@pytest.mark.parametrize("p", [1.1, 1.5, 2, 4])
def test_independent_factor_exact(rng, p):
    d = random_decomposition(rng, 6, 3, 3)
    out = independent_dilute(d, p)
    alpha = default_alpha(p)
    ratio = phys_cost(out, p) / phys_cost(d, p)
    assert ratio == pytest.approx(independent_factor(p), rel=1e-12)
    assert ratio <= 2 ** (1 / p) * alpha < 1
    assert np.all(out.phi_norms <= alpha * np.repeat(d.phi_norms, 2) * (1 + 1e-15))


def test_independent_rounds(rng):
    d = random_decomposition(rng, 3, 2, 2)
    p = 2
    base = phys_cost(d, p)
    cur = d
    for _ in range(5):
        cur = independent_dilute(cur, p)
    assert cur.n_stored == 3 * 2**5
    assert phys_cost(cur, p) == pytest.approx(independent_factor(p) ** 5 * base, rel=1e-12)
    assert rel_entrywise(reconstruct(cur).matrix[:2], reconstruct(d).matrix) < 1e-10


def test_independent_zero_phi_passthrough():
    d = Decomposition([[1.0, 2.0], [0.0, 1.0]], [[0.0, 0.0], [1.0, 0.0]], (2, 2))
    out = independent_dilute(d, 2)
    assert out.n_stored == 3
    assert out.phi_norms[0] == 0


@pytest.mark.parametrize("alpha", [0.5, 0.71, 0.4])
def test_independent_rejects_alpha(alpha):
    with pytest.raises(ParameterError):
        independent_dilute(spectral_decompose(np.eye(2)), 2, alpha=alpha)


def test_independent_rejects_p():
    with pytest.raises(ParameterError):
        independent_dilute(spectral_decompose(np.eye(2)), 1)
