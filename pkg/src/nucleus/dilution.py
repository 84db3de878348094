"""Transformations that keep the represented operator but shrink ``phys_cost``.

For ``p > 1`` the product-norm cost can be driven to zero without changing
the operator, by splitting terms into many smaller ones:

* :func:`dilute_uniform` replaces every term by ``m`` copies of
  ``(ell, phi / m)``; the cost scales by ``m^{-(p-1)/p}``.
* :func:`schauder_schedule` picks a per-term ``m_k`` so that
  ``m_k^{1-p} c_k^p < 1/k^2``, making the ``p``'th power of the cost
  smaller than ``pi^2 / 6`` for any term sequence.
* :func:`independent_dilute` splits each term into two terms with linearly
  independent vectors, at a cost factor strictly below one.
"""

from __future__ import annotations

import math
import numbers

import numpy as np
import scipy.sparse as sp

from ._errors import ComputationError, InputError, ParameterError
from .decomp import Decomposition

__all__ = [
    "dilute_uniform",
    "uniform_factor",
    "schauder_schedule",
    "schauder_sum",
    "alpha_window",
    "default_alpha",
    "independent_factor",
    "independent_dilute",
]

BASEL = math.pi**2 / 6


def _check_integer(m, name="m", minimum=2) -> int:
    if isinstance(m, bool) or not isinstance(m, (numbers.Integral, float, np.floating)):
        raise ParameterError(f"{name} must be an integer, got {m!r}")
    if float(m) != math.floor(float(m)):
        raise ParameterError(f"{name} must be an integer, got {m!r}")
    m = int(m)
    if m < minimum:
        raise ParameterError(f"{name} must be >= {minimum}, got {m}")
    return m


def uniform_factor(m: int, p: float) -> float:
    """Cost ratio ``m^{-(p-1)/p}`` of a uniform ``m``-fold dilution."""
    return float(m) ** (-(p - 1.0) / p)


def dilute_uniform(d: Decomposition, m: int) -> Decomposition:
    """Replace each term ``(ell, phi)`` by ``m`` copies of ``(ell, phi / m)``.

    The copies are kept grouped through the multiplicity field, so
    ``reconstruct`` of the result is bitwise identical to that of `d`.
    """
    m = _check_integer(m)
    return Decomposition(d.ell, d.phi, d.dims, d.multiplicity * m)


def _check_simple(d: Decomposition):
    if np.any(d.multiplicity != 1):
        raise InputError("expected a decomposition without grouped copies; call expand() first")


def schauder_schedule(d: Decomposition, p: float):
    """Per-term dilution making ``sum_k m_k^{1-p} c_k^p < pi^2/6``.

    ``m_k`` is the smallest integer with ``m_k^{1-p} c_k^p < 1/k^2``
    (terms numbered from ``k = 1``, ``c_k = ||ell_k|| ||phi_k||``), i.e.
    ``floor((k^2 c_k^p)^{1/(p-1)}) + 1``, at least 1.  Terms with ``c_k = 0``
    keep ``m_k = 1``.

    Returns
    -------
    diluted : Decomposition
    schedule : list of int
    """
    if not p > 1:
        raise ParameterError(f"schauder_schedule needs p > 1, got {p}")
    _check_simple(d)
    schedule = []
    for k, c in enumerate(d.term_norms, start=1):
        if c == 0:
            schedule.append(1)
            continue
        log_target = -2.0 * math.log(k)
        log_x = (2.0 * math.log(k) + p * math.log(c)) / (p - 1.0)
        if log_x < 0:
            m = 1
        elif log_x > 709:
            raise ComputationError(f"term {k}: dilution count exp({log_x:.1f}) overflows float64")
        else:
            m = math.floor(math.exp(log_x)) + 1
        m = max(m, 1)
        while not ((1.0 - p) * math.log(m) + p * math.log(c) < log_target):
            m += max(1, m >> 40)
        schedule.append(m)
    diluted = Decomposition(d.ell, d.phi, d.dims, np.array(schedule, dtype=float))
    return diluted, schedule


def schauder_sum(d: Decomposition, p: float) -> float:
    """``sum_k m_k^{1-p} c_k^p``, the ``p``'th power of ``phys_cost``."""
    c = d.term_norms
    nz = c > 0
    return float(np.sum(np.exp((1.0 - p) * np.log(d.multiplicity[nz]) + p * np.log(c[nz]))))


def alpha_window(p: float) -> tuple[float, float]:
    """Open interval ``(1/2, 2^{-1/p})`` of admissible shrink ratios."""
    if not p > 1:
        raise ParameterError(f"p must exceed 1, got {p}")
    return 0.5, 2.0 ** (-1.0 / p)


def default_alpha(p: float) -> float:
    lo, hi = alpha_window(p)
    return 0.5 * (lo + hi)


def _split_ratio(alpha: float) -> float:
    # ||phi/2 +- s e|| / ||phi|| with s = 0.9 ||phi|| sqrt(alpha^2 - 1/4)
    return math.sqrt(0.25 + 0.81 * (alpha * alpha - 0.25))


def independent_factor(p: float, alpha: float | None = None) -> float:
    """Exact cost factor of one :func:`independent_dilute` round (``< 2^{1/p} alpha``)."""
    if alpha is None:
        alpha = default_alpha(p)
    return 2.0 ** (1.0 / p) * _split_ratio(alpha)


def independent_dilute(d: Decomposition, p: float, alpha: float | None = None) -> Decomposition:
    """Split each term in two, with vectors ``phi/2 +- s_j e_j`` in fresh directions.

    The codomain is embedded in ``R^{rows + K}`` (``K`` stored terms); ``e_j``
    is the ``(rows + j)``'th basis vector.  With
    ``s_j = 0.9 ||phi_j|| sqrt(alpha^2 - 1/4)`` both halves have norm at most
    ``alpha ||phi_j||`` and the cost is multiplied by :func:`independent_factor`.  Terms with
    ``phi_j = 0`` are carried over unsplit.  The represented operator,
    restricted to the first ``rows`` codomain coordinates, is unchanged; the
    added coordinates cancel in pairs.

    The span of the output vectors is ``span(phi) + span(e_j)``, so they are
    linearly independent (rank ``2K``) exactly when the input ``phi`` are.
    Spectral decompositions and earlier rounds of this function qualify.

    The output ``phi`` is stored sparse so that repeated rounds stay cheap.
    """
    lo, hi = alpha_window(p)
    if alpha is None:
        alpha = default_alpha(p)
    if not lo < alpha < hi:
        raise ParameterError(f"alpha must lie in ({lo}, {hi}) for p={p}, got {alpha}")
    _check_simple(d)
    rows, cols = d.dims
    k = d.n_stored
    if k == 0:
        return d
    s = 0.9 * d.phi_norms * math.sqrt(alpha * alpha - 0.25)
    half = sp.csr_array(d.phi) * 0.5
    ext = sp.diags_array(s, format="csr")
    plus = sp.hstack([half, ext], format="csr")
    minus = sp.hstack([half, -ext], format="csr")
    stacked = sp.vstack([plus, minus], format="csr")
    split = d.phi_norms > 0
    # interleave (j,+), (j,-) and drop the second copy of unsplit terms
    order = np.column_stack([np.arange(k), k + np.arange(k)])
    keep = np.column_stack([np.ones(k, bool), split])
    idx = order[keep]
    phi = stacked[idx]
    phi.eliminate_zeros()
    ell = d.ell[idx % k]
    return Decomposition(ell, phi, (rows + k, cols))
