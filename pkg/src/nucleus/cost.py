"""Cost functionals of a single decomposition.

``phys_cost`` is the product-norm sum ``(sum_k ||ell_k||^p ||phi_k||^p)^(1/p)``
that the physicists' nuclearity index minimizes; ``math_cost`` is the split
functional of the mathematicians' index with the conjugate exponent
``p* = p / (p - 1)``.  Both evaluate one given decomposition, so as
statements about the index of the operator they are upper bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._errors import ParameterError
from .decomp import Decomposition
from .linop import lp_sum
from .mixednorm import NormBound, two_to_q_norm

__all__ = ["CostReport", "phys_cost", "math_cost", "conjugate_exponent"]


def conjugate_exponent(p: float) -> float:
    """``p* = p / (p - 1)``, with ``1* = inf`` and ``inf* = 1``."""
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def _parse_p(p) -> float:
    if isinstance(p, str):
        p = p.strip().lower()
        if p in ("inf", "infinity", "∞"):
            return math.inf
    try:
        return float(p)
    except (TypeError, ValueError):
        raise ParameterError(f"invalid exponent {p!r}") from None


def phys_cost(d: Decomposition, p: float) -> float:
    """``(sum_k ||ell_k||^p ||phi_k||^p)^(1/p)`` over all copies of all terms.

    A stored term with multiplicity ``m`` contributes ``m^(1-p) c^p`` where
    ``c = ||ell|| ||phi||``.  ``p = inf`` gives ``max_k c_k / m_k``.
    """
    p = _parse_p(p)
    if not p > 0:
        raise ParameterError(f"p must be positive, got {p}")
    c = d.term_norms
    m = d.multiplicity
    nz = c > 0
    if not nz.any():
        return 0.0
    c, m = c[nz], m[nz]
    if math.isinf(p):
        return float(np.max(c / m))
    # effective per-copy norms; m^0 == 1 exactly, so p = 1 is untouched by dilution
    with np.errstate(over="ignore", under="ignore"):
        eff = c * m ** ((1.0 - p) / p)
    if np.all(np.isfinite(eff)) and np.all(eff > 0):
        return lp_sum(eff, p)
    logs = (1.0 - p) * np.log(m) + p * np.log(c)
    top = logs.max()
    return float(np.exp((top + np.log(np.sum(np.exp(logs - top)))) / p))


@dataclass(frozen=True)
class CostReport:
    """Both cost functionals of one decomposition at one exponent.

    ``bound_kind`` qualifies how ``math_cost`` was evaluated: ``"exact"`` or
    ``"interval"`` (then ``math_lower <= true value <= math_upper``).
    """

    p: float
    phys_cost: float
    math_lower: float
    math_upper: float
    bound_kind: str
    term_count: int
    witness: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def math_cost(self) -> float:
        if self.bound_kind != "exact":
            raise ValueError("math_cost is only known up to an interval; see math_lower/math_upper")
        return self.math_lower

    def to_dict(self) -> dict:
        if self.bound_kind == "exact":
            mc = {"value": self.math_lower, "bound_kind": "exact"}
        else:
            mc = {"interval": [self.math_lower, self.math_upper], "bound_kind": self.bound_kind}
        return {
            "p": "inf" if math.isinf(self.p) else self.p,
            "phys_cost": self.phys_cost,
            "math_cost": mc,
            "term_count": self.term_count,
        }


def math_cost(d: Decomposition, p, *, n_starts: int = 64, seed: int = 0) -> CostReport:
    """Evaluate the split functional of one decomposition, ``1 <= p <= inf``.

    * ``p = 1``: ``(sum ||ell_k||) * sup_k ||phi_k||``.
    * ``1 < p < inf``: ``(sum ||ell_k||^p)^(1/p) * ||Phi||_{2->p*}`` where the
      rows of ``Phi`` are the ``phi_k``.
    * ``p = inf``: ``(sup_k ||ell_k||) * ||Phi||_{2->1}``.

    Copies from multiplicities are accounted for exactly.  The mixed norm is
    exact for ``p*`` in ``{2, inf}`` and for ``p* = 1`` with at most 20
    stored terms; otherwise an interval is reported.
    """
    p = _parse_p(p)
    if not p >= 1:
        raise ParameterError(f"math_cost needs p >= 1 (got {p}); use phys_cost for p < 1")
    ln = d.ell_norms
    m = d.multiplicity
    pc = phys_cost(d, p)
    if d.n_stored == 0:
        return CostReport(p, 0.0, 0.0, 0.0, "exact", 0)

    if p == 1:
        ell_part = float(np.sum(m * ln))
        bound = NormBound(*(2 * [float(np.max(d.phi_norms / m))]), "exact")
    elif math.isinf(p):
        ell_part = float(np.max(ln))
        bound = two_to_q_norm(d.phi_dense(), 1.0, n_starts=n_starts, seed=seed)
    else:
        q = conjugate_exponent(p)
        ell_part = lp_sum(ln * m ** (1.0 / p), p)
        rows = d.phi_dense() * (m ** (-1.0 / p))[:, None]
        bound = two_to_q_norm(rows, q, n_starts=n_starts, seed=seed)
    return CostReport(
        p=p,
        phys_cost=pc,
        math_lower=ell_part * bound.lower,
        math_upper=ell_part * bound.upper,
        bound_kind=bound.kind,
        term_count=d.term_count,
        witness=bound.witness,
    )
