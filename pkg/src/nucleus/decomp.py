"""Nuclear decompositions ``Theta(x) = sum_k ell_k(x) phi_k`` of dense operators.

A :class:`Decomposition` stores functionals ``ell_k`` (as vectors in the
domain, via the Euclidean pairing) and vectors ``phi_k`` in the codomain.
Each stored term also carries an integer multiplicity ``m_k``: the stored
term stands for ``m_k`` identical copies of ``(ell_k, phi_k / m_k)``.  This
keeps dilutions with very large ``m`` (``10**6`` copies, or the schedules
needed for infinite sums) cheap and exact: the represented operator is
``sum_k phi_k ell_k^T`` whatever the multiplicities are.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ._errors import ComputationError, InputError, ParameterError
from .linop import Operator, as_operator, rho_p

__all__ = [
    "Decomposition",
    "reconstruct",
    "spectral_decompose",
    "pietsch_decompose",
    "pietsch_bound",
    "nu2_trace",
]


def _row_norms(a) -> np.ndarray:
    if sp.issparse(a):
        return np.sqrt(np.asarray(a.multiply(a).sum(axis=1)).ravel())
    return np.linalg.norm(a, axis=1)


def _as_rows(vectors, width, name):
    a = np.array(vectors, dtype=float)
    if a.size % width:
        raise InputError(f"{name} vectors must have length {width}, got array of shape {a.shape}")
    return a.reshape(-1, width)


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Ordered list of terms ``(ell_k, phi_k)`` with multiplicities.

    Parameters
    ----------
    ell : ndarray, shape (K, cols)
        Functionals, one per row.
    phi : ndarray or scipy sparse array, shape (K, rows)
        Codomain vectors, one per row.
    dims : (rows, cols)
        Shape of the represented operator.
    multiplicity : ndarray, shape (K,), optional
        Integer-valued copy counts (stored as float64), default all ones.
    """

    ell: np.ndarray
    phi: object
    dims: tuple[int, int]
    multiplicity: np.ndarray = field(default=None)

    def __post_init__(self):
        rows, cols = (int(d) for d in self.dims)
        if rows < 1 or cols < 1:
            raise InputError(f"dims must be positive, got {self.dims}")
        ell = _as_rows(self.ell, cols, "ell")
        k = ell.shape[0]
        if sp.issparse(self.phi):
            phi = sp.csr_array(self.phi, dtype=float)
            if not np.all(np.isfinite(phi.data)):
                raise InputError("phi vectors must be finite")
        else:
            phi = _as_rows(self.phi, rows, "phi")
            if not np.all(np.isfinite(phi)):
                raise InputError("phi vectors must be finite")
        if phi.shape != (k, rows):
            raise InputError(
                f"phi has shape {phi.shape}, expected ({k}, {rows}) for dims {(rows, cols)}"
            )
        if not np.all(np.isfinite(ell)):
            raise InputError("ell vectors must be finite")
        if self.multiplicity is None:
            mult = np.ones(k)
        else:
            mult = np.array(self.multiplicity, dtype=float).ravel()
            if mult.shape != (k,):
                raise InputError(f"multiplicity has length {mult.size}, expected {k}")
            if np.any(mult < 1) or np.any(mult != np.floor(mult)):
                raise InputError("multiplicities must be integers >= 1")
        ell_n = np.linalg.norm(ell, axis=1)
        phi_n = _row_norms(phi)
        dead = (ell_n == 0) & (phi_n == 0)
        if dead.any():
            raise InputError(f"term {int(np.argmax(dead))} has both ell and phi zero")
        for a in (ell, mult):
            a.setflags(write=False)
        object.__setattr__(self, "ell", ell)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "multiplicity", mult)
        object.__setattr__(self, "dims", (rows, cols))
        object.__setattr__(self, "_norms", (ell_n, phi_n))

    @classmethod
    def empty(cls, dims) -> "Decomposition":
        rows, cols = dims
        return cls(np.zeros((0, cols)), np.zeros((0, rows)), (rows, cols))

    @classmethod
    def from_terms(cls, terms, dims) -> "Decomposition":
        """Build from an iterable of ``(ell, phi)`` pairs."""
        terms = list(terms)
        rows, cols = dims
        if not terms:
            return cls.empty(dims)
        ell = np.array([np.asarray(t[0], dtype=float).ravel() for t in terms])
        phi = np.array([np.asarray(t[1], dtype=float).ravel() for t in terms])
        return cls(ell, phi, dims)

    @property
    def n_stored(self) -> int:
        """Number of stored (grouped) terms."""
        return self.ell.shape[0]

    @property
    def term_count(self) -> int:
        """Number of terms counting multiplicities."""
        return int(round(float(np.sum(self.multiplicity))))

    @property
    def ell_norms(self) -> np.ndarray:
        return self._norms[0]

    @property
    def phi_norms(self) -> np.ndarray:
        """Norms of the stored ``phi_k`` (not divided by the multiplicity)."""
        return self._norms[1]

    @property
    def term_norms(self) -> np.ndarray:
        """``c_k = ||ell_k|| ||phi_k||`` for each stored term."""
        return self._norms[0] * self._norms[1]

    def phi_dense(self) -> np.ndarray:
        return self.phi.toarray() if sp.issparse(self.phi) else np.asarray(self.phi)

    def apply(self, x) -> np.ndarray:
        """``sum_k <ell_k, x> phi_k``."""
        coeffs = self.ell @ np.asarray(x, dtype=float)
        return self.phi.T @ coeffs

    def expand(self, max_terms: int = 1_000_000) -> "Decomposition":
        """Materialize every copy explicitly, so all multiplicities become 1."""
        if self.term_count > max_terms:
            raise ComputationError(
                f"expanding would create {self.term_count} terms (limit {max_terms})"
            )
        reps = self.multiplicity.astype(np.int64)
        if np.all(reps == 1):
            return self
        idx = np.repeat(np.arange(self.n_stored), reps)
        scale = 1.0 / self.multiplicity[idx]
        phi = self.phi[idx]
        if sp.issparse(phi):
            phi = sp.csr_array(sp.diags_array(scale) @ phi)
        else:
            phi = phi * scale[:, None]
        return Decomposition(self.ell[idx], phi, self.dims)

    def to_dict(self) -> dict:
        terms = []
        phi = self.phi_dense()
        for k in range(self.n_stored):
            t = {"ell": self.ell[k].tolist(), "phi": phi[k].tolist()}
            if self.multiplicity[k] != 1:
                t["multiplicity"] = int(self.multiplicity[k])
            terms.append(t)
        return {"dims": list(self.dims), "terms": terms}

    @classmethod
    def from_dict(cls, obj) -> "Decomposition":
        try:
            rows, cols = (int(d) for d in obj["dims"])
            terms = obj["terms"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed decomposition JSON: {exc}") from None
        if not terms:
            return cls.empty((rows, cols))
        for i, t in enumerate(terms):
            if len(t.get("ell", ())) != cols or len(t.get("phi", ())) != rows:
                raise InputError(f"term {i}: expected ell of length {cols} and phi of length {rows}")
        ell = [t["ell"] for t in terms]
        phi = [t["phi"] for t in terms]
        mult = [t.get("multiplicity", 1) for t in terms]
        return cls(ell, phi, (rows, cols), mult)


def reconstruct(d: Decomposition, codomain_rows: int | None = None) -> Operator:
    """Materialize ``sum_k phi_k ell_k^T`` as a dense operator.

    Parameters
    ----------
    d : Decomposition
    codomain_rows : int, optional
        Keep only the first `codomain_rows` codomain coordinates, i.e. project
        back onto an original codomain that `d` was embedded from.
    """
    rows, cols = d.dims
    if d.n_stored == 0:
        m = np.zeros((rows, cols))
    else:
        m = np.asarray(d.phi.T @ d.ell)
    if codomain_rows is not None:
        if not 1 <= codomain_rows <= rows:
            raise InputError(f"codomain_rows must lie in [1, {rows}], got {codomain_rows}")
        m = m[:codomain_rows]
    return Operator(m)


def spectral_decompose(op) -> Decomposition:
    """Singular-value decomposition as nuclear terms.

    Terms are ``ell_k = sigma_k v_k`` and ``phi_k = u_k`` for each nonzero
    singular triple, so every ``phi_k`` is a unit vector and the weight sits
    in the functional.
    """
    op = as_operator(op)
    u, s, vt = op.svd()
    r = op.rank
    return Decomposition(s[:r, None] * vt[:r], u[:, :r].T, op.shape)


def pietsch_decompose(op, p: float) -> Decomposition:
    """Dyadic-ladder decomposition from best approximations of rank ``2**n - 2``.

    ``Theta_n`` is the spectral truncation of rank ``2**n - 2``, so
    ``||Theta - Theta_n||`` equals the approximation number
    ``alpha_{2**n - 2}``.  Each increment ``Psi_n = Theta_{n+1} - Theta_n`` is
    split into rank-one terms through its own SVD and the pieces are
    concatenated; the ladder stops once the finite rank is exhausted.

    The cost ``phys_cost(result, p)`` is at most ``2**(2 + 3/p) * rho_p(op, p)``.
    """
    if not p > 0:
        raise ParameterError(f"p must be positive, got {p}")
    op = as_operator(op)
    u, s, vt = op.svd()
    r = op.rank
    ells, phis = [], []
    n = 1
    while 2**n - 2 < r:
        lo, hi = 2**n - 2, min(2 ** (n + 1) - 2, r)
        psi = (u[:, lo:hi] * s[lo:hi]) @ vt[lo:hi]
        pu, ps, pvt = np.linalg.svd(psi, full_matrices=False)
        keep = hi - lo
        ps, pu, pvt = ps[:keep], pu[:, :keep], pvt[:keep]
        nz = ps > 0
        ells.append(ps[nz, None] * pvt[nz])
        phis.append(pu[:, nz].T)
        n += 1
    if not ells:
        return Decomposition.empty(op.shape)
    return Decomposition(np.vstack(ells), np.vstack(phis), op.shape)


def pietsch_bound(op, p: float) -> float:
    """``2**(2 + 3/p) * rho_p(op, p)``."""
    return 2.0 ** (2.0 + 3.0 / p) * rho_p(op, p)


def nu2_trace(op) -> float:
    """2-nuclearity index over orthonormal-basis decompositions: ``trace(Theta Theta^T)``.

    Computed as the sum of squared entries and checked against the sum of
    squared singular values.
    """
    op = as_operator(op)
    m = op.matrix
    tr = float(np.einsum("ij,ij->", m, m))
    ssq = float(np.sum(op.spectrum.values**2))
    if abs(tr - ssq) > 1e-10 * tr:
        raise ComputationError(
            f"trace identity violated: sum of squares {tr!r} vs sum of sigma^2 {ssq!r}"
        )
    return tr
