"""Dense operators, singular spectra and approximation numbers.

All operators act between Euclidean spaces, ``R^cols -> R^rows``, with the
Euclidean norm on both sides.  In that (Hilbert space) setting the k'th
approximation number, the operator-norm distance to the rank-<=k operators,
is the (k+1)'th singular value (Eckart-Young-Mirsky).  Approximation numbers
for other norms on domain or codomain are *not* provided.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._errors import InputError, ParameterError

__all__ = [
    "REL_ZERO_TOL",
    "Operator",
    "SingularSpectrum",
    "as_operator",
    "singular_spectrum",
    "approximation_numbers",
    "rho_p",
    "lp_sum",
]

#: singular values below this fraction of the largest one are flushed to 0
REL_ZERO_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Operator:
    """A real dense matrix viewed as a map ``R^cols -> R^rows``.

    The entries are copied and frozen on construction; the singular spectrum
    is computed lazily and cached.
    """

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float, copy=True)
        if m.ndim != 2:
            raise InputError(f"operator must be a 2-D array, got ndim={m.ndim}")
        if m.shape[0] < 1 or m.shape[1] < 1:
            raise InputError(f"operator must have rows >= 1 and cols >= 1, got {m.shape}")
        bad = ~np.isfinite(m)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise InputError(f"non-finite entry at row {i}, col {j}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Sequence[float]) -> "Operator":
        """Build from a row-major flat list of ``rows * cols`` entries."""
        if rows < 1 or cols < 1:
            raise InputError(f"rows and cols must be >= 1, got {rows}x{cols}")
        entries = np.asarray(entries, dtype=float).ravel()
        if entries.size != rows * cols:
            raise InputError(
                f"expected {rows * cols} entries for a {rows}x{cols} operator, got {entries.size}"
            )
        return cls(entries.reshape(rows, cols))

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @property
    def entries(self) -> np.ndarray:
        """Row-major flat view of the entries."""
        return self.matrix.ravel()

    @functools.cached_property
    def _svd(self):
        u, s, vt = np.linalg.svd(self.matrix, full_matrices=False)
        if s.size and s[0] > 0:
            s = np.where(s < REL_ZERO_TOL * s[0], 0.0, s)
        else:
            s = np.zeros_like(s)
        for a in (u, s, vt):
            a.setflags(write=False)
        return u, s, vt

    @property
    def spectrum(self) -> "SingularSpectrum":
        return SingularSpectrum(self._svd[1])

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self._svd[1]))

    def svd(self):
        """Thin SVD ``(U, s, Vt)`` with flushed singular values.  Read-only arrays."""
        return self._svd

    def norm(self) -> float:
        """Operator norm (largest singular value)."""
        s = self._svd[1]
        return float(s[0]) if s.size else 0.0

    def __matmul__(self, x):
        return self.matrix @ x

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


@dataclass(frozen=True, eq=False)
class SingularSpectrum:
    """Nonincreasing, nonnegative singular values of an :class:`Operator`."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1:
            raise InputError("singular spectrum must be one-dimensional")
        if np.any(v < 0) or np.any(np.diff(v) > 0):
            raise InputError("singular values must be nonnegative and nonincreasing")
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size

    def __getitem__(self, k):
        return self.values[k]

    def __iter__(self):
        return iter(self.values)

    def tolist(self) -> list[float]:
        return self.values.tolist()


def as_operator(op) -> Operator:
    """Coerce an array-like or :class:`Operator` to an :class:`Operator`."""
    if isinstance(op, Operator):
        return op
    return Operator(np.asarray(op, dtype=float))


def singular_spectrum(op) -> SingularSpectrum:
    """All ``min(rows, cols)`` singular values, nonincreasing.

    Values below ``REL_ZERO_TOL`` times the largest value are set to exactly
    zero so that the numerical rank is visible in the output.

    >>> singular_spectrum([[3, 0, 0], [0, 2, 0], [0, 0, 1]]).tolist()
    [3.0, 2.0, 1.0]
    """
    return as_operator(op).spectrum


def approximation_numbers(op) -> np.ndarray:
    """Approximation numbers ``(alpha_0, ..., alpha_{min(rows,cols)-1})``.

    ``alpha_k`` is the distance in operator norm from `op` to the operators
    of rank at most ``k``.  With Euclidean norms this is the ``(k+1)``'th
    singular value, so ``alpha_0`` is the operator norm and ``alpha_k = 0``
    for ``k >= rank``.
    """
    return singular_spectrum(op).values.copy()


def lp_sum(values, p: float) -> float:
    """``(sum |v|^p)^(1/p)`` for ``p > 0``, computed with scaling to avoid overflow."""
    if not p > 0:
        raise ParameterError(f"p must be positive, got {p}")
    v = np.abs(np.asarray(values, dtype=float))
    if v.size == 0:
        return 0.0
    top = v.max()
    if top == 0:
        return 0.0
    return float(top * np.sum((v / top) ** p) ** (1.0 / p))


def rho_p(op, p: float) -> float:
    """ell^p norm of the approximation numbers of `op`.

    Parameters
    ----------
    op : Operator or array_like
    p : float
        Positive exponent.  Values in ``(0, 1)`` are allowed.

    Returns
    -------
    float
        ``(sum_k alpha_k^p)^(1/p)``; zero for the zero operator.
    """
    if not p > 0:
        raise ParameterError(f"p must be positive, got {p}")
    return lp_sum(singular_spectrum(op).values, p)
