"""Bounds on the mixed norm ``||A||_{2->q} = max_{||a||_2 <= 1} ||A a||_q``.

The value is computed exactly for ``q = 2`` (spectral norm), ``q = inf``
(largest row norm) and ``q = 1`` with few rows (sign-pattern enumeration).
Otherwise an interval is returned: the lower end comes from multi-start
ascent and carries its witness vector, the upper end from log-convexity of
``q -> ||y||_q`` between exactly computable endpoints.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

__all__ = ["NormBound", "two_to_q_norm", "two_to_one_exact", "ascent_lower_bound"]

MAX_ENUM_ROWS = 20
_ENUM_CHUNK = 1 << 14


@dataclass(frozen=True)
class NormBound:
    lower: float
    upper: float
    kind: str  # "exact" or "interval"
    witness: np.ndarray | None = None

    @property
    def value(self) -> float:
        if self.kind != "exact":
            raise ValueError("norm is only known up to an interval")
        return self.lower

    def __mul__(self, c: float) -> "NormBound":
        return NormBound(self.lower * c, self.upper * c, self.kind, self.witness)

    __rmul__ = __mul__


def _qnorm(y: np.ndarray, q: float, axis=0) -> np.ndarray:
    y = np.abs(y)
    if np.isinf(q):
        return y.max(axis=axis)
    top = y.max(axis=axis, keepdims=True)
    safe = np.where(top > 0, top, 1.0)
    return np.squeeze(safe, axis=axis) * np.sum((y / safe) ** q, axis=axis) ** (1.0 / q)


def two_to_one_exact(a: np.ndarray):
    """``max_s ||A^T s||_2`` over sign vectors ``s``; returns ``(value, witness)``.

    Fixing ``s_0 = +1`` halves the ``2**K`` patterns.  Intended for ``K <= 20``.
    """
    k, n = a.shape
    if k == 0:
        return 0.0, np.zeros(n)
    if k == 1:
        nv = float(np.linalg.norm(a[0]))
        return nv, (a[0] / nv if nv > 0 else np.zeros(n))
    best, best_s = -1.0, None
    rest = a[1:]
    head = a[0]
    patterns = itertools.product((1.0, -1.0), repeat=k - 1)
    while True:
        chunk = np.array(list(itertools.islice(patterns, _ENUM_CHUNK)))
        if chunk.size == 0:
            break
        v = head + chunk @ rest
        norms = np.linalg.norm(v, axis=1)
        i = int(np.argmax(norms))
        if norms[i] > best:
            best = float(norms[i])
            best_s = np.concatenate(([1.0], chunk[i]))
    v = a.T @ best_s
    nv = np.linalg.norm(v)
    witness = v / nv if nv > 0 else np.zeros(n)
    return best, witness


def ascent_lower_bound(a: np.ndarray, q: float, n_starts: int = 64, seed: int = 0,
                       max_iter: int = 500, tol: float = 1e-14):
    """Best value of projected gradient ascent on ``||A x||_q`` over the unit ball.

    Maximizing a convex function over the ball, each step to the normalized
    gradient never decreases the objective, so every run is monotone.  The
    starts are the top right singular vectors plus Gaussian draws from a
    fixed seed.
    """
    k, n = a.shape
    rng = np.random.default_rng(seed)
    _, _, vt = np.linalg.svd(a, full_matrices=False)
    starts = [vt[: min(4, vt.shape[0])].T]
    if n_starts > starts[0].shape[1]:
        starts.append(rng.standard_normal((n, n_starts - starts[0].shape[1])))
    x = np.hstack(starts)[:, :n_starts]
    x /= np.linalg.norm(x, axis=0, keepdims=True)
    prev = _qnorm(a @ x, q)
    for _ in range(max_iter):
        y = a @ x
        if np.isinf(q):
            g_y = np.zeros_like(y)
            idx = np.argmax(np.abs(y), axis=0)
            cols = np.arange(y.shape[1])
            g_y[idx, cols] = np.sign(y[idx, cols])
        else:
            g_y = np.sign(y) * np.abs(y) ** (q - 1)
        g = a.T @ g_y
        gn = np.linalg.norm(g, axis=0, keepdims=True)
        gn[gn == 0] = 1.0
        x_new = g / gn
        cur = _qnorm(a @ x_new, q)
        improved = cur >= prev
        x = np.where(improved, x_new, x)
        cur = np.maximum(cur, prev)
        if np.all(cur - prev <= tol * np.maximum(cur, 1e-300)):
            prev = cur
            break
        prev = cur
    i = int(np.argmax(prev))
    return float(prev[i]), x[:, i].copy()


def two_to_q_norm(a, q: float, *, n_starts: int = 64, seed: int = 0,
                  max_enum_rows: int = MAX_ENUM_ROWS) -> NormBound:
    """Exact value or certified interval for ``||A||_{2->q}``, ``1 <= q <= inf``.

    Parameters
    ----------
    a : array_like, shape (K, n)
        The rows are the vectors being paired with the unit ball of ``R^n``.
    q : float
        Target exponent, ``np.inf`` allowed.

    Returns
    -------
    NormBound
        ``kind == "exact"`` when ``lower == upper`` is the true value.
    """
    a = np.asarray(a, dtype=float)
    if not q >= 1:
        raise ValueError(f"q must be >= 1, got {q}")
    k, n = a.shape
    if k == 0 or not np.any(a):
        return NormBound(0.0, 0.0, "exact", np.zeros(n))

    row_norms = np.linalg.norm(a, axis=1)
    if np.isinf(q):
        i = int(np.argmax(row_norms))
        return NormBound(float(row_norms[i]), float(row_norms[i]), "exact", a[i] / row_norms[i])

    _, s, vt = np.linalg.svd(a, full_matrices=False)
    spec = float(s[0])
    if q == 2:
        return NormBound(spec, spec, "exact", vt[0].copy())

    if q == 1 and k <= max_enum_rows:
        val, w = two_to_one_exact(a)
        return NormBound(val, val, "exact", w)

    lower, witness = ascent_lower_bound(a, q, n_starts=n_starts, seed=seed)
    # ||y||_q <= (sum ||a_k||^q)^(1/q) because |<a_k, x>| <= ||a_k||
    upper = float(_qnorm(row_norms, q)) if q > 1 else float(row_norms.sum())
    if q > 2:
        theta = 2.0 / q
        upper = min(upper, spec**theta * float(row_norms.max()) ** (1.0 - theta))
    elif q > 1:
        theta = 2.0 * (1.0 - 1.0 / q)
        if k <= max_enum_rows:
            one = two_to_one_exact(a)[0]
        else:
            one = min(float(row_norms.sum()), np.sqrt(k) * spec)
        upper = min(upper, one ** (1.0 - theta) * spec**theta)
    else:
        upper = min(upper, np.sqrt(k) * spec)
    upper = max(upper, lower)
    return NormBound(lower, upper, "interval", witness)
