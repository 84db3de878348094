"""Entropy counts and growth orders from the eigenvalue decay of ``K >= 0``.

Eigenvalues are indexed from ``n = 1`` and sorted nonincreasingly.  Exact
covering numbers are not computed; :func:`entropy_bounds` brackets
``log2 N(K, eps)`` for the image ellipsoid of the unit ball instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._errors import ComputationError, InputError, ParameterError

__all__ = [
    "EigenvalueModel",
    "EntropyBounds",
    "GrowthReport",
    "m_of_eps",
    "entropy_bounds",
    "growth_orders",
]

KINDS = ("explicit", "power_law", "exponential")


@dataclass(frozen=True, eq=False)
class EigenvalueModel:
    """Eigenvalue sequence ``lambda_1 >= lambda_2 >= ... > 0``.

    Use the constructors :meth:`explicit`, :meth:`power_law`
    (``C n^{-a}``) and :meth:`exponential` (``C e^{-beta n}``).  An explicit
    list describes a finite-rank operator: ``lambda_n = 0`` past its end.
    """

    kind: str
    values: np.ndarray | None = None
    C: float = 1.0
    a: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown eigenvalue model kind {self.kind!r}")
        if self.kind == "explicit":
            v = np.array(self.values, dtype=float).ravel()
            if v.size == 0:
                raise InputError("explicit eigenvalue list is empty")
            if not np.all(np.isfinite(v)) or np.any(v <= 0):
                raise InputError("explicit eigenvalues must be finite and positive")
            if np.any(np.diff(v) > 0):
                raise InputError("explicit eigenvalues must be nonincreasing")
            v.setflags(write=False)
            object.__setattr__(self, "values", v)
        else:
            rate = self.a if self.kind == "power_law" else self.beta
            if not (self.C > 0 and rate > 0 and math.isfinite(self.C) and math.isfinite(rate)):
                raise InputError(f"{self.kind} parameters must be positive and finite")

    @classmethod
    def explicit(cls, values) -> "EigenvalueModel":
        return cls("explicit", values=values)

    @classmethod
    def power_law(cls, C: float, a: float) -> "EigenvalueModel":
        return cls("power_law", C=float(C), a=float(a))

    @classmethod
    def exponential(cls, C: float, beta: float) -> "EigenvalueModel":
        return cls("exponential", C=float(C), beta=float(beta))

    @property
    def length(self) -> float:
        """Number of nonzero eigenvalues (``inf`` for parametric models)."""
        return self.values.size if self.kind == "explicit" else math.inf

    def eigenvalues(self, n) -> np.ndarray:
        """``lambda_n`` for integer ``n >= 1`` (array input allowed)."""
        n = np.asarray(n)
        if self.kind == "explicit":
            out = np.zeros(n.shape)
            inside = n <= self.values.size
            out[inside] = self.values[n[inside] - 1]
            return out
        if self.kind == "power_law":
            return self.C * n.astype(float) ** (-self.a)
        return self.C * np.exp(-self.beta * n.astype(float))

    def log_eigenvalues(self, n) -> np.ndarray:
        n = np.asarray(n)
        if self.kind == "explicit":
            with np.errstate(divide="ignore"):
                return np.log(self.eigenvalues(n))
        if self.kind == "power_law":
            return math.log(self.C) - self.a * np.log(n.astype(float))
        return math.log(self.C) - self.beta * n.astype(float)

    def sample(self, count: int) -> "EigenvalueModel":
        """Explicit model holding the first `count` eigenvalues."""
        lam = self.eigenvalues(np.arange(1, count + 1))
        if np.any(lam == 0):
            first = int(np.argmax(lam == 0)) + 1
            raise ComputationError(f"lambda_{first} underflows to 0; sample at most {first - 1} values")
        return EigenvalueModel.explicit(lam)

    def to_dict(self) -> dict:
        if self.kind == "explicit":
            return {"kind": "explicit", "values": self.values.tolist()}
        if self.kind == "power_law":
            return {"kind": "power_law", "C": self.C, "a": self.a}
        return {"kind": "exponential", "C": self.C, "beta": self.beta}

    @classmethod
    def from_dict(cls, obj) -> "EigenvalueModel":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise InputError("eigenvalue model must be a JSON object with a 'kind' field")
        kind = obj["kind"]
        try:
            if kind == "explicit":
                return cls.explicit(obj["values"])
            if kind == "power_law":
                return cls.power_law(obj["C"], obj["a"])
            if kind == "exponential":
                return cls.exponential(obj["C"], obj["beta"])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"malformed {kind} model: {exc!r}") from None
        raise InputError(f"unknown eigenvalue model kind {kind!r}")


def _check_eps(eps: float):
    if not eps > 0:
        raise ParameterError(f"eps must be positive, got {eps}")


def m_of_eps(model: EigenvalueModel, eps: float) -> int:
    """``max{n : lambda_n > eps}``, or 0 when ``lambda_1 <= eps``.

    The inequality is strict, so an eigenvalue equal to `eps` is not counted.
    """
    _check_eps(eps)
    if model.kind == "explicit":
        return int(np.count_nonzero(model.values > eps))
    if model.C <= eps:
        return 0
    if model.kind == "power_law":
        guess = (model.C / eps) ** (1.0 / model.a)
    else:
        guess = math.log(model.C / eps) / model.beta
    if guess > 2**62:
        raise ComputationError(f"m(K, eps) ~ {guess:.3g} is too large to count")
    n = max(int(math.floor(guess)), 1)
    lam = lambda k: float(model.eigenvalues(np.array(k)))  # noqa: E731
    while n > 0 and lam(n) <= eps:
        n -= 1
    while lam(n + 1) > eps:
        n += 1
    return n


@dataclass(frozen=True)
class EntropyBounds:
    """Bracket ``lower <= log2 N(K, eps) <= upper`` for the image ellipsoid.

    ``upper`` is ``None`` when no finite truncation index ``n_star`` exists
    within the budget; ``note`` says why.
    """

    eps: float
    m: int
    lower: float
    upper: float | None
    n_star: int | None
    note: str = ""


def _tail_cut(model: EigenvalueModel, eps: float, n_max: int):
    """Smallest ``N`` with ``sum_{n > N} lambda_n^2 < eps^2/4`` (or a safe bound on it)."""
    target = eps * eps / 4.0
    if model.kind == "explicit":
        sq = model.values**2
        tails = np.concatenate((np.cumsum(sq[::-1])[::-1], [0.0]))  # tails[N] = sum_{n>N}
        return int(np.argmax(tails < target)), ""
    if model.kind == "power_law":
        a2 = 2.0 * model.a
        if a2 <= 1.0:
            return None, "sum of lambda_n^2 diverges (a <= 1/2)"
        c2 = model.C**2

        # sum_{n>N} C^2 n^{-2a} <= C^2 N^{1-2a} / (2a - 1)
        def bound(n):
            return c2 * n ** (1.0 - a2) / (a2 - 1.0)

        log_n = (math.log(c2 / ((a2 - 1.0) * target))) / (a2 - 1.0)
        if log_n > math.log(n_max) + 1:
            return None, f"truncation index exceeds n_max={n_max}"
        n = max(1, int(math.ceil(math.exp(log_n))) - 1)
        while bound(n) >= target:
            n += 1
        while n > 1 and bound(n - 1) < target:
            n -= 1
        return n, ""
    q = math.exp(-2.0 * model.beta)
    c2 = model.C**2

    # sum_{n>N} C^2 e^{-2 beta n} = C^2 q^{N+1} / (1 - q)
    def tail(n):
        return c2 * q ** (n + 1) / (1.0 - q)

    n = max(0, int(math.floor(math.log(target * (1.0 - q) / c2) / math.log(q))) - 1)
    while tail(n) >= target:
        n += 1
    while n > 0 and tail(n - 1) < target:
        n -= 1
    return n, ""


def entropy_bounds(model: EigenvalueModel, eps: float, n_max: int = 10_000_000) -> EntropyBounds:
    """Volumetric lower and truncated-product upper estimates of ``log2 N(K, eps)``.

    ``lower = sum_{lambda_n > eps} log2(lambda_n / eps)``;
    ``upper = sum_{n <= n*} log2(1 + 2 lambda_n / eps)`` where ``n*`` is the
    first index whose eigenvalue tail satisfies
    ``sum_{n > n*} lambda_n^2 < eps^2 / 4``.

    Parameters
    ----------
    model : EigenvalueModel
    eps : float
    n_max : int
        Largest number of eigenvalues that may be summed.  Must be at least
        ``m_of_eps(model, eps)``.
    """
    _check_eps(eps)
    m = m_of_eps(model, eps)
    if m > n_max:
        raise ParameterError(f"n_max={n_max} is below m(K, eps)={m}")
    n = np.arange(1, m + 1)
    lower = float(np.sum(model.log_eigenvalues(n) - math.log(eps)) / math.log(2.0)) if m else 0.0
    n_star, note = _tail_cut(model, eps, n_max)
    if n_star is not None and n_star > n_max:
        n_star, note = None, f"truncation index {n_star} exceeds n_max={n_max}"
    if n_star is None:
        return EntropyBounds(eps, m, lower, None, None, note or "upper bound unavailable")
    n_star = max(n_star, m)
    lam = model.eigenvalues(np.arange(1, n_star + 1))
    upper = float(np.sum(np.log1p(2.0 * lam / eps)) / math.log(2.0))
    return EntropyBounds(eps, m, lower, max(upper, lower), n_star)


@dataclass(frozen=True)
class GrowthReport:
    """Upper and lower growth orders ``D(K)``, ``d(K)``.

    ``window`` is the ``(first, last)`` eigenvalue index range used by the
    regression; ``None`` for analytic results.
    """

    D_estimate: float
    d_estimate: float
    method: str
    window: tuple[int, int] | None = None
    window_size: int | None = None


def growth_orders(model: EigenvalueModel, tail_fraction: float = 0.5,
                  window_size: int | None = None) -> GrowthReport:
    """Growth orders from ``r_n = log n / log(1/lambda_n)``.

    Parametric models are handled in closed form: ``n^{-a}`` decay gives
    ``D = d = 1/a`` and exponential decay gives ``D = d = 0``.  For explicit
    lists the limsup and liminf of ``r_n`` are estimated by the largest and
    smallest mean over sliding windows of ``sqrt(N)`` consecutive points in
    the last `tail_fraction` of the list, skipping ``lambda_n >= 1``.
    """
    if model.kind == "power_law":
        return GrowthReport(1.0 / model.a, 1.0 / model.a, "analytic")
    if model.kind == "exponential":
        return GrowthReport(0.0, 0.0, "analytic")
    size = model.values.size
    if size < 16:
        raise InputError(f"growth-order regression needs at least 16 eigenvalues, got {size}")
    start = max(2, int(size * (1.0 - tail_fraction)) + 1)
    n = np.arange(start, size + 1)
    denom = -np.log(model.values[n - 1])
    ok = denom > 0
    if not ok.any():
        raise ComputationError("all tail eigenvalues are >= 1; log n / log(1/lambda_n) is undefined")
    n, denom = n[ok], denom[ok]
    r = np.log(n) / denom
    w = window_size or max(1, int(math.isqrt(size)))
    w = min(w, r.size)
    csum = np.concatenate(([0.0], np.cumsum(r)))
    means = (csum[w:] - csum[:-w]) / w
    return GrowthReport(float(means.max()), float(means.min()), "regression",
                        (int(n[0]), int(n[-1])), w)
