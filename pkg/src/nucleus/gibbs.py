"""Gibbs-damped diagonal operators ``diag(exp(-beta e_n))``.

A toy family for studying how rho_p and the 2-nuclearity trace grow as the
inverse temperature ``beta`` goes to zero.  It is not a model of any
particular field theory.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from ._errors import ComputationError, InputError, ParameterError
from .linop import Operator, lp_sum

__all__ = [
    "EnergySpectrum",
    "SweepRow",
    "SweepTable",
    "gibbs_operator",
    "gibbs_weights",
    "truncation_dim",
    "beta_sweep",
    "geometric_betas",
]

MAX_TERMS = 1_000_000
NEXT_TERM_RTOL = 1e-16


@dataclass(frozen=True, eq=False)
class EnergySpectrum:
    """Nondecreasing energies ``e_1 <= e_2 <= ...``.

    ``linear``: ``e_n = omega n``; ``power``: ``e_n = c n^gamma``;
    ``explicit``: a finite list.
    """

    kind: str
    omega: float = 1.0
    c: float = 1.0
    gamma: float = 1.0
    values: np.ndarray | None = None

    def __post_init__(self):
        if self.kind == "linear":
            if not (self.omega > 0 and math.isfinite(self.omega)):
                raise InputError(f"omega must be positive, got {self.omega}")
        elif self.kind == "power":
            if not (self.c > 0 and self.gamma > 0 and math.isfinite(self.c * self.gamma)):
                raise InputError(f"c and gamma must be positive, got {self.c}, {self.gamma}")
        elif self.kind == "explicit":
            v = np.array(self.values, dtype=float).ravel()
            if v.size == 0 or not np.all(np.isfinite(v)) or np.any(v < 0) or np.any(np.diff(v) < 0):
                raise InputError("explicit energies must be a nonempty nondecreasing list of nonnegative numbers")
            v.setflags(write=False)
            object.__setattr__(self, "values", v)
        else:
            raise InputError(f"unknown energy spectrum kind {self.kind!r}")

    @classmethod
    def linear(cls, omega: float) -> "EnergySpectrum":
        return cls("linear", omega=float(omega))

    @classmethod
    def power(cls, c: float, gamma: float) -> "EnergySpectrum":
        return cls("power", c=float(c), gamma=float(gamma))

    @classmethod
    def explicit(cls, values) -> "EnergySpectrum":
        return cls("explicit", values=values)

    @property
    def max_dim(self) -> float:
        return self.values.size if self.kind == "explicit" else math.inf

    def energies(self, dim: int) -> np.ndarray:
        """``(e_1, ..., e_dim)``."""
        if dim < 1:
            raise ParameterError(f"dim must be >= 1, got {dim}")
        if dim > self.max_dim:
            raise ParameterError(f"explicit spectrum has only {self.values.size} levels, asked for {dim}")
        n = np.arange(1, dim + 1, dtype=float)
        if self.kind == "linear":
            return self.omega * n
        if self.kind == "power":
            return self.c * n**self.gamma
        return self.values[:dim].copy()

    def to_dict(self) -> dict:
        if self.kind == "linear":
            return {"kind": "linear", "omega": self.omega}
        if self.kind == "power":
            return {"kind": "power", "c": self.c, "gamma": self.gamma}
        return {"kind": "explicit", "values": self.values.tolist()}

    @classmethod
    def from_dict(cls, obj) -> "EnergySpectrum":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise InputError("energy spectrum must be a JSON object with a 'kind' field")
        kind = obj["kind"]
        try:
            if kind == "linear":
                return cls.linear(obj["omega"])
            if kind == "power":
                return cls.power(obj["c"], obj["gamma"])
            if kind == "explicit":
                return cls.explicit(obj["values"])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"malformed {kind} spectrum: {exc!r}") from None
        raise InputError(f"unknown energy spectrum kind {kind!r}")


def _check_beta(beta: float):
    if not (beta > 0 and math.isfinite(beta)):
        raise ParameterError(f"beta must be positive, got {beta}")


def gibbs_weights(spec: EnergySpectrum, beta: float, dim: int) -> np.ndarray:
    """Diagonal entries ``exp(-beta e_n)``, ``n = 1..dim``."""
    _check_beta(beta)
    return np.exp(-beta * spec.energies(dim))


def gibbs_operator(spec: EnergySpectrum, beta: float, dim: int) -> Operator:
    """Dense diagonal operator ``diag(exp(-beta e_1), ..., exp(-beta e_dim))``."""
    return Operator(np.diag(gibbs_weights(spec, beta, dim)))


def truncation_dim(spec: EnergySpectrum, beta: float, p: float, cap: int = MAX_TERMS) -> int | None:
    """Number of levels needed before the next term of ``sum exp(-q beta e_n)`` drops
    below ``1e-16`` of the running sum, for ``q = min(p, 2)``.

    Both rho_p (exponent ``p``) and the trace (exponent 2) are covered.  An
    explicit spectrum is finite and needs no truncation.  Returns ``None``
    if the rule is not met within `cap` levels.
    """
    _check_beta(beta)
    if spec.kind == "explicit":
        return spec.values.size
    q = min(p, 2.0)
    total, done, chunk = 0.0, 0, 1024
    while done < cap:
        size = min(chunk, cap - done)
        e = spec.energies(done + size)[done:]
        terms = np.exp(-q * beta * e)
        running = total + np.cumsum(terms)
        # next term (index i+1) compared with the sum through index i
        nxt = terms[1:]
        hit = np.nonzero(nxt < NEXT_TERM_RTOL * running[:-1])[0]
        if hit.size:
            return done + int(hit[0]) + 1
        total = running[-1]
        done += size
        if done < cap:
            e_next = spec.energies(done + 1)[-1]
            if math.exp(-q * beta * e_next) < NEXT_TERM_RTOL * total:
                return done
        chunk *= 2
    return None


@dataclass(frozen=True)
class SweepRow:
    beta: float
    rho_p: float
    nu2: float
    log_slope: float | None
    dim: int


@dataclass(frozen=True)
class SweepTable:
    p: float
    rows: tuple[SweepRow, ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("beta,rho_p,nu2,log_slope\n")
        for r in self.rows:
            slope = "" if r.log_slope is None else f"{r.log_slope:.17g}"
            buf.write(f"{r.beta:.17g},{r.rho_p:.17g},{r.nu2:.17g},{slope}\n")
        return buf.getvalue()


def _smallest_admissible_beta(spec, p, dim, hi):
    """Bisect (in log beta) for the smallest beta whose truncation fits in `dim`."""
    lo = hi
    while truncation_dim(spec, lo, p, cap=dim) is not None:
        lo /= 2.0
        if lo < 1e-300:
            return 0.0
    for _ in range(60):
        mid = math.sqrt(lo * hi)
        if truncation_dim(spec, mid, p, cap=dim) is None:
            lo = mid
        else:
            hi = mid
    return hi


def geometric_betas(start: float, stop: float, count: int) -> list[float]:
    """``count`` geometrically spaced values from `start` to `stop`."""
    if count < 1:
        raise ParameterError(f"count must be >= 1, got {count}")
    _check_beta(start)
    _check_beta(stop)
    if count == 1:
        return [float(start)]
    return np.geomspace(start, stop, count).tolist()


def beta_sweep(spec: EnergySpectrum, betas, p: float, dim: int = MAX_TERMS) -> SweepTable:
    """rho_p, the trace ``nu2`` and log-log slopes along a decreasing beta grid.

    Parameters
    ----------
    spec : EnergySpectrum
    betas : sequence of float
        Strictly decreasing positive inverse temperatures.
    p : float
    dim : int
        Largest number of levels that may be used.  Each beta is truncated by
        the next-term rule of :func:`truncation_dim`; if that needs more than
        `dim` levels a :class:`ComputationError` names the smallest beta that
        would fit.

    Returns
    -------
    SweepTable
        ``log_slope`` of row ``i`` is the finite difference of ``log rho_p``
        against ``log(1/beta)`` between rows ``i - 1`` and ``i``; ``None`` in
        the first row.
    """
    if not p > 0:
        raise ParameterError(f"p must be positive, got {p}")
    betas = [float(b) for b in betas]
    if not betas:
        raise ParameterError("betas must not be empty")
    for b in betas:
        _check_beta(b)
    if any(b1 <= b2 for b1, b2 in zip(betas, betas[1:])):
        raise ParameterError("betas must be strictly decreasing")
    dim = min(int(dim), MAX_TERMS) if spec.kind != "explicit" else int(dim)
    smallest = betas[-1]
    if truncation_dim(spec, smallest, p, cap=dim) is None:
        b_min = _smallest_admissible_beta(spec, p, dim, betas[0])
        raise ComputationError(
            f"truncation budget of {dim} levels is insufficient at beta={smallest:.6g}; "
            f"smallest admissible beta is {b_min:.6g}"
        )
    rows = []
    prev = None
    for b in betas:
        n = truncation_dim(spec, b, p, cap=dim)
        if spec.kind == "explicit":
            n = min(n, dim)
        w = gibbs_weights(spec, b, n)
        rho = lp_sum(w, p)
        nu2 = float(np.sum(w * w))
        slope = None
        if prev is not None:
            slope = (math.log(rho) - math.log(prev[1])) / (math.log(1.0 / b) - math.log(1.0 / prev[0]))
        rows.append(SweepRow(b, rho, nu2, slope, n))
        prev = (b, rho)
    return SweepTable(p, tuple(rows))
