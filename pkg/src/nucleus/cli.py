"""Command-line front end: ``nucleus {analyze,decompose,dilute,entropy,sweep}``.

Every report is deterministic for identical inputs.  Exit status is 0 on
success, 1 when a computation fails, 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import os
import sys
from pathlib import Path

import numpy as np

from ._errors import ComputationError, InputError, NucleusError, ParameterError
from .cost import math_cost, phys_cost
from .decomp import nu2_trace, pietsch_bound, pietsch_decompose, spectral_decompose
from .dilution import (
    BASEL,
    alpha_window,
    default_alpha,
    dilute_uniform,
    independent_dilute,
    independent_factor,
    schauder_schedule,
    schauder_sum,
    uniform_factor,
)
from .entropy import EigenvalueModel, entropy_bounds, growth_orders
from .gibbs import EnergySpectrum, beta_sweep, geometric_betas
from .io import dumps_json, read_json, read_matrix
from .linop import approximation_numbers, rho_p

SCHEMA_VERSION = 1
DEFAULT_MAX_DIM = 4096
NORM_NOTE = "Euclidean norms on domain and codomain; alpha_k is the (k+1)-th singular value"
RANK_CHECK_LIMIT = 2048


def _lab(value, kind: str) -> dict:
    return {"value": value, "bound_kind": kind}


def _g(x: float) -> str:
    return f"{x:.17g}"


def _max_dim() -> int:
    raw = os.environ.get("NUCLEUS_MAX_DIM", str(DEFAULT_MAX_DIM))
    try:
        cap = int(raw)
    except ValueError:
        raise InputError(f"NUCLEUS_MAX_DIM must be an integer, got {raw!r}") from None
    if cap < 1:
        raise InputError(f"NUCLEUS_MAX_DIM must be positive, got {cap}")
    return cap


def _load_matrix(path):
    op = read_matrix(path)
    cap = _max_dim()
    if max(op.shape) > cap:
        raise InputError(f"{path}: matrix is {op.rows}x{op.cols}, exceeding NUCLEUS_MAX_DIM={cap}")
    digest = {
        "path": str(path),
        "shape": list(op.shape),
        "sha256": hashlib.sha256(Path(path).read_bytes()).hexdigest(),
    }
    return op, digest


def _cost_entry(d, p: float) -> dict:
    entry = {"p": p, "phys_cost": _lab(phys_cost(d, p), "upper"), "term_count": d.term_count}
    if p >= 1:
        entry["math_cost"] = math_cost(d, p).to_dict()["math_cost"]
    else:
        entry["math_cost"] = None
    return entry


def cmd_analyze(args) -> tuple[dict, str]:
    op, digest = _load_matrix(args.matrix)
    ps = args.p
    alphas = approximation_numbers(op)
    spectral = spectral_decompose(op)
    rho = {p: rho_p(op, p) for p in ps}
    costs, certs = [], []
    for p in ps:
        pd = pietsch_decompose(op, p)
        bound = pietsch_bound(op, p)
        pcost = phys_cost(pd, p)
        costs.append({"p": p, "spectral": _cost_entry(spectral, p), "pietsch": _cost_entry(pd, p)})
        certs.append({
            "p": p,
            "statement": "cost <= 2^{2+3/p} * rho_p",
            "cost": _lab(pcost, "upper"),
            "bound": _lab(bound, "exact"),
            "holds": bool(pcost <= bound),
        })
    nu2 = nu2_trace(op)
    ssq = float(np.sum(op.spectrum.values ** 2))
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "analyze",
        "input": digest,
        "norms": NORM_NOTE,
        "p_values": ps,
        "rank": op.rank,
        "approximation_numbers": _lab(alphas.tolist(), "exact"),
        "rho_p": [{"p": p, "rho_p": _lab(rho[p], "exact")} for p in ps],
        "decomposition_costs": costs,
        "pietsch_certificate": certs,
        "trace_identity": {
            "nu2_trace": _lab(nu2, "exact"),
            "sum_sigma_squared": _lab(ssq, "exact"),
            "relative_residual": _lab(abs(nu2 - ssq) / nu2 if nu2 else 0.0, "exact"),
        },
    }
    lines = ["p,rho_p,spectral_phys_cost,pietsch_phys_cost,pietsch_bound,pietsch_holds"]
    for p, c, cert in zip(ps, costs, certs):
        lines.append(",".join([
            _g(p), _g(rho[p]), _g(c["spectral"]["phys_cost"]["value"]),
            _g(cert["cost"]["value"]), _g(cert["bound"]["value"]), str(cert["holds"]).lower(),
        ]))
    return report, "\n".join(lines) + "\n"


def cmd_decompose(args) -> tuple[dict, str]:
    op, digest = _load_matrix(args.matrix)
    if args.method == "spectral":
        d = spectral_decompose(op)
    else:
        d = pietsch_decompose(op, args.pietsch_p)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "decompose",
        "input": digest,
        "method": args.method,
        "decomposition": d.to_dict(),
        "costs": [_cost_entry(d, p) for p in args.p],
    }
    lines = ["term,multiplicity,ell_norm,phi_norm"]
    for k in range(d.n_stored):
        lines.append(f"{k},{int(d.multiplicity[k])},{_g(d.ell_norms[k])},{_g(d.phi_norms[k])}")
    return report, "\n".join(lines) + "\n"


def cmd_dilute(args) -> tuple[dict, str]:
    p = args.p
    if (args.schauder or args.independent) and not p > 1:
        raise _UsageError(f"--schauder and --independent need p > 1, got p={p}")
    op, digest = _load_matrix(args.matrix)
    d = spectral_decompose(op) if args.base == "spectral" else pietsch_decompose(op, p)
    before = phys_cost(d, p)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "dilute",
        "input": digest,
        "base": args.base,
        "p": p,
        "cost_before": _lab(before, "upper"),
    }
    if args.schauder:
        out, schedule = schauder_schedule(d, p)
        achieved = schauder_sum(out, p)
        report.update({
            "mode": "schauder",
            "schedule": schedule,
            "bound": _lab(BASEL, "exact"),
            "achieved_sum": _lab(achieved, "exact"),
            "below_bound": bool(achieved < BASEL),
            "cost_after": _lab(phys_cost(out, p), "upper"),
        })
    elif args.independent:
        lo, hi = alpha_window(p)
        alpha = default_alpha(p) if args.alpha is None else args.alpha
        out = d
        rank_ok = None
        for r in range(args.rounds):
            nxt = independent_dilute(out, p, alpha)
            if r == 0 and nxt.n_stored <= RANK_CHECK_LIMIT:
                rank_ok = bool(np.linalg.matrix_rank(nxt.phi_dense()) == nxt.n_stored)
            out = nxt
        after = phys_cost(out, p)
        factor = independent_factor(p, alpha)
        report.update({
            "mode": "independent",
            "alpha_window": [lo, hi],
            "alpha": alpha,
            "rounds": args.rounds,
            "factor_per_round": _lab(factor, "exact"),
            "factor_bound": _lab(2.0 ** (1.0 / p) * alpha, "exact"),
            "measured_factor": _lab((after / before) if before else 1.0, "exact"),
            "phi_linearly_independent": rank_ok,
            "cost_after": _lab(after, "upper"),
        })
    else:
        m = args.m
        out = dilute_uniform(d, m)
        after = phys_cost(out, p)
        report.update({
            "mode": "uniform",
            "m": m,
            "factor": _lab(uniform_factor(m, p), "exact"),
            "measured_factor": _lab((after / before) if before else 1.0, "exact"),
            "cost_after": _lab(after, "upper"),
        })
    keys = [k for k in ("factor", "factor_per_round", "achieved_sum", "measured_factor") if k in report]
    lines = ["mode,p,cost_before,cost_after," + ",".join(keys)]
    lines.append(",".join([report["mode"], _g(p), _g(before), _g(report["cost_after"]["value"])]
                          + [_g(report[k]["value"]) for k in keys]))
    return report, "\n".join(lines) + "\n"


def cmd_entropy(args) -> tuple[dict, str]:
    try:
        model = EigenvalueModel.from_dict(read_json(args.model))
    except InputError as exc:
        raise _UsageError(str(exc)) from None
    rows = []
    lines = ["eps,m,lower,upper,n_star"]
    for eps in args.eps:
        b = entropy_bounds(model, eps, n_max=args.n_max)
        rows.append({
            "eps": eps,
            "m": b.m,
            "entropy_lower": _lab(b.lower, "lower"),
            "entropy_upper": _lab(b.upper, "upper") if b.upper is not None else None,
            "n_star": b.n_star,
            "note": b.note,
        })
        up = "" if b.upper is None else _g(b.upper)
        ns = "" if b.n_star is None else str(b.n_star)
        lines.append(f"{_g(eps)},{b.m},{_g(b.lower)},{up},{ns}")
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "entropy",
        "model": model.to_dict() if model.kind != "explicit" else {"kind": "explicit", "length": model.length},
        "table": rows,
    }
    try:
        g = growth_orders(model)
    except NucleusError as exc:
        report["growth"] = {"error": str(exc)}
    else:
        kind = "exact" if g.method == "analytic" else "estimate"
        report["growth"] = {
            "D": _lab(g.D_estimate, kind),
            "d": _lab(g.d_estimate, kind),
            "method": g.method,
            "window": list(g.window) if g.window else None,
            "window_size": g.window_size,
        }
    return report, "\n".join(lines) + "\n"


def _parse_beta_range(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise _UsageError(f"--beta must be start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise _UsageError(f"--beta must be start:stop:count, got {text!r}") from None
    return geometric_betas(start, stop, count)


def cmd_sweep(args) -> tuple[dict, str]:
    try:
        spec = EnergySpectrum.from_dict(read_json(args.spec))
    except InputError as exc:
        raise _UsageError(str(exc)) from None
    betas = _parse_beta_range(args.beta)
    table = beta_sweep(spec, betas, args.p, dim=args.dim)
    csv_text = table.to_csv()
    if args.plot_data:
        Path(args.plot_data).write_text(csv_text)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "sweep",
        "model": "diagonal Gibbs damping diag(exp(-beta e_n)) (toy model)",
        "spectrum": spec.to_dict(),
        "p": args.p,
        "rows": [
            {
                "beta": r.beta,
                "rho_p": _lab(r.rho_p, "exact"),
                "nu2": _lab(r.nu2, "exact"),
                "log_slope": r.log_slope,
                "dim": r.dim,
            }
            for r in table.rows
        ],
    }
    return report, csv_text


class _UsageError(NucleusError):
    pass


def _positive_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (x > 0 and math.isfinite(x)):
        raise argparse.ArgumentTypeError(f"must be positive and finite: {text!r}")
    return x


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="write the report to PATH instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    parser = argparse.ArgumentParser(
        prog="nucleus",
        description="Nuclearity indices, dilutions and entropy growth for finite-rank operators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="approximation numbers, rho_p, costs, certificates")
    p.add_argument("matrix", help="CSV or JSON matrix file")
    p.add_argument("--p", type=_positive_float, nargs="+", default=[1.0, 2.0])
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("decompose", parents=[common], help="emit a nuclear decomposition as JSON")
    p.add_argument("matrix")
    p.add_argument("--method", choices=("spectral", "pietsch"), default="spectral")
    p.add_argument("--pietsch-p", type=_positive_float, default=1.0,
                   help="exponent passed to the dyadic construction")
    p.add_argument("--p", type=_positive_float, nargs="+", default=[1.0, 2.0],
                   help="exponents at which to report costs")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("dilute", parents=[common], help="demonstrate cost reduction by dilution")
    p.add_argument("matrix")
    p.add_argument("--p", type=_positive_float, required=True)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--m", type=int, help="uniform dilution multiplicity (>= 2)")
    mode.add_argument("--schauder", action="store_true", help="per-term schedule with pi^2/6 bound")
    mode.add_argument("--independent", action="store_true", help="independence-preserving split")
    p.add_argument("--rounds", type=int, default=1, help="rounds of --independent splitting")
    p.add_argument("--alpha", type=float, default=None, help="shrink ratio for --independent")
    p.add_argument("--base", choices=("spectral", "pietsch"), default="spectral")
    p.set_defaults(func=cmd_dilute)

    p = sub.add_parser("entropy", parents=[common], help="m(K,eps), entropy bounds, growth orders")
    p.add_argument("model", help="eigenvalue model JSON")
    p.add_argument("--eps", type=_positive_float, nargs="+", required=True)
    p.add_argument("--n-max", type=int, default=10_000_000)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("sweep", parents=[common], help="rho_p and nu2 of Gibbs-damped maps along beta")
    p.add_argument("spec", help="energy spectrum JSON")
    p.add_argument("--beta", required=True, help="geometric grid start:stop:count")
    p.add_argument("--p", type=_positive_float, default=1.0)
    p.add_argument("--dim", type=int, default=1_000_000, help="largest number of levels")
    p.add_argument("--plot-data", metavar="CSV", help="also write the sweep table to this CSV file")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "dilute" and args.m is not None and args.m < 2:
            raise _UsageError(f"--m must be >= 2, got {args.m}")
        if args.command == "dilute" and args.rounds < 1:
            raise _UsageError(f"--rounds must be >= 1, got {args.rounds}")
        report, csv_text = args.func(args)
    except (_UsageError, InputError, ParameterError) as exc:
        print(f"nucleus {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except ComputationError as exc:
        print(f"nucleus {args.command}: computation failed: {exc}", file=sys.stderr)
        return 1
    text = csv_text if args.format == "csv" else dumps_json(report) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
