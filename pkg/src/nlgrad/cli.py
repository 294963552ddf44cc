"""Command-line experiment runner.

Each subcommand writes a CSV whose leading ``#`` lines carry the resolved
configuration, prints one ``key=value`` summary line, and exits with
0 (all checks pass), 1 (a certified inequality failed) or 2 (bad config).
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np

from . import continuum, energy, grad1d, grad2d, spectral
from .config import build_config, parse_config, parse_number, parse_pow2_range
from .errors import ConditionFails, ConfigError, NonlocalError
from .kernel import gamma_constant

EXIT_OK, EXIT_VIOLATION, EXIT_CONFIG = 0, 1, 2

IDENTITY_TOL = 1e-7


@dataclass
class Report:
    columns: List[str]
    rows: list
    summary: Dict[str, object]
    status: int = EXIT_OK
    series: Dict[str, tuple] = field(default_factory=dict)
    figure: Optional[Callable[[Path], None]] = None


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def summary_line(name: str, summary: dict) -> str:
    return name + " " + " ".join(f"{k}={_fmt(v)}" for k, v in summary.items())


def render_csv(cfg, report: Report) -> str:
    buf = io.StringIO()
    buf.write(f"# nlgrad {cfg.subcommand}\n")
    for k, v in cfg.header_items():
        buf.write(f"# {k} = {v}\n")
    buf.write(",".join(report.columns) + "\n")
    for row in report.rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    buf.write("# summary: " + summary_line(cfg.subcommand, report.summary) + "\n")
    return buf.getvalue()


# --- subcommands ------------------------------------------------------------

def run_symbol(cfg) -> Report:
    k = cfg.discrete_kernel()
    N = cfg.N = cfg.N if cfg.N is not None else 64
    spec = spectral.circulant_from_kernel(k, N)
    analysis = spectral.coercivity_constant(k, N)
    t = np.linspace(0.0, math.pi, cfg.grid_points + 1)
    phi = spectral.symbol_phi(spec, t)
    min_phi = spectral.min_symbol(spec, cfg.grid_points)
    ok = min_phi >= analysis.min_phi_bound - 1e-12 and analysis.lambda_min >= analysis.min_phi_bound - 1e-12
    summary = {
        "min_phi": min_phi,
        "analytic_bound": analysis.min_phi_bound,
        "lambda_min": analysis.lambda_min,
        "Lambda": analysis.coercivity_Lambda,
        "N": N,
        "K": gamma_constant(k),
        "verdict": "pass" if ok else "fail",
    }
    eig_t = 2 * math.pi * np.arange(N) / N
    eig_t = eig_t[eig_t <= math.pi]

    def fig(path):
        from .plotting import symbol_figure
        symbol_figure(t, phi, analysis.min_phi_bound, path, eig_t, spectral.symbol_phi(spec, eig_t))

    return Report(["t", "phi"], list(zip(t, phi)), summary, EXIT_OK if ok else EXIT_VIOLATION,
                  {"phi": (t, phi)}, fig)


def run_coercivity(cfg) -> Report:
    k = cfg.discrete_kernel()
    eps = cfg.eps[0] if cfg.eps else 1.0 / 512
    cfg.eps = [eps]
    if not eps < 1.0 / (2 * k.M):
        raise ConfigError(f"eps={eps} must be below 1/(2M)={1.0 / (2 * k.M)}", field="eps")
    trials = cfg.trials = cfg.trials or 1000
    rng = np.random.default_rng(cfg.seed)
    probe = grad1d.LatticeFunction1D(np.zeros(cfg.sites), 0, eps)
    N = energy.certificate_dimension(probe, k.M)
    analysis = spectral.coercivity_constant(k, N)
    rows, fails = [], 0
    for trial in range(trials):
        u = grad1d.LatticeFunction1D(rng.uniform(-1.0, 1.0, cfg.sites), 0, eps)
        cert = energy.coercivity_check(u, k, analysis)
        fails += not cert.passed
        rows.append((trial, cert.energy, cert.lower_bound, cert.ratio))
    ratios = np.array([r[3] for r in rows])
    summary = {
        "trials": trials,
        "failures": fails,
        "min_ratio": float(ratios.min()),
        "Lambda": analysis.coercivity_Lambda,
        "bound_Lambda": analysis.bound_Lambda,
        "N": N,
        "verdict": "pass" if fails == 0 else "fail",
    }

    def fig(path):
        from .plotting import ratio_figure
        ratio_figure(ratios, analysis.coercivity_Lambda, path, "1D coercivity trials")

    return Report(["trial", "F_eps", "Lambda_times_D", "ratio"], rows, summary,
                  EXIT_OK if fails == 0 else EXIT_VIOLATION,
                  {"ratio": (np.arange(trials), ratios)}, fig)


def run_gamma(cfg) -> Report:
    k = cfg.discrete_kernel()
    eps = cfg.eps = cfg.eps or parse_pow2_range("4:12")
    fn = energy.polynomial_bump() if cfg.function == "bump" else energy.sine_bump()
    rows, order = energy.gamma_convergence_sweep(fn, k, eps)
    summary = {"target": rows[0][2], "K": gamma_constant(k), "order": order,
               "final_rel_error": rows[-1][4]}
    e = [r[0] for r in rows]
    err = [r[3] for r in rows]

    def fig(path):
        from .plotting import loglog_figure
        loglog_figure(e, {"|F_eps - target|": err}, path)

    return Report(["epsilon", "F_eps", "target", "abs_error", "rel_error"], rows, summary,
                  EXIT_OK, {"abs_error": (e, err)}, fig)


def run_counterexample(cfg) -> Report:
    alpha = cfg.alpha = cfg.alpha if cfg.alpha is not None else 0.5
    eps = cfg.eps = cfg.eps or parse_pow2_range("2:8")
    rows, e_slope, d_slope = continuum.riesz_sweep(alpha, cfg.R, eps, cfg.points_per_wavelength)
    bound_ok = all(r[1] <= r[2] for r in rows)
    summary = {"alpha": alpha, "R": cfg.R, "c_alpha": continuum.riesz_c(alpha),
               "energy_slope": e_slope, "dirichlet_slope": d_slope, "bound_ok": bound_ok}
    e = [r[0] for r in rows]

    def fig(path):
        from .plotting import loglog_figure
        loglog_figure(e, {"energy": [r[1] for r in rows], "bound": [r[2] for r in rows],
                          "Dirichlet": [r[3] for r in rows]}, path)

    return Report(["epsilon", "energy", "bound", "dirichlet_energy"], rows, summary,
                  EXIT_OK if bound_ok else EXIT_VIOLATION,
                  {"energy": (e, [r[1] for r in rows]), "dirichlet": (e, [r[3] for r in rows])}, fig)


def run_avg_identity(cfg) -> Report:
    k = cfg.continuum_kernel("tent", 1.0)
    M = cfg.M = cfg.M or 4
    eps_list = cfg.eps = cfg.eps or [1.0 / 8, 1.0 / 16]
    u = continuum.smooth_bump(0.1, 0.8, 1.0)
    rows, worst, coercive, last = [], 0.0, True, None
    convention = cfg.convention
    for eps in eps_list:
        pair = continuum.gradient_pair(u, k, eps, M, cfg.convention)
        cert = continuum.equicoercivity_check(u, k, eps, M, pair=pair)
        convention = pair.convention
        coercive &= cert.passed
        worst = max(worst, pair.max_discrepancy)
        for x, c, d in zip(pair.points, pair.continuum, pair.discrete):
            rows.append((eps, M, x, c, d, abs(c - d)))
        last = pair
    ok = worst <= IDENTITY_TOL and coercive
    summary = {"M": M, "convention": convention, "max_discrepancy": worst,
               "equicoercive": coercive, "verdict": "pass" if ok else "fail"}

    def fig(path):
        from .plotting import pair_figure
        pair_figure(last.points, last.continuum, last.discrete, path)

    return Report(["epsilon", "M", "x", "continuum", "discrete", "abs_diff"], rows, summary,
                  EXIT_OK if ok else EXIT_VIOLATION,
                  {"continuum": (last.points, last.continuum), "discrete": (last.points, last.discrete)}, fig)


def run_grad2d(cfg) -> Report:
    k = cfg.continuum_kernel("tent", 2.0)
    eps = cfg.eps[0] if cfg.eps else 1.0 / 64
    cfg.eps = [eps]
    trials = cfg.trials = cfg.trials or 200
    n = cfg.window
    rho1, rho2, varrho = grad2d.example_coefficients(k)
    holds, margin = grad2d.sufficient_condition(rho1, rho2, varrho)
    rng = np.random.default_rng(cfg.seed)
    fields_ = [("random", grad2d.LatticeFunction2D(rng.uniform(-1.0, 1.0, (n, n)), (0, 0), eps))
               for _ in range(trials)]
    fields_.append(("checkerboard", grad2d.checkerboard(n, n, (0, 0), eps)))
    N = cfg.N if cfg.N is not None else grad2d.certificate_N(fields_[0][1])
    rows, fails = [], 0
    Lambda = grad2d.circulant_min_2d(rho1, rho2, varrho, N) ** 2 if holds else float("nan")
    for trial, (label, u) in enumerate(fields_):
        try:
            cert = grad2d.coercivity_check_2d(u, k, Lambda=Lambda, N=N)
            fails += not cert.passed
            rows.append((trial, label, cert.energy, Lambda * cert.dirichlet, cert.ratio))
        except ConditionFails as exc:
            rows.append((trial, label, exc.energy, float("nan"), exc.energy / exc.dirichlet))
    ratios = np.array([r[4] for r in rows])
    verdict = "no-certificate" if not holds else ("pass" if fails == 0 else "fail")
    summary = {"rho1": rho1, "rho2": rho2, "varrho": varrho, "margin": margin,
               "condition": holds, "Lambda": Lambda, "N": N, "min_ratio": float(ratios.min()),
               "failures": fails, "verdict": verdict}

    def fig(path):
        from .plotting import ratio_figure
        ratio_figure(ratios, Lambda, path, "2D coercivity trials")

    return Report(["trial", "kind", "F_eps", "Lambda_times_D", "ratio"], rows, summary,
                  EXIT_OK if verdict == "pass" else EXIT_VIOLATION,
                  {"ratio": (np.arange(len(rows)), ratios)}, fig)


def run_oscillation(cfg) -> Report:
    k = cfg.discrete_kernel() if (cfg.weights or cfg.kind) else grad1d.DiscreteKernel([2.0, 1.0])
    M = cfg.M or k.M
    sites = cfg.sites
    u = grad1d.oscillation_null_vector(M, 0, sites)
    const = grad1d.nonlocal_gradient(u, np.ones(M), form="direct")
    sym = grad1d.nonlocal_gradient_symmetric(u, k)
    asym = grad1d.nonlocal_gradient(u, k, form="direct")
    reach = max(M, k.M)
    idx = np.arange(-reach, sites + reach)
    interior = (idx >= reach) & (idx < sites - reach)
    cols = {"u": u.at(idx), "constant_asymmetric": const.at(idx), "kernel_symmetric": sym.at(idx),
            "kernel_asymmetric": asym.at(idx)}
    rows = [(int(i), *(float(c[j]) for c in cols.values())) for j, i in enumerate(idx)]
    c_max = float(np.max(np.abs(cols["constant_asymmetric"][interior])))
    s_max = float(np.max(np.abs(cols["kernel_symmetric"][interior])))
    a_min = float(np.min(np.abs(cols["kernel_asymmetric"][interior])))
    ok = c_max == 0.0 and s_max == 0.0 and a_min > 0.0
    summary = {"M": M, "constant_interior_max": c_max, "symmetric_interior_max": s_max,
               "asymmetric_interior_min": a_min, "verdict": "pass" if ok else "fail"}

    def fig(path):
        from .plotting import stencil_figure
        stencil_figure(idx, cols, path)

    return Report(["index", *cols], rows, summary, EXIT_OK if ok else EXIT_VIOLATION,
                  {name: (idx, c) for name, c in cols.items()}, fig)


SUBCOMMANDS = {
    "symbol": run_symbol,
    "coercivity": run_coercivity,
    "gamma-converge": run_gamma,
    "counterexample": run_counterexample,
    "avg-identity": run_avg_identity,
    "grad2d-check": run_grad2d,
    "oscillation": run_oscillation,
}


def _eps_arg(text):
    try:
        return parse_number(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid eps {text!r}")


def _weights_arg(text):
    try:
        return [parse_number(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid weight list {text!r}")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nlgrad", description="Discrete nonlocal gradient experiments.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, help="key = value configuration file")
        p.add_argument("--weights", type=_weights_arg, help="comma-separated discrete kernel")
        p.add_argument("--kind", choices=["tent", "riesz", "indicator"])
        p.add_argument("--alpha", type=float)
        p.add_argument("--support", type=float)
        p.add_argument("--M", type=int)
        p.add_argument("--convention", choices=["left", "midpoint"])
        p.add_argument("--eps", type=_eps_arg, action="append", help="repeatable")
        p.add_argument("--eps-pow2", help="range a:b meaning eps = 2^-a .. 2^-b")
        p.add_argument("--N", type=int)
        p.add_argument("--R", type=float)
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--sites", type=int)
        p.add_argument("--window", type=int)
        p.add_argument("--grid-points", dest="grid_points", type=int)
        p.add_argument("--points-per-wavelength", dest="points_per_wavelength", type=int)
        p.add_argument("--function", choices=["bump", "sine"])
        p.add_argument("--out", help="CSV output path (default: <subcommand>.csv)")
        p.add_argument("--emit-plot-data", dest="emit_plot_data", type=Path,
                       help="directory for (x, y) series files")
        p.add_argument("--plot", action="store_true", help="render a PNG figure next to the CSV")
    return parser


OVERRIDE_KEYS = ("weights", "kind", "alpha", "support", "M", "convention", "N", "R", "trials",
                 "seed", "sites", "window", "grid_points", "points_per_wavelength", "function", "out")


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        file_values = parse_config(args.config.read_text(encoding="utf-8")) if args.config else {}
        overrides = {k: getattr(args, k) for k in OVERRIDE_KEYS}
        eps = list(args.eps or [])
        if args.eps_pow2:
            try:
                eps += parse_pow2_range(args.eps_pow2)
            except ValueError:
                raise ConfigError(f"bad range {args.eps_pow2!r}", field="eps_pow2") from None
        overrides["eps"] = eps or None
        cfg = build_config(args.subcommand, file_values, overrides)
        report = SUBCOMMANDS[args.subcommand](cfg)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonlocalError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out = Path(cfg.out or f"{args.subcommand}.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(render_csv(cfg, report), encoding="utf-8")
    if args.emit_plot_data:
        args.emit_plot_data.mkdir(parents=True, exist_ok=True)
        for name, (x, y) in report.series.items():
            lines = [f"{_fmt(float(a))} {_fmt(float(b))}" for a, b in zip(x, y)]
            (args.emit_plot_data / f"{args.subcommand}_{name}.dat").write_text("\n".join(lines) + "\n")
    if args.plot and report.figure is not None:
        report.figure(out.with_suffix(".png"))
    print(summary_line(args.subcommand, report.summary))
    return report.status


if __name__ == "__main__":
    sys.exit(main())
