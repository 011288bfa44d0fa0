"""Command-line entry point: ``burstnec {capacity,bounds,validate,nfold-export,simulate}``.

Exit codes: 0 success, 1 a computation raised a flag (non-convergence,
failed check, Monte Carlo outside 3 sigma), 2 configuration error.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import sys

import numpy as np

from .bounds import beta_lb_n, theorem6_verdict, zs_gap
from .capacity import nec_capacity
from .config import ConfigError, RunConfig, parse_grid
from .entropy import ResourceError
from .nfold import ResourceCapError, build_nfold, export_csv
from .processes import erasure_prob, sample_path
from .simulate import path_statistics, simulate_feedback, simulate_nfold
from .svg import render_svg
from .validation import run_checks

OK, FLAGGED, CONFIG = 0, 1, 2
LN2 = float(np.log(2.0))


def _num(v: float) -> str:
    return repr(float(v))


@contextlib.contextmanager
def _sink(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def cmd_capacity(cfg: RunConfig) -> int:
    model, _ = cfg.resolve()
    rep = nec_capacity(model, cfg.l)
    d = rep.to_dict(cfg.unit)
    fmt = cfg.fmt or "text"
    with _sink(cfg.out) as fh:
        if fmt == "json":
            fh.write(json.dumps(d, indent=2, sort_keys=True) + "\n")
        elif fmt == "csv":
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["quantity", "value"])
            for k in sorted(d):
                w.writerow([k, d[k]])
        elif fmt == "text":
            u = cfg.unit
            if rep.exact:
                fh.write(f"C       = {d['C']:.12f} {u}/use (exact)\n")
            else:
                fh.write(f"C       in [{d['C_lower']:.12f}, {d['C_upper']:.12f}] {u}/use (l={cfg.l} block bounds)\n")
            fh.write(f"C_FB    = C (feedback does not increase capacity)\n")
            fh.write(f"C_DMC   = {d['C_DMC']:.12f} {u}/use (memoryless counterpart)\n")
            fh.write(f"gain    in [{d['gain_lower']:.12f}, {d['gain_upper']:.12f}] {u}/use, "
                     f"strict={rep.gain_strict}\n")
            fh.write(f"eps     = {rep.eps:.12f}\n")
            fh.write(f"H(Z)    = {d['entropy_rate_Z']:.12f} {u}/symbol (entropy rate)\n")
            fh.write(f"H(Zt)   in [{d['Ztilde_rate_lower']:.12f}, {d['Ztilde_rate_upper']:.12f}] {u}/symbol\n")
        else:
            raise ConfigError(f"capacity supports --format text|json|csv, not {fmt}")
    return OK


BOUNDS_COLUMNS = ["beta", "C_n", "C_n_ub", "C_n_lb", "margin", "lb_exceeds_ub", "beta_ge_beta_lb", "converged"]


def bounds_csv(verdict, delta: float, scale: float = 1.0) -> str:
    """Wide table: both bound curves, the non-feedback curve and the verdict per grid point."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BOUNDS_COLUMNS)
    lower = {p.beta: p for p in verdict.lower.points}
    upper = {p.beta: p for p in verdict.upper.points}
    for beta, margin, inr in zip(verdict.betas, verdict.margins, verdict.in_range):
        lo, up = lower[float(beta)], upper[float(beta)]
        w.writerow([_num(beta), _num((up.rate - delta) * scale), _num(up.rate * scale), _num(lo.rate * scale),
                    _num(margin * scale), int(margin > 0), int(inr), int(lo.converged and up.converged)])
    return buf.getvalue()


def cmd_bounds(cfg: RunConfig) -> int:
    model, cf = cfg.resolve()
    fmt = cfg.fmt or "csv"
    if fmt not in ("csv", "json", "svg"):
        raise ConfigError(f"bounds supports --format csv|json|svg, not {fmt}")
    v = theorem6_verdict(cf, model, cfg.s_tilde, cfg.n, cfg.grid)
    scale = LN2 if cfg.unit == "nats" else 1.0
    text = bounds_csv(v, zs_gap(model, cfg.n), scale)
    with _sink(cfg.out) as fh:
        if fmt == "csv":
            fh.write(text)
        elif fmt == "svg":
            fh.write(render_svg(text, "beta", ["C_n_ub", "C_n_lb"],
                                title=f"n={cfg.n} capacity-cost bounds ({cfg.unit})"))
        else:
            rows = list(csv.DictReader(io.StringIO(text)))
            summary = {
                "n": cfg.n, "s_tilde": cfg.s_tilde, "unit": cfg.unit, "mode": v.mode,
                "conditions_hold": v.conditions_hold, "violations": v.violations, "beta_lb": v.beta_lb,
                "positive_interval": v.positive_interval(),
                "positive_interval_beta_ge_beta_lb": v.positive_interval(restrict=True),
                "max_margin": v.max_margin * scale, "rows": rows,
            }
            fh.write(json.dumps(summary, indent=2) + "\n")
    converged = v.lower.converged and v.upper.converged
    if not converged:
        print("warning: some Blahut-Arimoto solves did not converge", file=sys.stderr)
    return OK if converged else FLAGGED


def cmd_validate(cfg: RunConfig) -> int:
    model, cf = cfg.resolve()
    results = run_checks(model, cf, n=cfg.n, seed=cfg.seed, samples=cfg.samples, s_tilde=cfg.s_tilde,
                         budget=min(cfg.max_entries, 1_000_000))
    passed = all(r.passed for r in results)
    with _sink(cfg.out) as fh:
        if cfg.fmt == "json":
            fh.write(json.dumps({"passed": passed, "checks": [r.__dict__ for r in results]}, indent=2) + "\n")
        else:
            for r in results:
                fh.write(r.line() + "\n")
            fh.write(f"{sum(r.passed for r in results)}/{len(results)} checks passed\n")
    return OK if passed else FLAGGED


def cmd_nfold_export(cfg: RunConfig) -> int:
    model, cf = cfg.resolve()
    if (cfg.fmt or "csv") != "csv":
        raise ConfigError("nfold-export only writes csv")
    m = build_nfold(cf, model, cfg.n, cfg.max_entries)
    with _sink(cfg.out) as fh:
        export_csv(m, fh)
    return OK


def cmd_simulate(cfg: RunConfig) -> int:
    model, cf = cfg.resolve()
    path = sample_path(model, cfg.samples, cfg.seed)
    stats = path_statistics(path, model.n_states)
    q1 = simulate_nfold(cf, model, 1, cfg.samples, cfg.seed + 1)
    fb = simulate_feedback(cf, model, cfg.n, cfg.s_tilde, cfg.samples, cfg.seed + 2)
    report = {
        "seed": cfg.seed,
        "samples": cfg.samples,
        "path_erasure_rate": stats.erasure_rate,
        "eps": erasure_prob(model),
        "path_state_frequencies": stats.state_frequencies.tolist(),
        "stationary": model.marginal.tolist(),
        "Q1_max_abs_z": q1.max_z,
        "feedback_n": cfg.n,
        "feedback_max_abs_z": fb.agreement.max_z,
        "feedback_mean_cost": fb.mean_cost,
        "feedback_mean_cost_exact_uniform_linear": beta_lb_n(model, cfg.s_tilde, cfg.n),
        "within_3_sigma": bool(q1.within(3.0) and fb.agreement.within(3.0)),
    }
    fmt = cfg.fmt or "json"
    with _sink(cfg.out) as fh:
        if fmt == "json":
            fh.write(json.dumps(report, indent=2) + "\n")
        elif fmt == "csv":
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["quantity", "value"])
            for k, val in report.items():
                w.writerow([k, json.dumps(val)])
        else:
            raise ConfigError(f"simulate supports --format json|csv, not {fmt}")
    return OK if report["within_3_sigma"] else FLAGGED


COMMANDS = {
    "capacity": cmd_capacity,
    "bounds": cmd_bounds,
    "validate": cmd_validate,
    "nfold-export": cmd_nfold_export,
    "simulate": cmd_simulate,
}

DEFAULT_N = {"capacity": 6, "bounds": 6, "validate": 3, "nfold-export": 2, "simulate": 2}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(CONFIG)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="burstnec", description="Capacity and feedback bounds for burst noise-erasure channels.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--model", required=True, help="model JSON path, or builtin:pi1|pi2|pi3")
        s.add_argument("--channel", default=None, help="mod_add or table:PATH (JSON q x q matrix)")
        s.add_argument("--n", type=int, default=DEFAULT_N[name], help="block length")
        s.add_argument("--l", type=int, default=16, help="block length for indicator entropy-rate bounds")
        s.add_argument("--s-tilde", type=int, default=0, help="noise state that triggers the zero-cost symbol")
        s.add_argument("--beta-grid", default="0:0.5:50", help="START:STOP:COUNT")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--samples", type=int, default=1_000_000, help="Monte Carlo sample count")
        s.add_argument("--out", default=None, help="output file (stdout if omitted)")
        s.add_argument("--format", dest="fmt", choices=["csv", "json", "svg", "text"], default=None)
        s.add_argument("--nats", action="store_true", help="report information quantities in nats")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            model_path=args.model, channel=args.channel, n=args.n, l=args.l, s_tilde=args.s_tilde,
            grid=parse_grid(args.beta_grid), seed=args.seed, out=args.out, fmt=args.fmt,
            unit="nats" if args.nats else "bits", samples=args.samples,
        )
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return CONFIG
    except (ResourceCapError, ResourceError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return CONFIG
    except ValueError as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return FLAGGED


if __name__ == "__main__":
    raise SystemExit(main())
