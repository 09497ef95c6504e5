"""Command line entry point ``wgof``."""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import critvals, experiments, gof
from .distributions import from_config
from .errors import WgofError
from .transport import SolverConfig


def _solver(args) -> SolverConfig:
    return SolverConfig.paper(seed=args.seed) if args.paper_scale else SolverConfig.desk(seed=args.seed)


def _load_sample(path: str) -> np.ndarray:
    x = np.loadtxt(path, delimiter=",", ndmin=2)
    return x


def _load_json(text_or_path: str) -> dict:
    try:
        return json.loads(text_or_path)
    except json.JSONDecodeError:
        with open(text_or_path, encoding="utf-8") as fh:
            return json.load(fh)


def _emit(result: gof.GofTestResult) -> None:
    print(json.dumps(result.to_dict(), indent=2, sort_keys=True))


def _n_mc(args) -> int:
    return args.n_mc if args.n_mc is not None else (experiments.PAPER if args.paper_scale else experiments.DESK)["n_mc"]


def cmd_test_simple(args):
    null = from_config(_load_json(args.null))
    _emit(gof.test_simple(_load_sample(args.sample), null, args.p, args.alpha, _n_mc(args), _solver(args),
                          args.seed, args.threads))


def cmd_test_normality(args):
    _emit(gof.normality_test(_load_sample(args.sample), args.p, alpha=args.alpha, n_mc=_n_mc(args),
                             cfg=_solver(args), seed=args.seed, threads=args.threads))


def cmd_test_elliptical(args):
    _emit(gof.elliptical_test(_load_sample(args.sample), args.nu, args.p, alpha=args.alpha, n_mc=_n_mc(args),
                              cfg=_solver(args), seed=args.seed, threads=args.threads))


def _model(name: str, dim: int):
    if name == "gaussian-amh":
        return gof.gaussian_amh_model()
    if name == "gumbel-max-stable":
        return gof.gumbel_max_stable_model(dim)
    raise WgofError(f"unknown model {name!r}")


def cmd_test_family(args):
    x = _load_sample(args.sample)
    model = _model(args.model, x.shape[1])
    cvf = critvals.load_cvf(args.cvf) if args.cvf else None
    _emit(gof.test_hybrid(x, model, args.p, args.alpha, args.n_boot, _solver(args), cvf, args.seed, args.threads))


def cmd_critvals_build(args):
    model = _model(args.model, args.dim)
    lo, hi = args.domain
    grid = critvals.default_grid(lo, hi, args.points)
    cvf = critvals.build_cv_function(model, grid, args.alpha, args.n, args.n_boot, args.p, _solver(args),
                                     args.seed, args.threads, args.degree)
    critvals.save_cvf(cvf, args.output)
    print(f"wrote {args.output} (fit RMS {cvf.residual_rms():.4g})")


def cmd_critvals_show(args):
    cvf = critvals.load_cvf(args.path)
    print(json.dumps(cvf.meta, indent=2, sort_keys=True))
    print("psi,cv,smoothed")
    for p, c in zip(cvf.psi_grid, cvf.cv_grid):
        print(f"{p!r},{c!r},{cvf(p)!r}")


def cmd_experiment_run(args):
    cfg = experiments.load_config(args.config)
    cfg.seed = args.seed
    cfg = cfg.scaled(args.paper_scale)
    if args.replicates is not None:
        cfg.replicates = args.replicates
    if args.n_mc is not None:
        cfg.n_mc = args.n_mc
    _, text = experiments.run_experiment(cfg, args.out_dir, args.threads, plot=not args.no_plot)
    sys.stdout.write(text)


def cmd_experiment_catalog(args):
    for name, title in experiments.catalog():
        print(f"{name:8s} {title}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="root seed of all random streams")
    common.add_argument("--threads", type=int, default=1, help="worker threads for Monte Carlo draws")
    common.add_argument("--paper-scale", action="store_true", help="full-size solver and Monte Carlo budgets")
    common.add_argument("--out-dir", default="results", help="directory for CSV, PNG and log output")

    ap = argparse.ArgumentParser(prog="wgof", description="Wasserstein goodness-of-fit tests")
    sub = ap.add_subparsers(dest="command", required=True)

    def test_parser(name, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("sample", help="CSV file, one observation per row")
        p.add_argument("--p", type=float, default=2.0, help="order of the Wasserstein distance")
        p.add_argument("--alpha", type=float, default=0.05)
        p.add_argument("--n-mc", type=int, default=None, help="number of null draws")
        return p

    p = test_parser("test-simple", "test a fully specified null")
    p.add_argument("--null", required=True, help="distribution config as JSON text or file")
    p.set_defaults(func=cmd_test_simple)
    p = test_parser("test-normality", "multivariate normality test")
    p.set_defaults(func=cmd_test_normality)
    p = test_parser("test-elliptical", "elliptical Student t family test")
    p.add_argument("--nu", type=float, required=True)
    p.set_defaults(func=cmd_test_elliptical)
    p = test_parser("test-family", "hybrid test of a parametric family")
    p.add_argument("--model", required=True, choices=["gaussian-amh", "gumbel-max-stable"])
    p.add_argument("--n-boot", type=int, default=1000)
    p.add_argument("--cvf", help="critical-value function file; skips the bootstrap")
    p.set_defaults(func=cmd_test_family)

    cv = sub.add_parser("critvals", help="critical-value functions")
    cvs = cv.add_subparsers(dest="action", required=True)
    b = cvs.add_parser("build", parents=[common], help="simulate and fit a critical-value function")
    b.add_argument("--model", required=True, choices=["gaussian-amh", "gumbel-max-stable"])
    b.add_argument("--dim", type=int, default=2)
    b.add_argument("--domain", type=float, nargs=2, required=True, metavar=("LO", "HI"))
    b.add_argument("--points", type=int, default=15)
    b.add_argument("--degree", type=int, default=6)
    b.add_argument("--alpha", type=float, default=0.05)
    b.add_argument("--n", type=int, default=200)
    b.add_argument("--n-boot", type=int, default=1000)
    b.add_argument("--p", type=float, default=2.0)
    b.add_argument("--output", required=True)
    b.set_defaults(func=cmd_critvals_build)
    s = cvs.add_parser("show", help="print a critical-value function")
    s.add_argument("path")
    s.set_defaults(func=cmd_critvals_show)

    ex = sub.add_parser("experiment", help="simulation designs")
    exs = ex.add_subparsers(dest="action", required=True)
    r = exs.add_parser("run", parents=[common], help="run a preset or a JSON config")
    r.add_argument("config", help="preset name (see 'experiment catalog') or config.json")
    r.add_argument("--replicates", type=int, default=None)
    r.add_argument("--n-mc", type=int, default=None)
    r.add_argument("--no-plot", action="store_true")
    r.set_defaults(func=cmd_experiment_run)
    c = exs.add_parser("catalog", help="list presets")
    c.set_defaults(func=cmd_experiment_catalog)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except WgofError as exc:
        print(f"wgof: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
