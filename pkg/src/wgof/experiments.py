"""Config-driven simulation harness: power curves and calibration plots.

An experiment fixes a null hypothesis, a family of data-generating laws
indexed by one parameter, a list of tests and the Monte Carlo budget.  Every
replicate draws its data from the stream ``(seed, id, "data", grid index,
replicate)``, so results do not depend on the number of worker threads.
"""
from __future__ import annotations

import copy
import csv
import difflib
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np

from .baselines import khmaladze_null, khmaladze_statistic, rms_statistic
from .copulas import CopulaSpec
from .critvals import build_cv_functions
from .distributions import (EllipticalT, Gaussian, GaussianMixture, Margin, MetaCopula, Product, SkewT,
                            TargetDistribution, Univariate, from_config, make_boomerang, max_stable_gumbel)
from .errors import ConfigurationError, DegenerateSampleError, NumericError
from .gof import (GroupModel, affine_group, gaussian_amh_model, group_null_draws, group_statistic,
                  gumbel_max_stable_model, hybrid_statistic, rank_critical_value, run_draws, simple_null_draws)
from .rng import stream
from .transport import SolverConfig, estimate_wpp

__all__ = ["ExperimentConfig", "PowerCurveRow", "CSV_HEADER", "PRESETS", "catalog", "get_preset",
           "load_config", "run_power_curve", "run_calibration", "run_experiment", "ALTERNATIVES"]

CSV_HEADER = ("experiment", "test", "p", "param", "rate", "n", "alpha", "replicates", "seed")
TESTS = ("wasserstein-p1", "wasserstein-p2", "rms", "khmaladze")

DESK = {"replicates": 500, "n_mc": 2000, "ref_sample_size": 20_000}
PAPER = {"replicates": 1000, "n_mc": 10_000, "ref_sample_size": 200_000}


# ----------------------------------------------------------------------------
# alternatives indexed by one parameter
# ----------------------------------------------------------------------------

def _corr2(r):
    return [[1.0, r], [r, 1.0]]


def _tcop_normal(r, nu=4.0):
    return MetaCopula(CopulaSpec("student-t", rho=r, nu=nu, dim=2), [Margin.normal()] * 2)


def _gumbel_normal(theta, dim=2):
    return MetaCopula(CopulaSpec("gumbel", theta, dim), [Margin.normal()] * dim)


def _mixture(w, shift=0.0):
    return GaussianMixture([w, 1.0 - w], [Gaussian([0.0, 0.0]), Gaussian([3.0 + shift, 0.0])])


def _t_product(nus, shift=0.0):
    return Product([Univariate(Margin.student(v, shift)) for v in nus])


def _t4_dep(delta):
    # three independent t25 coordinates and a bivariate t25 with correlation delta
    chol = np.linalg.cholesky(np.array(_corr2(delta)))
    return Product([Univariate(Margin.student(25.0))] * 3 + [EllipticalT(np.zeros(2), chol, 25.0)])


def _normal_x_gumbel5(psi):
    return Product([Univariate(Margin.normal())] * 3 + [_gumbel_normal(psi)])


def _skew_t(a):
    a1, a2 = a
    return SkewT(np.zeros(2), np.eye(2), [a1, a2], 12.0)


def _frank_normal(theta):
    if theta == 0.0:
        return MetaCopula(CopulaSpec("independence", 0.0, 2), [Margin.normal()] * 2)
    return MetaCopula(CopulaSpec("frank", theta, 2), [Margin.normal()] * 2)


ALTERNATIVES: dict[str, Callable[..., TargetDistribution]] = {
    "diag-shift": lambda m: Gaussian([m, m]),
    "isotropic-variance": lambda s2: Gaussian([0.0, 0.0], s2 * np.eye(2)),
    "correlation": lambda r: Gaussian([0.0, 0.0], _corr2(r)),
    "gumbel-normal": _gumbel_normal,
    "tcop-normal": _tcop_normal,
    "boomerang": make_boomerang,
    "mixture-shift": lambda d: _mixture(0.5, d),
    "mixture-weight": lambda w: _mixture(w),
    "t5-df": lambda v: _t_product([v] * 5),
    "t5-shift": lambda m: _t_product([25.0] * 5, m),
    "t5-dependence": _t4_dep,
    "normal-x-t": lambda v: Product([Univariate(Margin.normal()), Univariate(Margin.student(v))]),
    "normal3-x-gumbel": _normal_x_gumbel5,
    "t-margins-5": lambda v: _t_product([v] * 5),
    "skew-t-12": _skew_t,
    "frank-normal": _frank_normal,
    "amh-normal-margins": lambda psi: MetaCopula(CopulaSpec("amh", psi), [Margin.normal(2.0, 3.0),
                                                                          Margin.normal(-1.0, 0.5)]),
    "max-stable-gev-2": lambda xi: max_stable_gumbel(5.0 / 3.0, 2, xi),
    "max-stable-gev-5": lambda xi: max_stable_gumbel(5.0 / 3.0, 5, xi),
}


def _substitute(obj, value):
    if obj == "$param":
        return value
    if isinstance(obj, dict):
        return {k: _substitute(v, value) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_substitute(v, value) for v in obj]
    return obj


def build_alternative(spec: dict, value) -> TargetDistribution:
    """Law at grid value ``value``.

    ``spec`` is ``{"builder": name, "kwargs": {...}}`` for a registered
    builder, or ``{"template": <distribution config>}`` in which every
    ``"$param"`` string is replaced by the grid value.
    """
    if "builder" in spec:
        name = spec["builder"]
        if name not in ALTERNATIVES:
            raise ConfigurationError(f"unknown alternative builder {name!r}")
        return ALTERNATIVES[name](value, **spec.get("kwargs", {}))
    if "template" in spec:
        return from_config(_substitute(copy.deepcopy(spec["template"]), value))
    raise ConfigurationError("alternative needs a 'builder' or a 'template'")


# ----------------------------------------------------------------------------
# configuration
# ----------------------------------------------------------------------------

@dataclass
class ExperimentConfig:
    """One simulation design.

    ``null`` is one of

    * ``{"type": "simple", "dist": <distribution config>}``
    * ``{"type": "group", "group": "affine", "base": <distribution config>}``
    * ``{"type": "hybrid", "model": "gaussian-amh" | "gumbel-max-stable",
      "dim": d, "psi_grid": [...], "n_boot": B}``

    ``kind`` is ``power`` (one row per test and grid value) or
    ``calibration`` (grid = nominal levels, data from ``alternative`` at
    ``data_param``).
    """

    id: str
    title: str
    null: dict
    alternative: dict
    grid: list
    tests: list = field(default_factory=lambda: ["wasserstein-p1", "wasserstein-p2"])
    kind: str = "power"
    param_name: str = "param"
    data_param: Optional[float] = None
    n: int = 200
    alpha: float = 0.05
    replicates: int = DESK["replicates"]
    n_mc: int = DESK["n_mc"]
    seed: int = 0
    solver: dict = field(default_factory=lambda: {"ref_sample_size": DESK["ref_sample_size"]})

    def solver_config(self) -> SolverConfig:
        return SolverConfig.from_dict({"seed": self.seed, **self.solver})

    def scaled(self, paper: bool) -> "ExperimentConfig":
        if not paper:
            return self
        out = copy.deepcopy(self)
        out.replicates = PAPER["replicates"]
        out.n_mc = PAPER["n_mc"]
        out.solver = {**out.solver, "ref_sample_size": PAPER["ref_sample_size"]}
        if out.null.get("type") == "hybrid":
            out.null = {**out.null, "n_boot": 1000}
        return out

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConfigurationError(f"bad experiment config: {exc}") from exc

    def validate(self) -> None:
        """Check every field and build every grid law before any replicate runs."""
        if self.kind not in ("power", "calibration"):
            raise ConfigurationError(f"unknown experiment kind {self.kind!r}")
        if self.replicates < 1 or self.n < 2:
            raise ConfigurationError("replicates must be >= 1 and n >= 2")
        if not 0 < self.alpha < 1:
            raise ConfigurationError("alpha must lie in (0, 1)")
        if not self.grid:
            raise ConfigurationError("empty parameter grid")
        for t in self.tests:
            if t not in TESTS:
                raise ConfigurationError(f"unknown test {t!r}; expected one of {TESTS}")
        ntype = self.null.get("type")
        if ntype not in ("simple", "group", "hybrid"):
            raise ConfigurationError(f"unknown null type {ntype!r}")
        if ntype != "simple" and any(t in ("rms", "khmaladze") for t in self.tests):
            raise ConfigurationError("rms and khmaladze apply to simple nulls only")
        if "rms" in self.tests and not isinstance(_null_dist(self), Gaussian):
            raise ConfigurationError("the rms test needs a Gaussian null")
        self.solver_config()
        if self.kind == "calibration":
            if ntype != "hybrid":
                raise ConfigurationError("calibration runs are defined for hybrid nulls")
            for a in self.grid:
                if not 0 < float(a) < 1:
                    raise ConfigurationError(f"nominal level {a} outside (0, 1)")
            build_alternative(self.alternative, self.data_param)
        else:
            for v in self.grid:
                build_alternative(self.alternative, v)
        if ntype == "hybrid":
            model = _hybrid_model(self)
            g = np.asarray(self.null["psi_grid"], dtype=float)
            lo, hi = model.psi_range
            if np.any(g < lo) or np.any(g > hi):
                raise ConfigurationError("psi_grid leaves the model's shape domain")


@dataclass(frozen=True)
class PowerCurveRow:
    experiment: str
    test: str
    p: str
    param: str
    rate: float
    n: int
    alpha: float
    replicates: int
    seed: int

    def as_list(self) -> list:
        return [self.experiment, self.test, self.p, self.param, repr(self.rate), str(self.n), repr(self.alpha),
                str(self.replicates), str(self.seed)]


def _fmt(v) -> str:
    if isinstance(v, (list, tuple)):
        return ";".join(_fmt(x) for x in v)
    return repr(float(v))


def _null_dist(cfg: ExperimentConfig) -> TargetDistribution:
    if cfg.null["type"] == "simple":
        return from_config(cfg.null["dist"])
    return from_config(cfg.null["base"])


def _group(cfg: ExperimentConfig, dim: int) -> GroupModel:
    name = cfg.null.get("group", "affine")
    if name != "affine":
        raise ConfigurationError(f"unknown group {name!r}")
    return affine_group(dim)


def _hybrid_model(cfg: ExperimentConfig):
    name = cfg.null["model"]
    if name == "gaussian-amh":
        return gaussian_amh_model()
    if name == "gumbel-max-stable":
        return gumbel_max_stable_model(int(cfg.null.get("dim", 2)))
    raise ConfigurationError(f"unknown hybrid model {name!r}")


def _p_of(test: str) -> str:
    return test[-1] if test.startswith("wasserstein") else ""


# ----------------------------------------------------------------------------
# running
# ----------------------------------------------------------------------------

class _Log:
    def __init__(self):
        self.lines = []

    def add(self, msg):
        self.lines.append(msg)


def _map(fn, items, threads):
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            return list(ex.map(fn, items))
    return [fn(i) for i in items]


def _decisions(cfg: ExperimentConfig, law: TargetDistribution, gi: int, stat_fn, reject_fn, test: str,
               threads: int, log: _Log) -> int:
    """Number of rejections over the replicates; failed replicates count as acceptances."""
    def one(r):
        x = law.sample(cfg.n, stream(cfg.seed, cfg.id, "data", gi, r))
        try:
            return bool(reject_fn(stat_fn(x, stream(cfg.seed, cfg.id, test, "statistic", gi, r))))
        except (DegenerateSampleError, NumericError) as exc:
            log.add(f"{cfg.id} {test} grid={gi} replicate={r}: discarded ({exc})")
            return False
    return int(sum(_map(one, range(cfg.replicates), threads)))


def _test_machinery(cfg: ExperimentConfig, test: str, scfg: SolverConfig, threads: int, log: _Log):
    """Return (statistic function, critical value) for a simple or group null."""
    null = _null_dist(cfg)
    ntype = cfg.null["type"]
    if test.startswith("wasserstein"):
        p = float(_p_of(test))
        if ntype == "simple":
            draws, lost = simple_null_draws(null, cfg.n, p, cfg.n_mc, scfg, cfg.seed, threads)
            fn = lambda x, rng: estimate_wpp(x, null, p, scfg, rng=rng)  # noqa: E731
        else:
            group = _group(cfg, null.dim)
            draws, lost = group_null_draws(group, null, cfg.n, p, cfg.n_mc, scfg, cfg.seed, threads)
            fn = lambda x, rng: group_statistic(x, group, null, p, scfg, rng)  # noqa: E731
    elif test == "rms":
        mu, cov = null.mean, null.cov
        fn = lambda x, rng: rms_statistic(x, mu, cov)  # noqa: E731
        draws, lost = run_draws(lambda rng: fn(null.sample(cfg.n, rng), rng), cfg.n_mc, cfg.seed,
                                ("rms-null", null.key, cfg.n), threads)
    else:
        kn = khmaladze_null(null, seed=cfg.seed)
        fn = lambda x, rng: khmaladze_statistic(x, kn)  # noqa: E731
        draws, lost = run_draws(lambda rng: fn(null.sample(cfg.n, rng), rng), cfg.n_mc, cfg.seed,
                                ("khmaladze-null", null.key, cfg.n), threads)
    if lost:
        log.add(f"{cfg.id} {test}: {lost} of {cfg.n_mc} null draws discarded")
    return fn, rank_critical_value(draws, cfg.alpha)


def _hybrid_cvfs(cfg: ExperimentConfig, model, p: float, alphas, scfg, threads):
    return build_cv_functions(model, cfg.null["psi_grid"], alphas, cfg.n, int(cfg.null.get("n_boot", 500)),
                              p, scfg, cfg.seed, threads, degree=int(cfg.null.get("degree", 6)), keep_draws=False)


def run_power_curve(cfg: ExperimentConfig, threads: int = 1, log: Optional[_Log] = None) -> list[PowerCurveRow]:
    """Rejection rates of every test at every grid value."""
    cfg.validate()
    log = log or _Log()
    scfg = cfg.solver_config()
    laws = [build_alternative(cfg.alternative, v) for v in cfg.grid]
    rows = []
    for test in cfg.tests:
        if cfg.null["type"] == "hybrid":
            model = _hybrid_model(cfg)
            p = float(_p_of(test))
            cvf = _hybrid_cvfs(cfg, model, p, [cfg.alpha], scfg, threads)[0]
            stat = lambda x, rng: hybrid_statistic(x, model, p, scfg, rng)  # noqa: E731
            reject = lambda tp: tp[0] >= cvf(tp[1])  # noqa: E731
        else:
            stat, cv = _test_machinery(cfg, test, scfg, threads, log)
            reject = lambda t, cv=cv: t >= cv  # noqa: E731
        for gi, (v, law) in enumerate(zip(cfg.grid, laws)):
            k = _decisions(cfg, law, gi, stat, reject, test, threads, log)
            rows.append(PowerCurveRow(cfg.id, test, _p_of(test), _fmt(v), k / cfg.replicates, cfg.n,
                                      float(cfg.alpha), cfg.replicates, cfg.seed))
    return rows


def run_calibration(cfg: ExperimentConfig, threads: int = 1, log: Optional[_Log] = None) -> list[PowerCurveRow]:
    """Empirical rejection rate at each nominal level for data drawn from the null model."""
    cfg.validate()
    log = log or _Log()
    scfg = cfg.solver_config()
    model = _hybrid_model(cfg)
    law = build_alternative(cfg.alternative, cfg.data_param)
    alphas = [float(a) for a in cfg.grid]
    rows = []
    for test in cfg.tests:
        p = float(_p_of(test))
        cvfs = _hybrid_cvfs(cfg, model, p, alphas, scfg, threads)

        def one(r):
            x = law.sample(cfg.n, stream(cfg.seed, cfg.id, "data", 0, r))
            try:
                t, psi = hybrid_statistic(x, model, p, scfg, stream(cfg.seed, cfg.id, test, "statistic", 0, r))
            except (DegenerateSampleError, NumericError) as exc:
                log.add(f"{cfg.id} {test} replicate={r}: discarded ({exc})")
                return [False] * len(alphas)
            return [bool(t >= c(psi)) for c in cvfs]

        dec = np.array(_map(one, range(cfg.replicates), threads), dtype=bool).reshape(cfg.replicates, len(alphas))
        for j, a in enumerate(alphas):
            rows.append(PowerCurveRow(cfg.id, test, _p_of(test), _fmt(a), int(dec[:, j].sum()) / cfg.replicates,
                                      cfg.n, a, cfg.replicates, cfg.seed))
    return rows


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.as_list())
    return buf.getvalue()


def plot_rows(cfg: ExperimentConfig, rows, path) -> None:
    """Static PNG: rate against parameter, one line per test."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 4))
    for test in dict.fromkeys(r.test for r in rows):
        sel = [r for r in rows if r.test == test]
        xs = list(range(len(sel)))
        labels = [r.param for r in sel]
        try:
            xs = [float(s) for s in labels]
            labels = None
        except ValueError:
            pass
        ax.plot(xs, [r.rate for r in sel], marker="o", label=test)
        if labels is not None:
            ax.set_xticks(xs)
            ax.set_xticklabels(labels, rotation=60, fontsize=7)
    if cfg.kind == "calibration":
        ax.plot([0, 0.5], [0, 0.5], color="grey", lw=0.8)
        ax.set_xlabel("nominal level")
        ax.set_ylabel("empirical rejection rate")
    else:
        ax.axhline(cfg.alpha, color="grey", lw=0.8, ls=":")
        ax.set_xlabel(cfg.param_name)
        ax.set_ylabel("rejection rate")
        ax.set_ylim(-0.02, 1.02)
    ax.set_title(cfg.title, fontsize=9)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)


def run_experiment(cfg: ExperimentConfig, out_dir=None, threads: int = 1, plot: bool = True) -> tuple[list, str]:
    """Run a power or calibration design; write CSV, PNG and a discard log under ``out_dir``."""
    log = _Log()
    rows = (run_calibration if cfg.kind == "calibration" else run_power_curve)(cfg, threads, log)
    text = rows_to_csv(rows)
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, f"{cfg.id}.csv"), "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        with open(os.path.join(out_dir, f"{cfg.id}.discarded.log"), "w", encoding="utf-8") as fh:
            fh.write("".join(line + "\n" for line in log.lines))
        if plot:
            plot_rows(cfg, rows, os.path.join(out_dir, f"{cfg.id}.png"))
    return rows, text


# ----------------------------------------------------------------------------
# presets
# ----------------------------------------------------------------------------

_N2 = {"type": "simple", "dist": {"family": "gaussian", "params": {"mean": [0.0, 0.0]}}}
_ALL4 = ["wasserstein-p1", "wasserstein-p2", "rms", "khmaladze"]
_W3 = ["wasserstein-p1", "wasserstein-p2", "khmaladze"]
_MIX = {"type": "simple", "dist": {"family": "gaussian-mixture", "params": {
    "weights": [0.5, 0.5], "means": [[0.0, 0.0], [3.0, 0.0]], "covs": [np.eye(2).tolist()] * 2}}}
_GUMBEL17 = {"type": "simple", "dist": {"family": "meta-copula", "params": {
    "copula": {"family": "gumbel", "theta": 1.7, "dim": 2},
    "margins": [{"kind": "normal", "params": [0.0, 1.0]}] * 2}}}
_T5 = {"type": "simple", "dist": {"family": "product", "params": {
    "parts": [{"family": "univariate", "params": {"kind": "t", "params": [25.0, 0.0, 1.0]}}] * 5}}}


def _normality(d):
    return {"type": "group", "group": "affine", "base": {"family": "gaussian", "params": {"mean": [0.0] * d}}}


_LEVELS = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5]
_AMH_GRID = [round(v, 4) for v in np.linspace(0.3, 0.98, 9)]
_AMH_WIDE = [round(v, 4) for v in np.linspace(-0.95, 0.95, 15)]
_GUMBEL_GRID = [round(v, 4) for v in np.linspace(1.2, 2.4, 9)]


def _e(**kw) -> ExperimentConfig:
    return ExperimentConfig(**kw)


PRESETS: dict[str, ExperimentConfig] = {c.id: c for c in [
    _e(id="fig1a", title="N2(0,I) null; diagonal location shift", null=_N2,
       alternative={"builder": "diag-shift"}, param_name="mu",
       grid=[-1.0, -0.5, -0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3, 0.5, 1.0], tests=_ALL4),
    _e(id="fig1b", title="N2(0,I) null; isotropic variance", null=_N2,
       alternative={"builder": "isotropic-variance"}, param_name="sigma^2",
       grid=[0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4], tests=_ALL4),
    _e(id="fig1c", title="N2(0,I) null; correlation", null=_N2, alternative={"builder": "correlation"},
       param_name="rho", grid=[-0.4, -0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3, 0.4], tests=_ALL4),
    _e(id="fig1d", title="N2(0,I) null; Gumbel copula, normal margins", null=_N2,
       alternative={"builder": "gumbel-normal"}, param_name="theta",
       grid=[1.0, 1.1, 1.2, 1.3, 1.5, 1.75, 2.0], tests=_ALL4),
    _e(id="fig1e", title="N2(0,I) null; t4 copula, normal margins", null=_N2,
       alternative={"builder": "tcop-normal"}, param_name="rho",
       grid=[-0.5, -0.3, -0.1, 0.0, 0.1, 0.3, 0.5], tests=_ALL4),
    _e(id="fig1f", title="N2(0,I) null; boomerang mixture", null=_N2, alternative={"builder": "boomerang"},
       param_name="p", grid=[0.0, 0.1, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5], tests=_ALL4),
    _e(id="fig2a", title="Gaussian mixture null; second component shift", null=_MIX,
       alternative={"builder": "mixture-shift"}, param_name="delta",
       grid=[-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5], tests=_W3),
    _e(id="fig2b", title="Gaussian mixture null; mixing weight", null=_MIX,
       alternative={"builder": "mixture-weight"}, param_name="lambda",
       grid=[0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7], tests=_W3),
    _e(id="fig3", title="Gumbel(1.7) copula, normal margins null; copula parameter", null=_GUMBEL17,
       alternative={"builder": "gumbel-normal"}, param_name="theta",
       grid=[1.0, 1.2, 1.4, 1.55, 1.7, 1.85, 2.0, 2.3, 2.6], tests=_W3),
    _e(id="fig4a", title="t25 x5 null; degrees of freedom", null=_T5, alternative={"builder": "t5-df"},
       param_name="nu", grid=[3.0, 4.0, 5.0, 7.0, 10.0, 25.0], tests=_W3),
    _e(id="fig4b", title="t25 x5 null; location shift", null=_T5, alternative={"builder": "t5-shift"},
       param_name="mu", grid=[-0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3], tests=_W3),
    _e(id="fig4c", title="t25 x5 null; t25 x t25 x t25 x t25,delta", null=_T5,
       alternative={"builder": "t5-dependence"}, param_name="delta",
       grid=[-0.6, -0.4, -0.2, 0.0, 0.2, 0.4, 0.6], tests=_W3),
    _e(id="fig5a", title="Normality test d=2; Gumbel copula, normal margins", null=_normality(2),
       alternative={"builder": "gumbel-normal"}, param_name="psi", grid=[1.0, 1.25, 1.5, 1.75, 2.0, 2.5]),
    _e(id="fig5b", title="Normality test d=2; N x t_nu", null=_normality(2), alternative={"builder": "normal-x-t"},
       param_name="nu", grid=[3.0, 5.0, 10.0, 20.0, 50.0]),
    _e(id="fig5c", title="Normality test d=5; N3 x D(psi)", null=_normality(5),
       alternative={"builder": "normal3-x-gumbel"}, param_name="psi", grid=[1.0, 1.25, 1.5, 2.0, 2.5]),
    _e(id="fig5d", title="Normality test d=5; t_nu margins", null=_normality(5),
       alternative={"builder": "t-margins-5"}, param_name="nu", grid=[3.0, 5.0, 10.0, 20.0, 50.0]),
    _e(id="fig6", title="Elliptical t12 family; skew-t alternatives (alpha1;alpha2)",
       null={"type": "group", "group": "affine",
             "base": {"family": "elliptical-t", "params": {"mean": [0.0, 0.0], "nu": 12.0}}},
       alternative={"builder": "skew-t-12"}, param_name="alpha1;alpha2",
       grid=[[a1, a2] for a1 in (0.0, 2.0, 5.0) for a2 in (-5.0, 0.0, 2.0, 5.0)]),
    _e(id="fig7a", title="Gaussian-AMH family; calibration at psi=0.7", kind="calibration",
       null={"type": "hybrid", "model": "gaussian-amh", "psi_grid": _AMH_GRID, "n_boot": 500},
       alternative={"builder": "amh-normal-margins"}, data_param=0.7, grid=_LEVELS,
       tests=["wasserstein-p2"], param_name="alpha"),
    _e(id="fig7b", title="Gaussian-AMH family; Frank copula alternatives",
       null={"type": "hybrid", "model": "gaussian-amh", "psi_grid": _AMH_WIDE, "n_boot": 500},
       alternative={"builder": "frank-normal"}, param_name="theta",
       grid=[-8.0, -4.0, -2.0, 0.0, 2.0, 4.0, 8.0], tests=["wasserstein-p2"]),
    _e(id="fig8a", title="Gumbel max-stable d=2; calibration at psi=5/3", kind="calibration",
       null={"type": "hybrid", "model": "gumbel-max-stable", "dim": 2, "psi_grid": _GUMBEL_GRID, "n_boot": 500},
       alternative={"builder": "max-stable-gev-2"}, data_param=0.0, grid=_LEVELS, param_name="alpha"),
    _e(id="fig8b", title="Gumbel max-stable d=2; GEV margins",
       null={"type": "hybrid", "model": "gumbel-max-stable", "dim": 2, "psi_grid": _GUMBEL_GRID, "n_boot": 500},
       alternative={"builder": "max-stable-gev-2"}, param_name="xi",
       grid=[-0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3]),
    _e(id="fig8c", title="Gumbel max-stable d=5; calibration at psi=5/3", kind="calibration",
       null={"type": "hybrid", "model": "gumbel-max-stable", "dim": 5, "psi_grid": _GUMBEL_GRID, "n_boot": 500},
       alternative={"builder": "max-stable-gev-5"}, data_param=0.0, grid=_LEVELS, param_name="alpha"),
    _e(id="fig8d", title="Gumbel max-stable d=5; GEV margins",
       null={"type": "hybrid", "model": "gumbel-max-stable", "dim": 5, "psi_grid": _GUMBEL_GRID, "n_boot": 500},
       alternative={"builder": "max-stable-gev-5"}, param_name="xi",
       grid=[-0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3]),
]}


def catalog() -> list[tuple[str, str]]:
    """``(id, title)`` of every built-in preset."""
    return [(k, c.title) for k, c in PRESETS.items()]


def get_preset(name: str) -> ExperimentConfig:
    if name not in PRESETS:
        close = difflib.get_close_matches(name, PRESETS, n=3, cutoff=0.4)
        hint = f"; did you mean {', '.join(close)}?" if close else ""
        raise ConfigurationError(f"unknown preset {name!r}{hint} Known presets: {', '.join(PRESETS)}")
    return copy.deepcopy(PRESETS[name])


def load_config(ref: str) -> ExperimentConfig:
    """A preset name or the path of a JSON experiment config."""
    if ref.endswith(".json") or os.path.exists(ref):
        try:
            with open(ref, encoding="utf-8") as fh:
                return ExperimentConfig.from_dict(json.load(fh))
        except (OSError, ValueError) as exc:
            raise ConfigurationError(f"cannot read experiment config {ref}: {exc}") from exc
    return get_preset(ref)
