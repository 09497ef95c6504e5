"""Monte Carlo critical values and critical-value functions over a shape parameter.

A critical-value function stores, for each point of a grid of shape values,
the (1 - alpha)-quantile of simulated null statistics and an ordinary least
squares polynomial through those values.  Files are versioned JSON.
"""
from __future__ import annotations

import hashlib
import json
import math
import os
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import linalg

from .errors import ConfigurationError, CvfIOError, DomainError
from .gof import ParametricModel, hybrid_null_draws, rank_p_value
from .transport import SolverConfig

__all__ = [
    "mc_critical_value", "dkw_budget", "CriticalValueFunction", "build_cv_function", "build_cv_functions",
    "eval_cv", "save_cvf", "load_cvf", "default_grid", "DrawCache", "SCHEMA_VERSION",
]

SCHEMA_VERSION = 1
DEFAULT_DEGREE = 6
MIN_BOOT = 500


def mc_critical_value(draws, alpha: float) -> float:
    """Order statistic of rank ``ceil((1 - alpha) N)`` (1-based) of the draws.

    This is the smallest t whose empirical distribution function is at least
    ``1 - alpha``.
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (0, 1)")
    d = np.sort(np.asarray(draws, dtype=float))
    if d.size == 0:
        raise DomainError("no draws")
    # guard against (1 - alpha) N landing just above an integer in floating point
    k = math.ceil((1.0 - alpha) * d.size - 1e-9)
    return float(d[max(k, 1) - 1])


def dkw_budget(eps: float, delta: float) -> int:
    """Smallest N with ``P(sup |F_N - F| > eps) <= delta`` by the DKW inequality."""
    if not (0 < eps < 1 and 0 < delta < 1):
        raise DomainError("eps and delta must lie in (0, 1)")
    return int(math.ceil(math.log(2.0 / delta) / (2.0 * eps * eps)))


def _scaled(psi, domain):
    lo, hi = domain
    if hi == lo:
        return np.zeros_like(np.asarray(psi, dtype=float))
    return (2.0 * np.asarray(psi, dtype=float) - (lo + hi)) / (hi - lo)


def _fit_poly(x: np.ndarray, y: np.ndarray, degree: int) -> np.ndarray:
    if x.size < degree + 1:
        raise ConfigurationError(f"a degree-{degree} fit needs at least {degree + 1} grid points")
    v = np.vander(x, degree + 1, increasing=True)
    norms = np.linalg.norm(v, axis=0)
    q, r = linalg.qr(v / norms, mode="economic")
    if np.min(np.abs(np.diag(r))) < 1e-12 * np.max(np.abs(np.diag(r))):
        raise ConfigurationError("the Vandermonde matrix is rank deficient")
    return linalg.solve_triangular(r, q.T @ y) / norms


@dataclass
class CriticalValueFunction:
    """Critical values on a shape grid plus their polynomial smoother.

    The polynomial is in the variable ``(2 psi - lo - hi) / (hi - lo)`` that
    maps ``domain`` onto [-1, 1]; ``poly_coeffs`` are in increasing order.
    ``draws`` optionally keeps the sorted null statistics per grid point for
    p-value interpolation.
    """

    psi_grid: np.ndarray
    cv_grid: np.ndarray
    poly_coeffs: np.ndarray
    domain: tuple
    meta: dict
    draws: Optional[list] = field(default=None, repr=False)

    @property
    def degree(self) -> int:
        return len(self.poly_coeffs) - 1

    @classmethod
    def fit(cls, psi_grid, cv_grid, meta: dict, degree: int = DEFAULT_DEGREE, domain=None, draws=None):
        psi = np.asarray(psi_grid, dtype=float)
        order = np.argsort(psi, kind="stable")
        psi, cv = psi[order], np.asarray(cv_grid, dtype=float)[order]
        dom = (float(psi[0]), float(psi[-1])) if domain is None else (float(domain[0]), float(domain[1]))
        coeffs = _fit_poly(_scaled(psi, dom), cv, degree)
        if draws is not None:
            draws = [np.sort(np.asarray(draws[i], dtype=float)) for i in order]
        return cls(psi, cv, coeffs, dom, dict(meta), draws)

    def __call__(self, psi) -> float:
        return eval_cv(self, psi)

    def residual_rms(self) -> float:
        fitted = np.polynomial.polynomial.polyval(_scaled(self.psi_grid, self.domain), self.poly_coeffs)
        return float(np.sqrt(np.mean((fitted - self.cv_grid) ** 2)))

    def p_value(self, statistic: float, psi: float) -> float:
        """Rank p-value against grid draws interpolated quantile-wise at ``psi``."""
        if not self.draws:
            return float("nan")
        g = self.psi_grid
        psi = float(np.clip(psi, g[0], g[-1]))
        j = int(np.clip(np.searchsorted(g, psi) - 1, 0, len(g) - 2)) if len(g) > 1 else 0
        if len(g) == 1:
            return rank_p_value(statistic, self.draws[0])
        lam = (psi - g[j]) / (g[j + 1] - g[j])
        a, b = self.draws[j], self.draws[j + 1]
        if lam == 0.0 or lam == 1.0:
            return rank_p_value(statistic, a if lam == 0.0 else b)
        if a.size != b.size:
            m = min(a.size, b.size)
            a = np.quantile(a, (np.arange(m) + 0.5) / m)
            b = np.quantile(b, (np.arange(m) + 0.5) / m)
        return rank_p_value(statistic, (1.0 - lam) * a + lam * b)

    def to_dict(self) -> dict:
        out = {"schema_version": SCHEMA_VERSION, "psi_grid": [float(v) for v in self.psi_grid],
               "cv_grid": [float(v) for v in self.cv_grid], "poly_coeffs": [float(v) for v in self.poly_coeffs],
               "domain": [float(v) for v in self.domain], "meta": self.meta}
        if self.draws is not None:
            out["draws"] = [[float(v) for v in d] for d in self.draws]
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "CriticalValueFunction":
        if not isinstance(d, dict):
            raise CvfIOError("critical-value file must hold a JSON object")
        if d.get("schema_version") != SCHEMA_VERSION:
            raise CvfIOError(f"unsupported critical-value file version {d.get('schema_version')!r}")
        draws = d.get("draws")
        return cls(np.array(d["psi_grid"], dtype=float), np.array(d["cv_grid"], dtype=float),
                   np.array(d["poly_coeffs"], dtype=float), tuple(d["domain"]), dict(d["meta"]),
                   None if draws is None else [np.array(x, dtype=float) for x in draws])


def eval_cv(cvf: CriticalValueFunction, psi) -> float:
    """Smoothed critical value at ``psi``, clamped to the domain and to be >= 0."""
    lo, hi = cvf.domain
    psi = float(psi)
    if psi < lo or psi > hi:
        warnings.warn(f"shape {psi} outside [{lo}, {hi}]; clamped to the nearest endpoint",
                      RuntimeWarning, stacklevel=2)
        psi = min(max(psi, lo), hi)
    val = np.polynomial.polynomial.polyval(_scaled(psi, cvf.domain), cvf.poly_coeffs)
    return max(float(val), 0.0)


def default_grid(lo: float, hi: float, points: int = 15) -> np.ndarray:
    """``points`` equispaced values strictly inside (lo, hi)."""
    return lo + (hi - lo) * np.arange(1, points + 1) / (points + 1)


def build_cv_functions(model: ParametricModel, psi_grid: Sequence[float], alphas: Sequence[float], n: int,
                       n_boot: int, p_order, cfg: SolverConfig = SolverConfig(), seed: int = 0,
                       threads: int = 1, degree: int = DEFAULT_DEGREE,
                       keep_draws: bool = True) -> list[CriticalValueFunction]:
    """Critical-value functions for several levels from one set of grid simulations."""
    psi_grid = np.asarray(psi_grid, dtype=float)
    if n_boot < MIN_BOOT:
        raise ConfigurationError(f"at least {MIN_BOOT} draws per grid point are required")
    if psi_grid.size < degree + 1:
        raise ConfigurationError(f"a degree-{degree} fit needs at least {degree + 1} grid points")
    if model.psi_range is not None:
        lo, hi = model.psi_range
        if np.any(psi_grid < lo) or np.any(psi_grid > hi):
            raise ConfigurationError("grid leaves the model's shape domain")
    for a in alphas:
        if not 0 < a < 1:
            raise ConfigurationError("levels must lie in (0, 1)")
    all_draws = [hybrid_null_draws(model, psi, n, p_order, n_boot, cfg, seed, threads)[0] for psi in psi_grid]
    out = []
    for a in alphas:
        cv = [mc_critical_value(d, a) for d in all_draws]
        meta = {"alpha": float(a), "n": int(n), "B": int(n_boot), "p_order": float(p_order),
                "model": model.name, "seed": int(seed), "degree": int(degree), "solver": cfg.to_dict()}
        out.append(CriticalValueFunction.fit(psi_grid, cv, meta, degree, draws=all_draws if keep_draws else None))
    return out


def build_cv_function(model: ParametricModel, psi_grid: Sequence[float], alpha: float, n: int, n_boot: int,
                      p_order, cfg: SolverConfig = SolverConfig(), seed: int = 0, threads: int = 1,
                      degree: int = DEFAULT_DEGREE) -> CriticalValueFunction:
    """Simulate critical values on ``psi_grid`` and fit the smoothing polynomial."""
    return build_cv_functions(model, psi_grid, [alpha], n, n_boot, p_order, cfg, seed, threads, degree)[0]


def _dumps(cvf: CriticalValueFunction) -> str:
    return json.dumps(cvf.to_dict(), sort_keys=True, indent=1) + "\n"


def save_cvf(cvf: CriticalValueFunction, path) -> None:
    """Write ``cvf`` as versioned JSON (floats in shortest round-trip form)."""
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(_dumps(cvf))
    os.replace(tmp, path)


def load_cvf(path) -> CriticalValueFunction:
    """Read a file written by :func:`save_cvf`; raise CvfIOError on any defect."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        return CriticalValueFunction.from_dict(data)
    except CvfIOError:
        raise
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise CvfIOError(f"cannot read critical-value file {path}: {exc}") from exc


class DrawCache:
    """Directory of ``.npy`` arrays keyed by a hash of a JSON description."""

    def __init__(self, root):
        self.root = os.fspath(root)

    def path(self, key: dict) -> str:
        h = hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()[:24]
        return os.path.join(self.root, f"draws-{h}.npy")

    def get_or_compute(self, key: dict, compute):
        p = self.path(key)
        if os.path.exists(p):
            return np.load(p)
        arr = np.asarray(compute(), dtype=float)
        os.makedirs(self.root, exist_ok=True)
        np.save(p, arr)
        return arr
