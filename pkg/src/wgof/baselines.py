"""Comparison tests: the Gaussian W_2 moment test and a Khmaladze-type KS test.

Both are calibrated by Monte Carlo under the simple null, like the
Wasserstein tests, so that sizes are comparable at finite n.

The Khmaladze statistic is computed in copula coordinates u = (F_1(x_1), ...,
F_d(x_d)).  There the weight is l = c(u)^{1/2}, the product cdf is
G = u_1 ... u_d and kappa(x) = K(u) with K(u) the integral of c^{3/2} over
[0, u].  K is tabulated once per null by product Gauss-Legendre quadrature on
a regular grid and read off by bilinear interpolation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .copulas import copula_logpdf
from .distributions import DENSITY, Gaussian, MetaCopula, Product, TargetDistribution, Univariate
from .errors import DegenerateSampleError, DomainError, UnsupportedOperationError
from .gof import GofTestResult, _check_level, run_draws
from .measures import as_measure
from .rng import stream
from .transport import gaussian_w2_squared

__all__ = ["rms_statistic", "rms_test", "KhmaladzeNullSpec", "khmaladze_null", "khmaladze_statistic",
           "khmaladze_test"]


# ----------------------------------------------------------------------------
# Gaussian W_2 moment test
# ----------------------------------------------------------------------------

def rms_statistic(sample, mu0, cov0) -> float:
    """W_2^2 between N(mean, S) of the sample (1/(n-1) covariance) and N(mu0, cov0)."""
    x = as_measure(sample).points
    n, d = x.shape
    if n <= d:
        raise DegenerateSampleError("need more points than dimensions")
    cov = np.atleast_2d(np.cov(x.T))
    if np.linalg.matrix_rank(cov) < d:
        raise DegenerateSampleError("sample covariance is singular")
    return gaussian_w2_squared(x.mean(axis=0), cov, mu0, cov0)


def rms_test(sample, mu0, cov0, alpha: float = 0.05, n_mc: int = 2000, seed: int = 0, threads: int = 1,
             null_draws: Optional[np.ndarray] = None) -> GofTestResult:
    """Gaussian simple-null test on sample moments with Monte Carlo critical values."""
    x = as_measure(sample).points
    n = x.shape[0]
    mu0 = np.atleast_1d(np.asarray(mu0, dtype=float))
    cov0 = np.atleast_2d(np.asarray(cov0, dtype=float))
    lost = 0
    if null_draws is None:
        _check_level(alpha, n_mc)
        null = Gaussian(mu0, cov0)
        null_draws, lost = run_draws(lambda rng: rms_statistic(null.sample(n, rng), mu0, cov0),
                                     n_mc, seed, ("rms-null", null.key, n), threads)
    else:
        _check_level(alpha, len(null_draws))
    t = rms_statistic(x, mu0, cov0)
    return GofTestResult.from_draws(t, null_draws, alpha, {"method": "rms", "N": len(null_draws) + lost,
                                                           "discarded": lost, "seed": int(seed)})


# ----------------------------------------------------------------------------
# Khmaladze-type KS test
# ----------------------------------------------------------------------------

def _is_independent(dist: TargetDistribution) -> bool:
    if isinstance(dist, MetaCopula):
        return dist.copula.is_independence
    if isinstance(dist, Product):
        return all(p.dim == 1 for p in dist.parts)
    if isinstance(dist, Gaussian):
        c = dist.cov
        return bool(np.all(c == np.diag(np.diag(c))))
    return isinstance(dist, Univariate)


def _copula_logdensity(dist: TargetDistribution) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(dist, MetaCopula):
        return lambda u: copula_logpdf(dist.copula, u)
    if DENSITY not in dist.capabilities:
        raise UnsupportedOperationError(f"{dist.family} has no density")

    def logc(u):
        x = np.column_stack([dist.marginal_quantile(j, u[:, j]) for j in range(dist.dim)])
        return dist.logpdf(x) - sum(dist.margin(j).logpdf(x[:, j]) for j in range(dist.dim))
    return logc


_GL4_X, _GL4_W = np.polynomial.legendre.leggauss(4)


def _kappa_table(dist: TargetDistribution, m: int) -> np.ndarray:
    """Cumulative integrals of c^{3/2} over [0, i/m] x [0, j/m], shape (m+1, m+1)."""
    nodes = ((np.arange(m)[:, None] + 0.5 + 0.5 * _GL4_X) / m).ravel()
    wts = np.tile(0.5 * _GL4_W / m, m)
    # separable quantiles: evaluate the joint density on the tensor grid
    xs = [dist.marginal_quantile(j, nodes) for j in range(2)]
    lm = [dist.margin(j).logpdf(xs[j]) for j in range(2)]
    cell = np.empty((m, m))
    q = nodes.size
    for a in range(m):
        rows = slice(4 * a, 4 * a + 4)
        x0 = np.repeat(xs[0][rows], q)
        x1 = np.tile(xs[1], 4)
        if isinstance(dist, MetaCopula):
            u = np.column_stack([np.repeat(nodes[rows], q), np.tile(nodes, 4)])
            lc = copula_logpdf(dist.copula, u)
        else:
            lc = dist.logpdf(np.column_stack([x0, x1])) - np.repeat(lm[0][rows], q) - np.tile(lm[1], 4)
        vals = np.exp(1.5 * lc).reshape(4, q) * wts[rows][:, None] * wts[None, :]
        cell[a] = vals.reshape(4, m, 4).sum(axis=(0, 2))
    table = np.zeros((m + 1, m + 1))
    table[1:, 1:] = np.cumsum(np.cumsum(cell, axis=0), axis=1)
    return table


@dataclass
class KhmaladzeNullSpec:
    """Null law prepared for the Khmaladze statistic.

    Attributes
    ----------
    dist : TargetDistribution
    independent : bool
        Independence copula: l = 1, kappa(x) = G(x) and the correction term vanishes.
    kappa : float
        Integral of l f, i.e. of c^{3/2} over the unit cube.
    table : ndarray or None
        Cumulative kappa table on a regular grid of the unit square.
    ref_u : ndarray (m, d)
        Copula-scale reference points added to the supremum's evaluation set.
    """

    dist: TargetDistribution
    independent: bool
    kappa: float
    table: Optional[np.ndarray]
    ref_u: np.ndarray
    logc: Optional[Callable] = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.dist.dim

    def to_uniforms(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.column_stack([self.dist.marginal_cdf(j, x[:, j]) for j in range(self.dim)])

    def weight(self, u: np.ndarray) -> np.ndarray:
        if self.independent:
            return np.ones(u.shape[0])
        uc = np.clip(u, 1e-15, 1.0 - 1e-15)
        return np.exp(0.5 * self.logc(uc))

    def kappa_at(self, u: np.ndarray) -> np.ndarray:
        if self.independent:
            return np.prod(u, axis=1)
        m = self.table.shape[0] - 1
        s = np.clip(u, 0.0, 1.0) * m
        i = np.minimum(s.astype(int), m - 1)
        f = s - i
        t = self.table
        a, b = i[:, 0], i[:, 1]
        return ((1 - f[:, 0]) * (1 - f[:, 1]) * t[a, b] + f[:, 0] * (1 - f[:, 1]) * t[a + 1, b]
                + (1 - f[:, 0]) * f[:, 1] * t[a, b + 1] + f[:, 0] * f[:, 1] * t[a + 1, b + 1])


def khmaladze_null(dist: TargetDistribution, grid: int = 256, ref_points: int = 10_000,
                   seed: int = 0) -> KhmaladzeNullSpec:
    """Prepare ``dist`` for the Khmaladze statistic.

    Dependent nulls are supported in dimension 2; any dimension works with
    the independence copula.
    """
    d = dist.dim
    for j in range(d):
        dist.margin(j)
    rng = stream(seed, "khmaladze-ref", dist.key)
    if isinstance(dist, MetaCopula):
        ref_u = dist.sample_uniforms(ref_points, rng)
    else:
        ref_u = np.column_stack([dist.marginal_cdf(j, c) for j, c in enumerate(dist.sample(ref_points, rng).T)])
    if _is_independent(dist):
        return KhmaladzeNullSpec(dist, True, 1.0, None, ref_u)
    if d != 2:
        raise UnsupportedOperationError("dependent Khmaladze nulls are implemented for d = 2")
    table = _kappa_table(dist, grid)
    return KhmaladzeNullSpec(dist, False, float(table[-1, -1]), table, ref_u, _copula_logdensity(dist))


def khmaladze_statistic(sample, null: KhmaladzeNullSpec) -> float:
    """Supremum of the transformed empirical process over sample and reference points."""
    x = as_measure(sample).points
    if x.shape[1] != null.dim:
        raise DomainError("sample and null dimensions differ")
    n = x.shape[0]
    u = null.to_uniforms(x)
    ev = np.vstack([u, null.ref_u])
    below = np.ones((ev.shape[0], n), dtype=bool)
    for j in range(null.dim):
        below &= u[:, j][None, :] <= ev[:, j][:, None]
    lw = null.weight(u)
    kx = null.kappa_at(ev)
    proc = (below.astype(float) @ lw - n * kx) / np.sqrt(n)
    if not null.independent and abs(1.0 - null.kappa) >= 1e-6:
        g = np.prod(ev, axis=1)
        proc -= (g - kx) / (1.0 - null.kappa) * (np.sum(lw) - n * null.kappa) / np.sqrt(n)
    return float(np.max(np.abs(proc)))


def khmaladze_test(sample, null: KhmaladzeNullSpec, alpha: float = 0.05, n_mc: int = 2000, seed: int = 0,
                   threads: int = 1, null_draws: Optional[np.ndarray] = None) -> GofTestResult:
    """KS-type test with Monte Carlo critical values under the null law."""
    n = as_measure(sample).n
    lost = 0
    if null_draws is None:
        _check_level(alpha, n_mc)
        null_draws, lost = run_draws(lambda rng: khmaladze_statistic(null.dist.sample(n, rng), null),
                                     n_mc, seed, ("khmaladze-null", null.dist.key, n), threads)
    else:
        _check_level(alpha, len(null_draws))
    t = khmaladze_statistic(sample, null)
    return GofTestResult.from_draws(t, null_draws, alpha, {"method": "khmaladze", "N": len(null_draws) + lost,
                                                           "discarded": lost, "seed": int(seed),
                                                           "kappa": null.kappa})
