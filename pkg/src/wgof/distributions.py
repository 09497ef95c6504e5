"""Model distributions used as nulls and alternatives.

Every distribution is an immutable object exposing ``dim``, ``family``,
``capabilities`` and ``sample(n, rng)``.  Densities and marginal
cdf/quantile functions are provided where the family admits them.
Randomness always enters through an explicit generator.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import special

from .copulas import CopulaSpec, copula_logpdf, has_density, sample_copula
from .errors import ConfigurationError, DomainError, UnsupportedOperationError
from .measures import DiscreteMeasure

DENSITY = "density"
MARGINAL_CDF = "marginal-cdf"
MARGINAL_QUANTILE = "marginal-quantile"
_ALL_CAPS = frozenset({DENSITY, MARGINAL_CDF, MARGINAL_QUANTILE})
_LOG_2PI = np.log(2.0 * np.pi)


def _check_unit(u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0.0) | (u >= 1.0)):
        raise DomainError("probabilities must lie strictly inside (0, 1)")
    return u


# ----------------------------------------------------------------------------
# generalized extreme value
# ----------------------------------------------------------------------------

def gev_quantile(xi: float, u):
    """Quantile of the standard GEV distribution with shape ``xi``.

    ``xi = 0`` gives the standard Gumbel quantile ``-log(-log u)``; otherwise
    ``((-log u)**(-xi) - 1) / xi``.
    """
    u = _check_unit(u)
    xi = float(xi)
    m = -np.log(u)
    if xi == 0.0:
        return -np.log(m)
    return np.expm1(-xi * np.log(m)) / xi


def gev_cdf(xi: float, x):
    x = np.asarray(x, dtype=float)
    xi = float(xi)
    if xi == 0.0:
        return np.exp(-np.exp(-x))
    z = 1.0 + xi * x
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.exp(-np.log1p(xi * x) / xi)
    inside = np.exp(-t)
    return np.where(z > 0, inside, 0.0 if xi > 0 else 1.0)


def gev_logpdf(xi: float, x):
    x = np.asarray(x, dtype=float)
    xi = float(xi)
    if xi == 0.0:
        return -x - np.exp(-x)
    z = 1.0 + xi * x
    with np.errstate(divide="ignore", invalid="ignore"):
        lz = np.log1p(xi * x)
        out = -(1.0 / xi + 1.0) * lz - np.exp(-lz / xi)
    return np.where(z > 0, out, -np.inf)


# ----------------------------------------------------------------------------
# univariate margins
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Margin:
    """Univariate continuous law used as a coordinate of a model.

    ``kind`` is one of ``normal``, ``t``, ``gumbel``, ``gev``, ``uniform`` or
    ``normal-mixture``; ``params`` holds the family parameters as a tuple.
    """

    kind: str
    params: tuple = ()

    def __post_init__(self):
        k, p = self.kind, self.params
        ok = {"normal": 2, "t": 3, "gumbel": 2, "gev": 3, "uniform": 2}
        if k in ok:
            if len(p) != ok[k]:
                raise ConfigurationError(f"{k} margin expects {ok[k]} parameters")
            scale = p[1] if k != "t" and k != "gev" else p[2]
            if k == "uniform":
                if not p[1] > p[0]:
                    raise DomainError("uniform margin needs lo < hi")
            elif not scale > 0:
                raise DomainError("margin scale must be positive")
            if k == "t" and not p[0] > 0:
                raise DomainError("t margin needs positive degrees of freedom")
        elif k == "normal-mixture":
            w, m, s = (np.asarray(a, float) for a in p)
            if not (w.shape == m.shape == s.shape) or np.any(s <= 0) or abs(w.sum() - 1) > 1e-12:
                raise DomainError("invalid normal-mixture margin")
        else:
            raise ConfigurationError(f"unknown margin kind {k!r}")

    # constructors -----------------------------------------------------------
    @staticmethod
    def normal(loc=0.0, scale=1.0) -> "Margin":
        return Margin("normal", (float(loc), float(scale)))

    @staticmethod
    def student(df, loc=0.0, scale=1.0) -> "Margin":
        return Margin("t", (float(df), float(loc), float(scale)))

    @staticmethod
    def gumbel(loc=0.0, scale=1.0) -> "Margin":
        return Margin("gumbel", (float(loc), float(scale)))

    @staticmethod
    def gev(xi, loc=0.0, scale=1.0) -> "Margin":
        return Margin("gev", (float(xi), float(loc), float(scale)))

    @staticmethod
    def uniform(lo=0.0, hi=1.0) -> "Margin":
        return Margin("uniform", (float(lo), float(hi)))

    @staticmethod
    def normal_mixture(weights, locs, scales) -> "Margin":
        return Margin("normal-mixture", (tuple(map(float, weights)), tuple(map(float, locs)),
                                         tuple(map(float, scales))))

    # evaluation ----------------------------------------------------------------
    def _std(self, x):
        k, p = self.kind, self.params
        if k in ("normal", "gumbel"):
            return (x - p[0]) / p[1], p[1]
        if k in ("t", "gev"):
            return (x - p[1]) / p[2], p[2]
        return x, 1.0

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        k, p = self.kind, self.params
        if k == "uniform":
            return np.clip((x - p[0]) / (p[1] - p[0]), 0.0, 1.0)
        if k == "normal-mixture":
            w, m, s = (np.asarray(a) for a in p)
            return np.sum(w * special.ndtr((x[..., None] - m) / s), axis=-1)
        z, _ = self._std(x)
        if k == "normal":
            return special.ndtr(z)
        if k == "t":
            return special.stdtr(p[0], z)
        if k == "gumbel":
            return np.exp(-np.exp(-z))
        return gev_cdf(p[0], z)

    def ppf(self, u):
        u = np.asarray(u, dtype=float)
        k, p = self.kind, self.params
        if k == "uniform":
            return p[0] + (p[1] - p[0]) * u
        if k == "normal":
            return p[0] + p[1] * special.ndtri(u)
        if k == "t":
            return p[1] + p[2] * special.stdtrit(p[0], u)
        if k == "gumbel":
            return p[0] - p[1] * np.log(-np.log(u))
        if k == "gev":
            return p[1] + p[2] * gev_quantile(p[0], u)
        return self._mixture_ppf(u)

    def _mixture_ppf(self, u):
        w, m, s = (np.asarray(a) for a in self.params)
        q = m + s * special.ndtri(np.asarray(u)[..., None])
        lo, hi = q.min(axis=-1), q.max(axis=-1)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            below = self.cdf(mid) < u
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
            if np.all(hi - lo <= 4e-16 * np.maximum(1.0, np.abs(mid))):
                break
        return 0.5 * (lo + hi)

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        k, p = self.kind, self.params
        if k == "uniform":
            inside = (x >= p[0]) & (x <= p[1])
            return np.where(inside, -np.log(p[1] - p[0]), -np.inf)
        if k == "normal-mixture":
            w, m, s = (np.asarray(a) for a in p)
            z = (x[..., None] - m) / s
            return special.logsumexp(-0.5 * z * z - 0.5 * _LOG_2PI - np.log(s), b=w, axis=-1)
        z, sc = self._std(x)
        if k == "normal":
            out = -0.5 * z * z - 0.5 * _LOG_2PI
        elif k == "t":
            nu = p[0]
            out = (special.gammaln((nu + 1) / 2) - special.gammaln(nu / 2) - 0.5 * np.log(nu * np.pi)
                   - 0.5 * (nu + 1) * np.log1p(z * z / nu))
        elif k == "gumbel":
            out = -z - np.exp(-z)
        else:
            out = gev_logpdf(p[0], z)
        return out - np.log(sc)

    def pdf(self, x):
        return np.exp(self.logpdf(x))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": json.loads(json.dumps(self.params))}


# ----------------------------------------------------------------------------
# target distributions
# ----------------------------------------------------------------------------

class TargetDistribution:
    """Base class: a continuous law on R^dim.

    Subclasses set ``dim``, ``family`` and ``capabilities`` and implement
    ``sample``; densities and marginals are optional capabilities.
    """

    dim: int
    family: str
    capabilities: frozenset = frozenset()

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def logpdf(self, x) -> np.ndarray:
        raise UnsupportedOperationError(f"{self.family} has no density")

    def pdf(self, x) -> np.ndarray:
        return np.exp(self.logpdf(x))

    def margin(self, j: int) -> Margin:
        raise UnsupportedOperationError(f"{self.family} exposes no marginal laws")

    def marginal_cdf(self, j: int, x):
        return self.margin(j).cdf(x)

    def marginal_quantile(self, j: int, u):
        return self.margin(j).ppf(u)

    def marginal_pdf(self, j: int, x):
        return self.margin(j).pdf(x)

    def params(self) -> dict:
        raise NotImplementedError

    @property
    def key(self) -> str:
        """Stable identifier used for caching and stream naming."""
        return json.dumps({"family": self.family, **self.params()}, sort_keys=True)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.key})"


@dataclass(frozen=True)
class GaussianParams:
    """Mean, covariance and its lower Cholesky factor."""

    mean: np.ndarray
    cov: np.ndarray
    chol_lower: np.ndarray = field(default=None)

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
        cov = np.atleast_2d(np.asarray(self.cov, dtype=float))
        d = mean.shape[0]
        if cov.shape != (d, d):
            raise DomainError("covariance shape does not match the mean")
        if not np.allclose(cov, cov.T, rtol=0, atol=1e-12):
            raise DomainError("covariance must be symmetric")
        try:
            chol = np.linalg.cholesky(cov)
        except np.linalg.LinAlgError as exc:
            raise DomainError("covariance must be positive definite") from exc
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "chol_lower", chol)


class Gaussian(TargetDistribution):
    """Multivariate normal law N_d(mean, cov)."""

    family = "gaussian"
    capabilities = _ALL_CAPS

    def __init__(self, mean, cov=None):
        mean = np.atleast_1d(np.asarray(mean, dtype=float))
        cov = np.eye(mean.shape[0]) if cov is None else cov
        self.gp = GaussianParams(mean, cov)
        self.dim = mean.shape[0]

    @classmethod
    def standard(cls, d: int) -> "Gaussian":
        return cls(np.zeros(d), np.eye(d))

    @property
    def mean(self):
        return self.gp.mean

    @property
    def cov(self):
        return self.gp.cov

    def sample(self, n, rng):
        z = rng.standard_normal((n, self.dim))
        return self.gp.mean + z @ self.gp.chol_lower.T

    def logpdf(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        z = np.linalg.solve(self.gp.chol_lower, (x - self.gp.mean).T).T
        logdet = 2.0 * np.sum(np.log(np.diag(self.gp.chol_lower)))
        return -0.5 * np.sum(z * z, axis=1) - 0.5 * self.dim * _LOG_2PI - 0.5 * logdet

    def margin(self, j):
        return Margin.normal(self.gp.mean[j], np.sqrt(self.gp.cov[j, j]))

    def params(self):
        return {"mean": self.gp.mean.tolist(), "cov": self.gp.cov.tolist()}


@dataclass(frozen=True)
class MixtureSpec:
    """Weights and Gaussian components of a finite mixture."""

    weights: tuple
    components: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if len(w) != len(self.components) or len(w) == 0:
            raise DomainError("one weight per component is required")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise DomainError("mixture weights must be non-negative and sum to 1")
        dims = {c.dim for c in self.components}
        if len(dims) != 1:
            raise DomainError("mixture components must share a dimension")


class GaussianMixture(TargetDistribution):
    """Finite mixture of multivariate normal laws."""

    family = "gaussian-mixture"
    capabilities = _ALL_CAPS

    def __init__(self, weights: Sequence[float], components: Sequence[Gaussian]):
        self.spec = MixtureSpec(tuple(float(w) for w in weights), tuple(components))
        self.dim = self.spec.components[0].dim
        self._w = np.asarray(self.spec.weights)

    @property
    def weights(self):
        return self._w

    @property
    def components(self):
        return self.spec.components

    def sample_labelled(self, n, rng):
        """Draw points together with their component labels."""
        labels = rng.choice(len(self._w), size=n, p=self._w)
        counts = np.bincount(labels, minlength=len(self._w))
        out = np.empty((n, self.dim))
        for k, comp in enumerate(self.components):
            if counts[k]:
                out[labels == k] = comp.sample(counts[k], rng)
        return out, labels

    def sample(self, n, rng):
        return self.sample_labelled(n, rng)[0]

    def logpdf(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        parts = np.stack([c.logpdf(x) for c in self.components], axis=1)
        with np.errstate(divide="ignore"):
            return special.logsumexp(parts, b=self._w, axis=1)

    def margin(self, j):
        return Margin.normal_mixture(self._w, [c.mean[j] for c in self.components],
                                     [np.sqrt(c.cov[j, j]) for c in self.components])

    def params(self):
        return {"weights": self._w.tolist(), "components": [c.params() for c in self.components]}


def make_boomerang(p: float) -> GaussianMixture:
    """Three-lobe Gaussian mixture with weights (1 - 2p, p, p).

    Its first two moments stay close to those of N_2(0, I) for p near 0.35.
    """
    p = float(p)
    if not 0.0 <= p <= 0.5:
        raise DomainError("boomerang mixing weight must lie in [0, 0.5]")
    comps = (
        Gaussian([0.0, -0.7], np.diag([0.35 ** 2, 0.35 ** 2])),
        Gaussian([-0.9, 0.3], [[0.358, -0.55], [-0.55, 1.02]]),
        Gaussian([0.9, 0.3], [[0.358, 0.55], [0.55, 1.02]]),
    )
    w = (1.0 - 2.0 * p, p, p)
    keep = [k for k in range(3) if w[k] > 0]
    return GaussianMixture([w[k] for k in keep], [comps[k] for k in keep])


def _as_chol(chol_lower) -> np.ndarray:
    L = np.atleast_2d(np.asarray(chol_lower, dtype=float))
    if L.shape[0] != L.shape[1] or np.any(np.triu(L, 1) != 0) or np.any(np.diag(L) <= 0):
        raise DomainError("scatter factor must be lower triangular with positive diagonal")
    return L


class EllipticalT(TargetDistribution):
    """Elliptical Student-t law: mean + L Z sqrt(nu / W)."""

    family = "elliptical-t"
    capabilities = _ALL_CAPS

    def __init__(self, mean, chol_lower, nu: float):
        if not float(nu) > 0:
            raise DomainError("degrees of freedom must be positive")
        self.mean = np.atleast_1d(np.asarray(mean, dtype=float))
        self.chol = _as_chol(chol_lower)
        self.nu = float(nu)
        self.dim = self.mean.shape[0]
        if self.chol.shape[0] != self.dim:
            raise DomainError("scatter factor does not match the mean")

    @classmethod
    def standard(cls, d: int, nu: float) -> "EllipticalT":
        return cls(np.zeros(d), np.eye(d), nu)

    def sample(self, n, rng):
        return sample_elliptical(self.mean, self.chol, ("student-t", self.nu), n, rng).points

    def logpdf(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        d, nu = self.dim, self.nu
        z = np.linalg.solve(self.chol, (x - self.mean).T).T
        q = np.sum(z * z, axis=1)
        logdet = 2.0 * np.sum(np.log(np.diag(self.chol)))
        return (special.gammaln((nu + d) / 2) - special.gammaln(nu / 2) - 0.5 * d * np.log(nu * np.pi)
                - 0.5 * logdet - 0.5 * (nu + d) * np.log1p(q / nu))

    def margin(self, j):
        scale = np.sqrt(np.sum(self.chol[j] ** 2))
        return Margin.student(self.nu, self.mean[j], scale)

    def params(self):
        return {"mean": self.mean.tolist(), "chol": self.chol.tolist(), "nu": self.nu}


class MetaCopula(TargetDistribution):
    """Law with the given copula and univariate margins."""

    family = "meta-copula"

    def __init__(self, copula: CopulaSpec, margins: Sequence[Margin]):
        if len(margins) != copula.dim:
            raise DomainError("one margin per copula coordinate is required")
        self.copula = copula
        self.margins = tuple(margins)
        self.dim = copula.dim
        caps = {MARGINAL_CDF, MARGINAL_QUANTILE}
        if has_density(copula):
            caps.add(DENSITY)
        self.capabilities = frozenset(caps)

    def sample_uniforms(self, n, rng):
        return sample_copula(self.copula, n, rng)

    def sample(self, n, rng):
        u = self.sample_uniforms(n, rng)
        return np.column_stack([m.ppf(u[:, j]) for j, m in enumerate(self.margins)]) if n else np.zeros((0, self.dim))

    def logpdf(self, x):
        if DENSITY not in self.capabilities:
            raise UnsupportedOperationError("copula density unavailable in this dimension")
        x = np.atleast_2d(np.asarray(x, dtype=float))
        u = np.column_stack([m.cdf(x[:, j]) for j, m in enumerate(self.margins)])
        marg = sum(m.logpdf(x[:, j]) for j, m in enumerate(self.margins))
        u = np.clip(u, 1e-300, 1.0 - 1e-16)
        return copula_logpdf(self.copula, u) + marg

    def margin(self, j):
        return self.margins[j]

    def params(self):
        return {"copula": self.copula.to_dict(), "margins": [m.to_dict() for m in self.margins]}


class Univariate(TargetDistribution):
    """One-dimensional law given by a margin."""

    family = "univariate"
    capabilities = _ALL_CAPS

    def __init__(self, margin: Margin):
        self.dim = 1
        self._m = margin

    def sample(self, n, rng):
        return self._m.ppf(rng.random(n))[:, None]

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        return self._m.logpdf(x.reshape(-1))

    def margin(self, j):
        if j != 0:
            raise DomainError("univariate law has a single margin")
        return self._m

    def params(self):
        return {"margin": self._m.to_dict()}


def max_stable_gumbel(theta: float, dim: int = 2, xi: float = 0.0) -> MetaCopula:
    """Gumbel copula with standard GEV(xi) margins; xi = 0 is max-stable Gumbel."""
    margin = Margin.gumbel() if float(xi) == 0.0 else Margin.gev(xi)
    return MetaCopula(CopulaSpec("gumbel", theta, dim), [margin] * dim)


def product(margins: Sequence[Margin]) -> MetaCopula:
    """Independent coordinates with the given margins."""
    return MetaCopula(CopulaSpec("independence", 0.0, len(margins)), margins)


class Product(TargetDistribution):
    """Independent concatenation of lower-dimensional laws."""

    family = "product"

    def __init__(self, parts: Sequence[TargetDistribution]):
        self.parts = tuple(parts)
        self.dim = sum(p.dim for p in self.parts)
        caps = set(_ALL_CAPS)
        for p in self.parts:
            caps &= set(p.capabilities)
        self.capabilities = frozenset(caps)
        self._index = [(k, j) for k, p in enumerate(self.parts) for j in range(p.dim)]

    def sample(self, n, rng):
        return np.column_stack([p.sample(n, rng) for p in self.parts]) if n else np.zeros((0, self.dim))

    def logpdf(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        out, c = 0.0, 0
        for p in self.parts:
            out = out + p.logpdf(x[:, c:c + p.dim])
            c += p.dim
        return out

    def margin(self, j):
        k, jj = self._index[j]
        return self.parts[k].margin(jj)

    def params(self):
        return {"parts": [json.loads(p.key) for p in self.parts]}


class SkewT(TargetDistribution):
    """Azzalini skew-t law with location, scatter factor, slant and nu."""

    family = "skew-t"
    capabilities = frozenset({DENSITY})

    def __init__(self, location, scatter_chol, alpha, nu: float):
        if not float(nu) > 0:
            raise DomainError("degrees of freedom must be positive")
        self.location = np.atleast_1d(np.asarray(location, dtype=float))
        self.chol = _as_chol(scatter_chol)
        self.alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
        self.nu = float(nu)
        self.dim = self.location.shape[0]
        omega = self.chol @ self.chol.T
        self._w = np.sqrt(np.diag(omega))
        self._corr = omega / np.outer(self._w, self._w)
        a = self.alpha
        self._delta = self._corr @ a / np.sqrt(1.0 + a @ self._corr @ a)

    def sample(self, n, rng):
        return sample_skew_t(self.location, self.chol, self.alpha, self.nu, n, rng).points

    def logpdf(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        d, nu = self.dim, self.nu
        z = (x - self.location) / self._w
        cz = np.linalg.cholesky(self._corr)
        y = np.linalg.solve(cz, z.T).T
        q = np.sum(y * y, axis=1)
        logt = (special.gammaln((nu + d) / 2) - special.gammaln(nu / 2) - 0.5 * d * np.log(nu * np.pi)
                - np.sum(np.log(np.diag(cz))) - 0.5 * (nu + d) * np.log1p(q / nu))
        arg = (z @ self.alpha) * np.sqrt((nu + d) / (q + nu))
        return np.log(2.0) + logt + np.log(special.stdtr(nu + d, arg)) - np.sum(np.log(self._w))

    def params(self):
        return {"location": self.location.tolist(), "chol": self.chol.tolist(),
                "alpha": self.alpha.tolist(), "nu": self.nu}


# ----------------------------------------------------------------------------
# front-door sampling operations
# ----------------------------------------------------------------------------

def sample(dist: TargetDistribution, n: int, rng: np.random.Generator) -> DiscreteMeasure:
    """Draw ``n`` points from ``dist`` as a uniform-weight measure."""
    if not isinstance(dist, TargetDistribution):
        raise ConfigurationError(f"unsupported distribution object {dist!r}")
    if n < 0:
        raise DomainError("n must be non-negative")
    if n == 0:
        return DiscreteMeasure(np.zeros((0, dist.dim)))
    return DiscreteMeasure(dist.sample(n, rng))


def density(dist: TargetDistribution, x) -> np.ndarray:
    """Lebesgue density of ``dist`` at the rows of ``x``."""
    if DENSITY not in dist.capabilities:
        raise UnsupportedOperationError(f"{dist.family} has no density")
    x = np.asarray(x, dtype=float)
    if x.ndim == 1 and dist.dim == 1:
        x = x[:, None]
    return dist.pdf(np.atleast_2d(x))


def sample_elliptical(mean, chol_lower, radial, n: int, rng: np.random.Generator) -> DiscreteMeasure:
    """Draw from an elliptical law ``mean + L Z`` or ``mean + L Z sqrt(nu / W)``.

    Parameters
    ----------
    radial : "gaussian" or ("student-t", nu)
    """
    mean = np.atleast_1d(np.asarray(mean, dtype=float))
    L = _as_chol(chol_lower)
    z = rng.standard_normal((n, mean.shape[0]))
    if radial == "gaussian":
        x = mean + z @ L.T
    else:
        kind, nu = radial
        if kind != "student-t":
            raise ConfigurationError(f"unknown radial law {kind!r}")
        if not float(nu) > 0:
            raise DomainError("degrees of freedom must be positive")
        w = rng.chisquare(nu, n)
        x = mean + (z @ L.T) * np.sqrt(nu / w)[:, None]
    return DiscreteMeasure(x)


def sample_skew_t(location, scatter_chol, alpha, nu: float, n: int, rng: np.random.Generator) -> DiscreteMeasure:
    """Draw from the skew-t law via the skew-normal representation."""
    if not float(nu) > 0:
        raise DomainError("degrees of freedom must be positive")
    loc = np.atleast_1d(np.asarray(location, dtype=float))
    L = _as_chol(scatter_chol)
    a = np.atleast_1d(np.asarray(alpha, dtype=float))
    omega = L @ L.T
    w = np.sqrt(np.diag(omega))
    corr = omega / np.outer(w, w)
    delta = corr @ a / np.sqrt(1.0 + a @ corr @ a)
    rest = np.linalg.cholesky(corr - np.outer(delta, delta) + 1e-15 * np.eye(len(loc)))
    z = np.abs(rng.standard_normal(n))[:, None] * delta + rng.standard_normal((n, len(loc))) @ rest.T
    v = rng.chisquare(nu, n)
    return DiscreteMeasure(loc + w * z / np.sqrt(v / nu)[:, None])


# ----------------------------------------------------------------------------
# JSON config schema
# ----------------------------------------------------------------------------

def from_config(cfg: dict) -> TargetDistribution:
    """Build a distribution from ``{"family": ..., "params": {...}}``.

    Families and their parameters:

    * ``gaussian``: ``mean``, ``cov`` (default identity)
    * ``gaussian-mixture``: ``weights``, ``means``, ``covs``
    * ``boomerang``: ``p``
    * ``elliptical-t``: ``mean``, ``chol``, ``nu``
    * ``skew-t``: ``location``, ``chol``, ``alpha``, ``nu``
    * ``meta-copula``: ``copula`` (CopulaSpec fields), ``margins`` (list of
      ``{"kind", "params"}``)
    * ``max-stable-gumbel``: ``theta``, ``dim``, optional ``xi``
    * ``univariate``: ``kind``, ``params`` (one margin)
    * ``product``: ``parts`` (list of nested configs)
    """
    try:
        fam = cfg["family"]
        p = cfg.get("params", {})
        if fam == "gaussian":
            mean = np.asarray(p["mean"], float)
            return Gaussian(mean, p.get("cov", np.eye(len(mean))))
        if fam == "gaussian-mixture":
            return GaussianMixture(p["weights"], [Gaussian(m, c) for m, c in zip(p["means"], p["covs"])])
        if fam == "boomerang":
            return make_boomerang(p["p"])
        if fam == "elliptical-t":
            mean = np.asarray(p["mean"], float)
            return EllipticalT(mean, p.get("chol", np.eye(len(mean))), p["nu"])
        if fam == "skew-t":
            loc = np.asarray(p["location"], float)
            return SkewT(loc, p.get("chol", np.eye(len(loc))), p["alpha"], p["nu"])
        if fam == "meta-copula":
            cop = CopulaSpec(**p["copula"])
            return MetaCopula(cop, [Margin(m["kind"], tuple(
                tuple(v) if isinstance(v, list) else v for v in m["params"])) for m in p["margins"]])
        if fam == "max-stable-gumbel":
            return max_stable_gumbel(p["theta"], p.get("dim", 2), p.get("xi", 0.0))
        if fam == "univariate":
            return Univariate(Margin(p["kind"], tuple(p["params"])))
        if fam == "product":
            return Product([from_config(c) for c in p["parts"]])
    except (KeyError, TypeError) as exc:
        raise ConfigurationError(f"malformed distribution config {cfg!r}: {exc}") from exc
    raise ConfigurationError(f"unknown distribution family {cfg.get('family')!r}")
