"""Copula families: exact samplers, densities and Kendall's tau.

Archimedean families use frailty (Marshall-Olkin) constructions where the
generator is completely monotone, and conditional inversion in the bivariate
negative-dependence ranges where it is not.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError, UnsupportedOperationError

FAMILIES = ("gumbel", "amh", "frank", "student-t", "independence")
_TINY = 1e-300


@dataclass(frozen=True)
class CopulaSpec:
    """Copula family, dependence parameter and dimension.

    ``theta`` is the Gumbel theta, the AMH psi or the Frank theta.  The
    Student-t copula uses ``rho`` (equicorrelation) and ``nu`` instead.
    """

    family: str
    theta: float = 0.0
    dim: int = 2
    rho: float = 0.0
    nu: float = 4.0

    def __post_init__(self):
        fam = self.family
        if fam not in FAMILIES:
            raise DomainError(f"unknown copula family {fam!r}; expected one of {FAMILIES}")
        if int(self.dim) < 2:
            raise DomainError("copula dimension must be at least 2")
        t = float(self.theta)
        if fam == "gumbel" and not (t >= 1.0 and np.isfinite(t)):
            raise DomainError("Gumbel theta must lie in [1, inf)")
        if fam == "amh":
            if not -1.0 <= t <= 1.0:
                raise DomainError("AMH psi must lie in [-1, 1]")
            if self.dim > 2 and t < 0:
                raise DomainError("AMH with negative psi is only a copula for d = 2")
        if fam == "frank":
            if not np.isfinite(t):
                raise DomainError("Frank theta must be finite")
            if self.dim > 2 and t < 0:
                raise DomainError("Frank with negative theta is only a copula for d = 2")
        if fam == "student-t":
            if not self.nu > 0:
                raise DomainError("t-copula degrees of freedom must be positive")
            lo = -1.0 / (self.dim - 1)
            if not lo < self.rho < 1.0:
                raise DomainError("t-copula equicorrelation outside the positive-definite range")

    @property
    def is_independence(self) -> bool:
        fam, t = self.family, float(self.theta)
        return (fam == "independence" or (fam == "gumbel" and t == 1.0)
                or (fam in ("amh", "frank") and t == 0.0))

    def correlation(self) -> np.ndarray:
        d = self.dim
        return np.full((d, d), self.rho) + (1.0 - self.rho) * np.eye(d)

    def to_dict(self) -> dict:
        out = {"family": self.family, "dim": int(self.dim)}
        if self.family == "student-t":
            out.update(rho=float(self.rho), nu=float(self.nu))
        elif self.family != "independence":
            out["theta"] = float(self.theta)
        return out


# ----------------------------------------------------------------------------
# samplers
# ----------------------------------------------------------------------------

def _positive_stable(alpha: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draws with Laplace transform exp(-t**alpha), 0 < alpha <= 1 (Kanter)."""
    if alpha == 1.0:
        return np.ones(n)
    u = rng.uniform(0.0, np.pi, n)
    e = rng.standard_exponential(n)
    return (np.sin(alpha * u) / np.sin(u) ** (1.0 / alpha)
            * (np.sin((1.0 - alpha) * u) / e) ** ((1.0 - alpha) / alpha))


def _bisect_unit(f, target: np.ndarray, iters: int = 60) -> np.ndarray:
    """Solve f(v) = target for v in [0, 1], f increasing, elementwise."""
    lo = np.zeros_like(target)
    hi = np.ones_like(target)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        below = f(mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def amh_conditional_cdf(v, u, psi):
    """P(V <= v | U = u) for the AMH copula."""
    den = 1.0 - psi * (1.0 - u) * (1.0 - v)
    return v * (1.0 - psi * (1.0 - v)) / den ** 2


def _frank_conditional_inverse(u, w, theta):
    # closed-form inverse of dC(u, v)/du = w
    a = np.expm1(-theta)
    return -np.log1p(w * a / (w + (1.0 - w) * np.exp(-theta * u))) / theta


def sample_archimedean_copula(spec: CopulaSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` rows from a Gumbel, AMH or Frank copula.

    Returns
    -------
    ndarray, shape (n, spec.dim)
        Rows in (0, 1)^dim with uniform margins.
    """
    if spec.family not in ("gumbel", "amh", "frank"):
        raise DomainError(f"{spec.family!r} is not an Archimedean family")
    d, t = spec.dim, float(spec.theta)
    if spec.is_independence:
        return rng.random((n, d))
    if spec.family == "gumbel":
        alpha = 1.0 / t
        v = _positive_stable(alpha, n, rng)
        e = rng.standard_exponential((n, d))
        return np.exp(-((e / v[:, None]) ** alpha))
    if spec.family == "amh":
        if t > 0 and not (t == 1.0 and d == 2):
            # geometric frailty, generator (1 - psi) / (exp(s) - psi)
            v = rng.geometric(1.0 - t, n).astype(float)
            e = rng.standard_exponential((n, d))
            s = e / v[:, None]
            return (1.0 - t) / (np.exp(s) - t)
        u = rng.random(n)
        w = rng.random(n)
        v = _bisect_unit(lambda x: amh_conditional_cdf(x, u, t), w)
        return np.column_stack([u, v])
    # frank
    if t > 0:
        v = rng.logseries(-np.expm1(-t), n).astype(float)
        e = rng.standard_exponential((n, d))
        s = e / v[:, None]
        return -np.log1p(np.exp(-s) * np.expm1(-t)) / t
    u = rng.random(n)
    w = rng.random(n)
    return np.column_stack([u, _frank_conditional_inverse(u, w, t)])


def sample_t_copula(spec: CopulaSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw from the Student-t copula with equicorrelation ``rho``."""
    chol = np.linalg.cholesky(spec.correlation())
    z = rng.standard_normal((n, spec.dim)) @ chol.T
    w = rng.chisquare(spec.nu, n)
    return special.stdtr(spec.nu, z / np.sqrt(w / spec.nu)[:, None])


def sample_copula(spec: CopulaSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` rows from any supported copula."""
    if spec.is_independence:
        return rng.random((n, spec.dim))
    if spec.family == "student-t":
        return sample_t_copula(spec, n, rng)
    return sample_archimedean_copula(spec, n, rng)


# ----------------------------------------------------------------------------
# densities
# ----------------------------------------------------------------------------

def has_density(spec: CopulaSpec) -> bool:
    return spec.is_independence or spec.family == "student-t" or spec.dim == 2


def copula_logpdf(spec: CopulaSpec, u: np.ndarray) -> np.ndarray:
    """Log copula density at rows of ``u`` in (0, 1)^d."""
    u = np.atleast_2d(np.asarray(u, dtype=float))
    if u.shape[1] != spec.dim:
        raise DomainError("copula argument has the wrong dimension")
    if spec.is_independence:
        return np.zeros(u.shape[0])
    t = float(spec.theta)
    if spec.family == "student-t":
        nu, d = spec.nu, spec.dim
        x = special.stdtrit(nu, u)
        r = spec.correlation()
        chol = np.linalg.cholesky(r)
        z = np.linalg.solve(chol, x.T).T
        q = np.sum(z * z, axis=1)
        logdet = 2.0 * np.sum(np.log(np.diag(chol)))
        joint = (special.gammaln((nu + d) / 2) - special.gammaln(nu / 2)
                 - 0.5 * d * np.log(nu * np.pi) - 0.5 * logdet
                 - 0.5 * (nu + d) * np.log1p(q / nu))
        marg = (special.gammaln((nu + 1) / 2) - special.gammaln(nu / 2)
                - 0.5 * np.log(nu * np.pi) - 0.5 * (nu + 1) * np.log1p(x * x / nu))
        return joint - marg.sum(axis=1)
    if spec.dim != 2:
        raise UnsupportedOperationError(f"{spec.family} copula density is implemented for d = 2 only")
    a, b = u[:, 0], u[:, 1]
    if spec.family == "gumbel":
        x, y = -np.log(a), -np.log(b)
        lx, ly = np.log(x), np.log(y)
        # s = x**t + y**t in log space
        ls = np.logaddexp(t * lx, t * ly)
        A = np.exp(ls / t)
        return (-A + x + y + (t - 1.0) * (lx + ly) + (1.0 / t - 2.0) * ls
                + np.log(A + t - 1.0))
    if spec.family == "amh":
        num = 1.0 + t * ((1.0 + a) * (1.0 + b) - 3.0) + t * t * (1.0 - a) * (1.0 - b)
        den = 1.0 - t * (1.0 - a) * (1.0 - b)
        return np.log(np.maximum(num, _TINY)) - 3.0 * np.log(den)
    # frank
    em = -np.expm1(-t)
    num = np.log(abs(t) * abs(em)) - t * (a + b)
    den = em - (-np.expm1(-t * a)) * (-np.expm1(-t * b))
    return num - 2.0 * np.log(np.abs(den))


def copula_pdf(spec: CopulaSpec, u: np.ndarray) -> np.ndarray:
    return np.exp(copula_logpdf(spec, u))


def copula_cdf(spec: CopulaSpec, u: np.ndarray) -> np.ndarray:
    """Copula distribution function (Archimedean families and independence)."""
    u = np.atleast_2d(np.asarray(u, dtype=float))
    t = float(spec.theta)
    if spec.is_independence:
        return np.prod(u, axis=1)
    if spec.family == "gumbel":
        return np.exp(-np.sum((-np.log(u)) ** t, axis=1) ** (1.0 / t))
    if spec.family == "amh" and spec.dim == 2:
        a, b = u[:, 0], u[:, 1]
        return a * b / (1.0 - t * (1.0 - a) * (1.0 - b))
    if spec.family == "frank":
        s = np.sum(-np.log(np.expm1(-t * u) / np.expm1(-t)), axis=1)
        return -np.log1p(np.exp(-s) * np.expm1(-t)) / t
    raise UnsupportedOperationError(f"cdf not implemented for {spec.family} in d = {spec.dim}")


def _debye1(x: float) -> float:
    from scipy.integrate import quad
    if x == 0:
        return 1.0
    val = quad(lambda s: s / np.expm1(s) if s != 0 else 1.0, 0.0, abs(x), epsabs=1e-14)[0] / abs(x)
    return val if x > 0 else val + abs(x) / 2.0


def kendall_tau(spec: CopulaSpec) -> float:
    """Population Kendall's tau of a bivariate copula (closed forms)."""
    t = float(spec.theta)
    if spec.is_independence:
        return 0.0
    if spec.family == "gumbel":
        return 1.0 - 1.0 / t
    if spec.family == "amh":
        if t == 1.0:
            return 1.0 / 3.0
        if abs(t) < 0.05:
            # power series avoids cancellation near independence
            k = np.arange(1, 20)
            return float(np.sum(4.0 * t ** k / (3.0 * k * (k + 1) * (k + 2))))
        return 1.0 - 2.0 * (t + (1.0 - t) ** 2 * np.log1p(-t)) / (3.0 * t * t)
    if spec.family == "frank":
        return 1.0 - 4.0 / t * (1.0 - _debye1(t))
    return 2.0 / np.pi * np.arcsin(spec.rho)
