"""Semi-discrete optimal transport: W_p^p between atoms and a continuous law.

The main solver maximizes the semi-dual

    F(v) = sum_i w_i v_i + E_X[ min_i ( |X - y_i|^p - v_i ) ]

over one potential per atom by stochastic average gradient (SAG) ascent on a
reference sample drawn from the target.  The returned distance estimate is F
evaluated at the final potentials on a fresh evaluation sample.

Exact special cases (1-D quantile integrals, Gaussian closed form, small
discrete problems) serve as oracles.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace
from typing import Callable, Optional

import numpy as np
from scipy.optimize import linprog

from . import _kernels
from .distributions import MARGINAL_QUANTILE, TargetDistribution
from .errors import ConfigurationError, DomainError, NumericError
from .measures import DiscreteMeasure, as_measure
from .rng import stream

__all__ = [
    "DiscreteMeasure", "DualPotentials", "SolverConfig", "semidual_objective", "sag_solve",
    "maximize_semidual_discrete", "wasserstein_pp_1d_exact", "gaussian_w2_squared", "estimate_wpp",
]


@dataclass(frozen=True)
class SolverConfig:
    """Settings of the SAG semi-discrete solver.

    Attributes
    ----------
    ref_sample_size : int
        Number of reference points drawn from the target.
    step_constant : float
        C in the step ``C * s**p / n``, where ``s`` is the root mean
        per-coordinate variance of the reference sample.
    epochs : int
        Passes over the reference sample.
    seed : int
        Root seed used when no generator is passed to the solver.
    evaluation_sample_size : int or None
        Size of the fresh sample used for the final estimate; defaults to
        ``ref_sample_size``.
    decay_after : int or None
        If set, the step is multiplied by ``decay_rate`` once per epoch after
        this many constant-step epochs.
    decay_rate : float
        Geometric step decay factor.
    warm_start : bool
        Initialize the potentials from a moment-matched closed form.
    keep_best : bool
        Fall back to the warm start if training lowered the objective.
    stratify_1d : bool
        Draw 1-D reference and evaluation samples by stratified inversion.
    """

    ref_sample_size: int = 200_000
    step_constant: float = 1.0
    epochs: int = 3
    seed: int = 0
    evaluation_sample_size: Optional[int] = None
    decay_after: Optional[int] = None
    decay_rate: float = 1.0
    warm_start: bool = True
    keep_best: bool = True
    stratify_1d: bool = True

    def __post_init__(self):
        if self.ref_sample_size < 1 or self.epochs < 0:
            raise ConfigurationError("ref_sample_size must be positive and epochs non-negative")
        if not self.step_constant > 0:
            raise ConfigurationError("step constant C must be positive")
        if not 0 < self.decay_rate <= 1:
            raise ConfigurationError("decay_rate must lie in (0, 1]")

    @classmethod
    def desk(cls, **kw) -> "SolverConfig":
        """Laptop-scale settings (2e4 reference points)."""
        return cls(ref_sample_size=20_000, **kw)

    @classmethod
    def paper(cls, **kw) -> "SolverConfig":
        """Full-scale settings (2e5 reference points)."""
        return cls(ref_sample_size=200_000, **kw)

    @property
    def eval_size(self) -> int:
        return self.ref_sample_size if self.evaluation_sample_size is None else self.evaluation_sample_size

    def with_(self, **kw) -> "SolverConfig":
        return replace(self, **kw)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SolverConfig":
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConfigurationError(f"bad solver config: {exc}") from exc


@dataclass(frozen=True)
class DualPotentials:
    """Solver output: potentials, objective estimate and run metadata."""

    v: np.ndarray
    objective: float
    p_order: float
    iterations: int
    ref_points_used: int
    trace: tuple = ()


def _check_p(p_order) -> float:
    p = float(p_order)
    if not p >= 1.0:
        raise DomainError("the order p must be at least 1")
    return p


def _contiguous(x) -> np.ndarray:
    return np.ascontiguousarray(x, dtype=np.float64)


def semidual_objective(v, atoms, p_order, eval_sample, eval_weights=None) -> float:
    """Semi-dual value ``sum_i w_i v_i + mean_x min_i(|x - y_i|^p - v_i)``.

    With ``eval_weights`` the mean is replaced by the weighted sum, which makes
    the value exact for a discrete target supported on ``eval_sample``.
    """
    atoms = as_measure(atoms)
    if atoms.n == 0:
        raise DomainError("the semi-dual needs at least one atom")
    p = _check_p(p_order)
    v = _contiguous(v)
    pts = _contiguous(np.asarray(eval_sample, dtype=float).reshape(-1, atoms.dim))
    out = np.empty(pts.shape[0], dtype=np.int64)
    y = _contiguous(atoms.points)
    if eval_weights is None:
        s = _kernels.assign(y, pts, p, v, out) / pts.shape[0]
    else:
        s = _kernels.assign_weighted(y, pts, _contiguous(eval_weights), p, v, out)
    return float(atoms.weights @ v + s)


# ----------------------------------------------------------------------------
# SAG solver
# ----------------------------------------------------------------------------

def _draw(target: TargetDistribution, m: int, rng, cfg: SolverConfig) -> np.ndarray:
    if cfg.stratify_1d and target.dim == 1 and MARGINAL_QUANTILE in target.capabilities:
        u = (np.arange(m) + rng.random(m)) / m
        return _contiguous(target.marginal_quantile(0, u).reshape(m, 1))
    return _contiguous(target.sample(m, rng))


def _psd_sqrt(a: np.ndarray) -> np.ndarray:
    e, u = np.linalg.eigh(0.5 * (a + a.T))
    return (u * np.sqrt(np.clip(e, 0.0, None))) @ u.T


def warm_start_potentials(atoms: np.ndarray, ref: np.ndarray, p: float) -> np.ndarray:
    """Closed-form starting potentials from the first two moments.

    Let T be the affine optimal map between the Gaussians matching the moments
    of the atoms and of the reference sample.  For p = 2 the start is the
    exact dual potential of T.  For p = 1 it is the potential whose gradient
    is the displacement direction ``y - T^{-1}(y)``, damped where the
    displacement is small relative to the target spread.  Other orders start
    at zero.
    """
    n, d = atoms.shape
    if n < 2 or p not in (1.0, 2.0):
        return np.zeros(n)
    mx, my = ref.mean(axis=0), atoms.mean(axis=0)
    sx = np.atleast_2d(np.cov(ref.T))
    sy = np.atleast_2d(np.cov(atoms.T))
    sy = sy + 1e-12 * max(np.trace(sy) / d, 1e-300) * np.eye(d)
    r = _psd_sqrt(sy)
    ri = np.linalg.pinv(r)
    back = ri @ _psd_sqrt(r @ sx @ r) @ ri  # linear part of T^{-1}
    z = atoms - my
    if p == 2.0:
        v = np.sum(atoms * atoms, axis=1) - 2.0 * atoms @ mx - np.einsum("ij,jk,ik->i", z, back, z)
    else:
        disp = atoms - (mx + z @ back)
        tau = np.sqrt(np.trace(sx))
        v = np.sum(disp * atoms, axis=1) / np.maximum(np.linalg.norm(disp, axis=1), tau)
    v = v - v.mean()
    return v if np.all(np.isfinite(v)) else np.zeros(n)


def sag_solve(atoms, target: TargetDistribution, p_order, cfg: SolverConfig = SolverConfig(),
              rng: Optional[np.random.Generator] = None, trace: bool = False,
              reference: Optional[np.ndarray] = None) -> DualPotentials:
    """Maximize the semi-dual by stochastic average gradient ascent.

    Parameters
    ----------
    atoms : DiscreteMeasure or array_like (n, d)
    target : TargetDistribution
        Continuous law; must provide ``sample``.
    p_order : float
        Cost exponent p >= 1.
    cfg : SolverConfig
    rng : numpy.random.Generator, optional
        Source of the reference and evaluation samples and of the visiting
        order.  Defaults to the stream named by ``cfg.seed``.
    trace : bool
        Record the evaluation-sample objective after every epoch.
    reference : ndarray (m, d), optional
        Fixed reference set used instead of target draws; the final
        objective is then evaluated exactly on this set.

    Returns
    -------
    DualPotentials
    """
    atoms = as_measure(atoms)
    p = _check_p(p_order)
    if atoms.n == 0:
        raise DomainError("cannot transport an empty measure")
    if target is not None and atoms.dim != target.dim:
        raise DomainError("atoms and target dimensions differ")
    rng = stream(cfg.seed, "sag") if rng is None else rng
    y = _contiguous(atoms.points)
    w = _contiguous(atoms.weights)
    n = atoms.n
    if reference is None:
        m = cfg.ref_sample_size
        if m < n:
            raise ConfigurationError("reference sample must be at least as large as the atom set")
        ref = _draw(target, m, rng, cfg)
    else:
        ref = _contiguous(reference)
        m = ref.shape[0]
    scale2 = float(np.mean(np.var(ref, axis=0)))
    step0 = cfg.step_constant * (scale2 ** (0.5 * p) if scale2 > 0 else 1.0) / n

    v0 = warm_start_potentials(y, ref, p) if cfg.warm_start else np.zeros(n)
    stored = np.empty(m, dtype=np.int64)
    start_obj = float(w @ v0 + _kernels.assign(y, ref, p, v0, stored) / m)
    counts = np.bincount(stored, minlength=n).astype(np.float64)

    if reference is None:
        ev = _draw(target, cfg.eval_size, rng, cfg)
    else:
        ev = ref
    tr = []
    v = v0.copy()
    for e in range(cfg.epochs):
        step = step0
        if cfg.decay_after is not None and e >= cfg.decay_after:
            step = step0 * cfg.decay_rate ** (e - cfg.decay_after + 1)
        rate = step * (w - counts / m)
        a = v.copy()
        idx = rng.integers(0, m, m)
        t = _kernels.sag_pass(y, w, ref, idx, p, step, a, rate, stored, counts, 0.0)
        v = a + t * rate
        if trace:
            tr.append(semidual_objective(v, atoms, p, ev))
    if cfg.keep_best and cfg.epochs > 0:
        tmp = np.empty(m, dtype=np.int64)
        end_obj = float(w @ v + _kernels.assign(y, ref, p, v, tmp) / m)
        if start_obj > end_obj:
            v = v0
    v = v - v.mean()
    obj = semidual_objective(v, atoms, p, ev)
    if not math.isfinite(obj):
        raise NumericError(f"non-finite semi-dual objective (max |v| = {np.max(np.abs(v)):.3g}, "
                           f"reference spread {scale2:.3g})")
    return DualPotentials(v=v, objective=obj, p_order=p, iterations=cfg.epochs * m,
                          ref_points_used=m, trace=tuple(tr))


def maximize_semidual_discrete(atoms, points, p_order, point_weights=None) -> np.ndarray:
    """Exact maximizer of the semi-dual against a finite target (linear program).

    Solves ``max w.v + b.t  s.t.  v_i + t_k <= |x_k - y_i|^p`` with HiGHS.
    Intended for small instances.
    """
    atoms = as_measure(atoms)
    p = _check_p(p_order)
    x = np.asarray(points, dtype=float).reshape(-1, atoms.dim)
    n, m = atoms.n, x.shape[0]
    b = np.full(m, 1.0 / m) if point_weights is None else np.asarray(point_weights, float)
    cost = np.linalg.norm(x[None, :, :] - atoms.points[:, None, :], axis=2) ** p
    rows = np.zeros((n * m, n + m))
    r = np.arange(n * m)
    rows[r, r // m] = 1.0
    rows[r, n + r % m] = 1.0
    res = linprog(-np.concatenate([atoms.weights, b]), A_ub=rows, b_ub=cost.ravel(),
                  bounds=[(None, None)] * (n + m), method="highs")
    if res.status != 0:
        raise NumericError(f"semi-dual linear program failed: {res.message}")
    return res.x[:n]


# ----------------------------------------------------------------------------
# exact 1-D distance
# ----------------------------------------------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
MAX_QUADRATURE_CELLS = 1_000_000


def _gl(f, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    nodes = mid[:, None] + half[:, None] * _GL_X
    return half * (f(nodes) @ _GL_W)


def wasserstein_pp_1d_exact(atoms, target_quantile: Callable, p_order, rtol: float = 1e-10,
                            max_depth: int = 60, min_width: float = 1e-13) -> float:
    """W_p^p between a 1-D discrete measure and a law given by its quantile.

    Integrates ``|x_(i) - F^{-1}(u)|^p`` over each quantile cell with 16-node
    Gauss-Legendre rules.  Cells are split where the quantile crosses the
    atom, and sub-intervals are bisected until the two resolutions agree or
    the interval is narrower than ``min_width``.
    """
    atoms = as_measure(atoms)
    if atoms.dim != 1:
        raise DomainError("1-D exact distance needs univariate atoms")
    p = _check_p(p_order)
    order = np.argsort(atoms.points[:, 0], kind="stable")
    x = atoms.points[order, 0]
    w = atoms.weights[order]
    edges = np.concatenate([[0.0], np.cumsum(w)])
    edges[-1] = 1.0
    lo, hi = edges[:-1], edges[1:]
    keep = hi > lo
    x, lo, hi = x[keep], lo[keep], hi[keep]

    # kink where F^{-1}(u) = x inside the cell, located by bisection on u
    qa = target_quantile(lo + (hi - lo) * 1e-12)
    qb = target_quantile(hi - (hi - lo) * 1e-12)
    inside = (qa < x) & (x < qb)
    a, b = lo[inside].copy(), hi[inside].copy()
    xs = x[inside]
    for _ in range(60):
        mid = 0.5 * (a + b)
        below = target_quantile(mid) < xs
        a = np.where(below, mid, a)
        b = np.where(below, b, mid)
    kink = 0.5 * (a + b)
    A = np.concatenate([lo[~inside], lo[inside], kink])
    B = np.concatenate([hi[~inside], kink, hi[inside]])
    X = np.concatenate([x[~inside], xs, xs])

    def integrand(xv):
        return lambda u: np.abs(xv[:, None] - target_quantile(u)) ** p

    whole = _gl(integrand(X), A, B)
    scale = max(abs(float(np.sum(whole))), 1e-300)
    total = 0.0
    for _ in range(max_depth):
        mid = 0.5 * (A + B)
        left = _gl(integrand(X), A, mid)
        right = _gl(integrand(X), mid, B)
        fine = left + right
        ok = np.abs(fine - whole) <= rtol * np.maximum(np.abs(fine), scale * (B - A))
        # cells at u = 0 or 1 carry an integrable singularity of an unbounded
        # quantile; their mass is O(h log(1/h)) once h is this small
        ok |= (B - A) < min_width
        total += float(np.sum(fine[ok]))
        if np.all(ok):
            if not math.isfinite(total):
                raise NumericError("non-finite quadrature value")
            return total
        bad = ~ok
        if np.count_nonzero(bad) > MAX_QUADRATURE_CELLS // 2:
            raise NumericError("quantile quadrature did not converge; too many active cells")
        A, B, X = (np.concatenate([A[bad], mid[bad]]), np.concatenate([mid[bad], B[bad]]),
                   np.concatenate([X[bad], X[bad]]))
        whole = np.concatenate([left[bad], right[bad]])
    raise NumericError("quantile quadrature did not converge; interval refinement exhausted")


# ----------------------------------------------------------------------------
# Gaussian closed form
# ----------------------------------------------------------------------------

def _sqrtm_clamped(a: np.ndarray) -> np.ndarray:
    e, u = np.linalg.eigh(0.5 * (a + a.T))
    tol = 1e-12 * max(1.0, float(np.max(np.abs(e))) if e.size else 1.0)
    if np.any(e < -tol):
        raise DomainError("matrix is not positive semi-definite")
    return (u * np.sqrt(np.clip(e, 0.0, None))) @ u.T


def gaussian_w2_squared(mu1, cov1, mu2, cov2) -> float:
    """Squared 2-Wasserstein distance between two Gaussian laws.

    ``|mu1 - mu2|^2 + tr(S1 + S2 - 2 (S1^{1/2} S2 S1^{1/2})^{1/2})``.
    """
    mu1, mu2 = np.atleast_1d(np.asarray(mu1, float)), np.atleast_1d(np.asarray(mu2, float))
    s1, s2 = np.atleast_2d(np.asarray(cov1, float)), np.atleast_2d(np.asarray(cov2, float))
    if s1.shape != s2.shape or s1.shape[0] != mu1.shape[0] or mu1.shape != mu2.shape:
        raise DomainError("inconsistent Gaussian parameter shapes")
    r1 = _sqrtm_clamped(s1)
    _sqrtm_clamped(s2)
    cross = _sqrtm_clamped(r1 @ s2 @ r1)
    val = float(np.sum((mu1 - mu2) ** 2) + np.trace(s1) + np.trace(s2) - 2.0 * np.trace(cross))
    return max(val, 0.0)


# ----------------------------------------------------------------------------
# dispatch
# ----------------------------------------------------------------------------

def estimate_wpp(atoms, target: TargetDistribution, p_order, cfg: SolverConfig = SolverConfig(),
                 rng: Optional[np.random.Generator] = None) -> float:
    """W_p^p(atoms, target): exact in 1-D when a quantile is available, SAG otherwise."""
    atoms = as_measure(atoms)
    if atoms.dim == 1 and target.dim == 1 and MARGINAL_QUANTILE in target.capabilities:
        return wasserstein_pp_1d_exact(atoms, lambda u: target.marginal_quantile(0, u), p_order)
    return sag_solve(atoms, target, p_order, cfg, rng=rng).objective
