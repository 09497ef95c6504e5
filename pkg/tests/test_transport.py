import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import integrate, stats

from conftest import primal_ot_cost
from wgof import _kernels
from wgof.distributions import Gaussian, Margin, Univariate
from wgof.errors import ConfigurationError, DomainError
from wgof.measures import DiscreteMeasure
from wgof.rng import stream
from wgof.transport import (SolverConfig, estimate_wpp, gaussian_w2_squared, maximize_semidual_discrete, sag_solve,
                            semidual_objective, wasserstein_pp_1d_exact, warm_start_potentials)


def _instance(seed):
    rng = np.random.default_rng(seed)
    n, m = rng.integers(1, 7, 2)
    x = rng.normal(size=(n, 2))
    y = rng.normal(size=(m, 2)) + 0.5
    a = rng.dirichlet(np.ones(n))
    b = rng.dirichlet(np.ones(m))
    return DiscreteMeasure(x, a), y, b


class TestSemidualObjective:
    def test_known_value(self):
        atoms = DiscreteMeasure([[0.0], [2.0]])
        # points 0.5 and 3: min(|0.5|^2 - 1, |1.5|^2 + 1) and min(9 - 1, 1 + 1)
        val = semidual_objective([1.0, -1.0], atoms, 2, [[0.5], [3.0]])
        assert val == pytest.approx(0.0 + 0.5 * ((0.25 - 1.0) + 2.0))

    def test_shift_invariance(self):
        atoms = DiscreteMeasure(np.random.default_rng(0).normal(size=(5, 2)))
        pts = np.random.default_rng(1).normal(size=(40, 2))
        v = np.random.default_rng(2).normal(size=5)
        assert semidual_objective(v + 3.0, atoms, 1, pts) == pytest.approx(semidual_objective(v, atoms, 1, pts))

    @pytest.mark.parametrize("seed", range(5))
    def test_weak_duality(self, seed):
        atoms, y, b = _instance(seed)
        v = np.random.default_rng(seed + 100).normal(size=atoms.n)
        for p in (1, 2):
            assert semidual_objective(v, atoms, p, y, b) <= primal_ot_cost(atoms.points, atoms.weights, y, b, p) + 1e-12

    def test_assignment_matches_argmin(self):
        rng = np.random.default_rng(3)
        y = rng.normal(size=(7, 3))
        x = rng.normal(size=(200, 3))
        v = rng.normal(size=7)
        out = np.empty(200, dtype=np.int64)
        total = _kernels.assign(y, x, 1.5, v, out)
        c = np.linalg.norm(x[:, None] - y[None], axis=2) ** 1.5 - v
        assert np.array_equal(out, np.argmin(c, axis=1))
        assert total == pytest.approx(c.min(axis=1).sum(), rel=1e-13)

    def test_rejects_p_below_one(self):
        with pytest.raises(DomainError):
            semidual_objective([0.0], DiscreteMeasure([[0.0]]), 0.5, [[1.0]])


class TestDiscreteDuality:
    @pytest.mark.parametrize("seed", range(8))
    @pytest.mark.parametrize("p", [1, 2])
    def test_dual_equals_primal(self, seed, p):
        atoms, y, b = _instance(seed)
        v = maximize_semidual_discrete(atoms, y, p, b)
        dual = semidual_objective(v, atoms, p, y, b)
        primal = primal_ot_cost(atoms.points, atoms.weights, y, b, p)
        assert dual == pytest.approx(primal, rel=1e-4, abs=1e-12)

    def test_sag_on_fixed_reference_approaches_lp(self):
        rng = np.random.default_rng(5)
        atoms = DiscreteMeasure(rng.normal(size=(4, 2)))
        ref = rng.normal(size=(2000, 2)) + [0.3, 0.0]
        exact = semidual_objective(maximize_semidual_discrete(atoms, ref, 2), atoms, 2, ref)
        cfg = SolverConfig(epochs=60, decay_after=20, decay_rate=0.9)
        sol = sag_solve(atoms, None, 2, cfg, rng=stream(1), reference=ref)
        assert sol.objective <= exact + 1e-9
        assert sol.objective == pytest.approx(exact, rel=2e-3)


class TestExact1D:
    def test_point_mass_against_uniform(self):
        q = lambda u: u
        assert wasserstein_pp_1d_exact([[0.0]], q, 1) == pytest.approx(0.5, abs=1e-14)
        assert wasserstein_pp_1d_exact([[0.0]], q, 2) == pytest.approx(1 / 3, abs=1e-14)
        assert wasserstein_pp_1d_exact([[0.25], [0.75]], q, 2) == pytest.approx(1 / 48, abs=1e-14)
        assert wasserstein_pp_1d_exact([[0.0], [1.0]], q, 1) == pytest.approx(0.25, abs=1e-14)

    def test_order_of_atoms_is_irrelevant(self):
        x = np.array([[0.9], [0.1], [0.4]])
        q = stats.norm.ppf
        assert wasserstein_pp_1d_exact(x, q, 1) == pytest.approx(wasserstein_pp_1d_exact(x[::-1], q, 1), rel=1e-14)

    @pytest.mark.parametrize("p,expected", [(2, 0.02555731321886804), (1, 0.10313896564094373)])
    def test_normal_sample_against_quad_oracle(self, p, expected):
        # expected values: scipy.integrate.quad over each quantile cell, kinks passed as breakpoints
        x = np.random.default_rng(2024).normal(size=50)
        assert wasserstein_pp_1d_exact(x[:, None], stats.norm.ppf, p) == pytest.approx(expected, rel=1e-10)

    def test_weighted_atoms(self):
        x = DiscreteMeasure([[0.0], [1.0]], [0.25, 0.75])
        expect = integrate.quad(lambda u: u * u, 0, 0.25)[0] + integrate.quad(lambda u: (1 - u) ** 2, 0.25, 1)[0]
        assert wasserstein_pp_1d_exact(x, lambda u: u, 2) == pytest.approx(expect, rel=1e-12)

    def test_multivariate_rejected(self):
        with pytest.raises(DomainError):
            wasserstein_pp_1d_exact(np.zeros((3, 2)), lambda u: u, 2)


class TestGaussianClosedForm:
    def test_mean_shift(self):
        assert gaussian_w2_squared([1.0, 1.0], np.eye(2), [0.0, 0.0], np.eye(2)) == pytest.approx(2.0, abs=1e-12)

    @pytest.mark.parametrize("d,s", [(1, 2.0), (2, 0.5), (5, 3.0)])
    def test_isotropic_scaling(self, d, s):
        val = gaussian_w2_squared(np.zeros(d), s * s * np.eye(d), np.zeros(d), np.eye(d))
        assert abs(val - d * (s - 1) ** 2) <= 1e-12

    def test_symmetric_and_one_dim(self):
        a = np.array([[2.0, 0.3], [0.3, 1.0]])
        b = np.array([[1.0, -0.2], [-0.2, 0.5]])
        assert gaussian_w2_squared([0, 0], a, [1, 0], b) == pytest.approx(gaussian_w2_squared([1, 0], b, [0, 0], a))
        assert gaussian_w2_squared([0.0], [[4.0]], [1.0], [[1.0]]) == pytest.approx(2.0)

    def test_not_psd(self):
        with pytest.raises(DomainError):
            gaussian_w2_squared([0, 0], [[1, 2], [2, 1]], [0, 0], np.eye(2))

    def test_sag_agrees_with_closed_form_for_large_samples(self):
        # W2^2 of a huge Gaussian sample is close to the closed form between Gaussians
        x = Gaussian([1.0, 0.0], np.diag([1.0, 1.0])).sample(300, stream(31))
        est = estimate_wpp(x, Gaussian.standard(2), 2, SolverConfig.desk(seed=1))
        assert 1.0 < est < 1.35


class TestSagSolver:
    def test_deterministic(self, fast_cfg):
        x = np.random.default_rng(4).normal(size=(30, 2))
        a = sag_solve(x, Gaussian.standard(2), 2, fast_cfg)
        b = sag_solve(x, Gaussian.standard(2), 2, fast_cfg)
        assert a.objective == b.objective
        assert np.array_equal(a.v, b.v)

    def test_potentials_centred(self, fast_cfg):
        sol = sag_solve(np.random.default_rng(4).normal(size=(30, 2)), Gaussian.standard(2), 1, fast_cfg)
        assert abs(sol.v.mean()) < 1e-12
        assert sol.ref_points_used == 5000 and sol.iterations == 3 * 5000

    def test_trace_length(self, fast_cfg):
        sol = sag_solve(np.zeros((3, 2)) + [[0, 0], [1, 0], [0, 1]], Gaussian.standard(2), 2,
                        fast_cfg.with_(epochs=4), trace=True)
        assert len(sol.trace) == 4

    def test_shifted_atoms(self):
        # atoms recentred at (3, 0) against N(0, I): W2^2 lies near 9 + transport of the spread
        rng = np.random.default_rng(0)
        x = rng.normal(size=(100, 2))
        x = x - x.mean(axis=0) + [3.0, 0.0]
        est = sag_solve(x, Gaussian.standard(2), 2, SolverConfig.desk(seed=2)).objective
        assert 9.0 <= est <= 9.0 + 0.35

    @pytest.mark.parametrize("p", [1, 2])
    @pytest.mark.parametrize("margin", [Margin.uniform(), Margin.normal()], ids=["unif", "norm"])
    def test_one_dim_against_exact(self, p, margin):
        law = Univariate(margin)
        x = law.sample(200, stream(41, p))
        exact = wasserstein_pp_1d_exact(x, lambda u: margin.ppf(u), p)
        cfg = SolverConfig.desk(seed=3, epochs=30, decay_after=10, decay_rate=0.85)
        est = sag_solve(x, law, p, cfg).objective
        assert abs(est - exact) / exact < 0.04

    def test_warm_start_exact_for_gaussian_map(self):
        # atoms that are an affine image of the reference: warm start is already optimal
        ref = np.random.default_rng(6).normal(size=(4000, 2))
        atoms = ref[:50] @ np.array([[2.0, 0.0], [0.5, 1.0]])
        v = warm_start_potentials(atoms, ref, 2.0)
        assert np.all(np.isfinite(v)) and abs(v.mean()) < 1e-10

    def test_zero_epochs_returns_warm_start_value(self, fast_cfg):
        x = np.random.default_rng(4).normal(size=(20, 2))
        sol = sag_solve(x, Gaussian.standard(2), 2, fast_cfg.with_(epochs=0))
        assert sol.iterations == 0 and np.isfinite(sol.objective)

    def test_errors(self, fast_cfg):
        with pytest.raises(DomainError):
            sag_solve(np.zeros((3, 3)), Gaussian.standard(2), 2, fast_cfg)
        with pytest.raises(DomainError):
            sag_solve(np.zeros((3, 2)), Gaussian.standard(2), 0.9, fast_cfg)
        with pytest.raises(ConfigurationError):
            sag_solve(np.zeros((30, 2)), Gaussian.standard(2), 2, fast_cfg.with_(ref_sample_size=10))


class TestSolverConfig:
    def test_scales(self):
        assert SolverConfig.desk().ref_sample_size == 20_000
        assert SolverConfig.paper().ref_sample_size == 200_000

    def test_roundtrip(self):
        cfg = SolverConfig(epochs=5, decay_after=2, decay_rate=0.9)
        assert SolverConfig.from_dict(cfg.to_dict()) == cfg

    @pytest.mark.parametrize("kw", [dict(step_constant=0.0), dict(decay_rate=1.5), dict(ref_sample_size=0)])
    def test_invalid(self, kw):
        with pytest.raises(ConfigurationError):
            SolverConfig(**kw)

    def test_unknown_field(self):
        with pytest.raises(ConfigurationError):
            SolverConfig.from_dict({"learning_rate": 1.0})


class TestEstimateDispatch:
    def test_one_dim_uses_exact_route(self):
        x = np.random.default_rng(2024).normal(size=50)[:, None]
        assert estimate_wpp(x, Univariate(Margin.normal()), 2) == pytest.approx(0.02555731321886804, rel=1e-10)
