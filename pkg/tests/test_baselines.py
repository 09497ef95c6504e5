import numpy as np
import pytest
from numpy.testing import assert_allclose

from wgof.baselines import khmaladze_null, khmaladze_statistic, khmaladze_test, rms_statistic, rms_test
from wgof.copulas import CopulaSpec, copula_logpdf, sample_copula
from wgof.distributions import Gaussian, Margin, MetaCopula, max_stable_gumbel
from wgof.errors import DegenerateSampleError, DomainError, UnsupportedOperationError
from wgof.gof import standardize_affine
from wgof.rng import stream


def _exact_moments(mean, n=50, d=2, seed=0):
    z = standardize_affine(np.random.default_rng(seed).normal(size=(n, d)))[0].points
    return z + mean


@pytest.fixture(scope="module")
def gumbel_null():
    return khmaladze_null(MetaCopula(CopulaSpec("gumbel", 1.7), [Margin.normal()] * 2), grid=128, ref_points=2000)


class TestRms:
    def test_mean_only(self):
        x = _exact_moments([1.0, -2.0])
        assert rms_statistic(x, [0.0, 0.0], np.eye(2)) == pytest.approx(5.0, abs=1e-10)

    def test_scale(self):
        x = 2.0 * _exact_moments([0.0, 0.0])
        assert rms_statistic(x, [0.0, 0.0], np.eye(2)) == pytest.approx(2.0, abs=1e-10)

    def test_blind_to_shape_with_matching_moments(self):
        # a uniform sample standardized to mean 0, covariance I looks perfect to the moment test
        u = np.random.default_rng(1).random((200, 2))
        z = standardize_affine(u)[0].points
        assert rms_statistic(z, [0, 0], np.eye(2)) < 1e-20

    def test_degenerate(self):
        with pytest.raises(DegenerateSampleError):
            rms_statistic(np.zeros((2, 2)), [0, 0], np.eye(2))
        with pytest.raises(DegenerateSampleError):
            rms_statistic(np.column_stack([np.arange(5.0), np.arange(5.0)]), [0, 0], np.eye(2))

    def test_rejects_shift(self):
        x = Gaussian([0.6, 0.0]).sample(100, stream(1))
        r = rms_test(x, [0, 0], np.eye(2), 0.05, 200, seed=2)
        assert r.reject and r.mc_meta["method"] == "rms"

    def test_reuses_null_draws(self):
        null = Gaussian.standard(2)
        x = null.sample(50, stream(3))
        full = rms_test(x, [0, 0], np.eye(2), 0.05, 300, seed=4)
        again = rms_test(x, [0, 0], np.eye(2), 0.05, seed=4, null_draws=np.full(300, 1e9))
        assert again.statistic == full.statistic and again.p_value == 1.0 and not again.reject


class TestKhmaladzeNull:
    def test_independence(self):
        spec = khmaladze_null(Gaussian([0.0, 0.0], np.diag([1.0, 4.0])), ref_points=100)
        assert spec.independent and spec.kappa == 1.0
        u = np.array([[0.3, 0.5], [1.0, 1.0]])
        assert_allclose(spec.kappa_at(u), [0.15, 1.0])

    def test_kappa_against_monte_carlo(self, gumbel_null):
        # integral of c^{3/2} = E[c(U)^{1/2}] with U drawn from the copula
        spec = CopulaSpec("gumbel", 1.7)
        u = sample_copula(spec, 400_000, stream(7))
        w = np.exp(0.5 * copula_logpdf(spec, u))
        se = w.std() / np.sqrt(w.size)
        assert abs(gumbel_null.kappa - w.mean()) < 4 * se + 1e-3
        assert gumbel_null.kappa == pytest.approx(1.2308, abs=2e-3)

    def test_table_margins(self, gumbel_null):
        t = gumbel_null.table
        assert t[0, 0] == 0.0 and np.all(np.diff(t, axis=0) >= 0) and np.all(np.diff(t, axis=1) >= 0)
        assert gumbel_null.kappa_at(np.array([[1.0, 1.0]]))[0] == pytest.approx(gumbel_null.kappa)

    def test_grid_refinement(self, gumbel_null):
        fine = khmaladze_null(gumbel_null.dist, grid=256, ref_points=2000)
        x = gumbel_null.dist.sample(100, stream(8))
        a, b = khmaladze_statistic(x, gumbel_null), khmaladze_statistic(x, fine)
        assert abs(a - b) / b < 5e-3

    def test_gaussian_dependent_null(self):
        spec = khmaladze_null(Gaussian([0.0, 0.0], [[1.0, 0.5], [0.5, 1.0]]), grid=128, ref_points=500)
        x = Gaussian([0.0, 0.0], [[1.0, 0.5], [0.5, 1.0]]).sample(200_000, stream(9))
        u = spec.to_uniforms(x)
        w = spec.weight(u)
        assert spec.kappa == pytest.approx(w.mean(), abs=4 * w.std() / np.sqrt(w.size) + 1e-3)

    def test_unsupported(self):
        with pytest.raises(UnsupportedOperationError):
            khmaladze_null(max_stable_gumbel(1.5, 3))


class TestKhmaladzeStatistic:
    def test_independence_brute_force(self):
        spec = khmaladze_null(Gaussian([0.0, 0.0]), ref_points=50, seed=3)
        x = np.random.default_rng(10).normal(size=(30, 2))
        u = spec.to_uniforms(x)
        ev = np.vstack([u, spec.ref_u])
        best = 0.0
        for t in ev:
            count = sum(1 for s in u if s[0] <= t[0] and s[1] <= t[1])
            best = max(best, abs(count - 30 * t[0] * t[1]) / np.sqrt(30))
        assert khmaladze_statistic(x, spec) == pytest.approx(best, rel=1e-12)

    def test_null_scale_and_power(self, gumbel_null):
        t0 = khmaladze_statistic(gumbel_null.dist.sample(200, stream(11)), gumbel_null)
        t1 = khmaladze_statistic(gumbel_null.dist.sample(200, stream(11)) + 1.0, gumbel_null)
        assert t0 < 3.0 < t1

    def test_dimension_check(self, gumbel_null):
        with pytest.raises(DomainError):
            khmaladze_statistic(np.zeros((5, 3)), gumbel_null)

    def test_test_rejects_shift(self):
        spec = khmaladze_null(Gaussian([0.0, 0.0]), ref_points=1000)
        r = khmaladze_test(Gaussian([0.8, 0.8]).sample(100, stream(12)), spec, 0.05, 200, seed=1)
        assert r.reject and r.mc_meta["kappa"] == 1.0
