import json

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import integrate, optimize, stats

from wgof.copulas import CopulaSpec
from wgof.distributions import (DENSITY, MARGINAL_CDF, MARGINAL_QUANTILE, EllipticalT, Gaussian, GaussianMixture,
                                GaussianParams, Margin, MetaCopula, MixtureSpec, Product, SkewT, Univariate,
                                density, from_config, gev_cdf, gev_quantile, make_boomerang, max_stable_gumbel,
                                product, sample, sample_elliptical, sample_skew_t)
from wgof.errors import ConfigurationError, DomainError, UnsupportedOperationError
from wgof.rng import stream


ALL_LAWS = [
    Gaussian([1.0, 2.0], [[2.0, 0.3], [0.3, 1.0]]),
    make_boomerang(0.35),
    EllipticalT.standard(3, 12.0),
    MetaCopula(CopulaSpec("gumbel", 1.7), [Margin.normal(), Margin.student(5.0)]),
    max_stable_gumbel(5 / 3, 5, 0.2),
    Product([Univariate(Margin.student(25.0))] * 3 + [EllipticalT.standard(2, 25.0)]),
    SkewT([0.0, 0.0], np.eye(2), [5.0, -2.0], 12.0),
    Univariate(Margin.gumbel(1.0, 2.0)),
]


class TestSampleFrontDoor:
    @pytest.mark.parametrize("law", ALL_LAWS, ids=lambda d: d.family)
    def test_shape_finite_and_deterministic(self, law):
        a = sample(law, 300, stream(1, "x"))
        b = sample(law, 300, stream(1, "x"))
        assert a.points.shape == (300, law.dim)
        assert np.all(np.isfinite(a.points))
        assert_allclose(a.weights, np.full(300, 1 / 300))
        assert np.array_equal(a.points, b.points)

    @pytest.mark.parametrize("law", ALL_LAWS, ids=lambda d: d.family)
    def test_empty(self, law):
        m = sample(law, 0, stream(0))
        assert m.n == 0 and m.dim == law.dim

    def test_unsupported_object(self):
        with pytest.raises(ConfigurationError):
            sample("not a law", 3, stream(0))

    def test_gaussian_mean_lln(self):
        m = sample(Gaussian([1.0, 2.0]), 10 ** 6, stream(3))
        assert np.all(np.abs(m.points.mean(axis=0) - [1.0, 2.0]) < 0.01)

    def test_gaussian_covariance(self):
        cov = np.array([[2.0, 0.3], [0.3, 1.0]])
        x = Gaussian([0.0, 0.0], cov).sample(10 ** 6, stream(4))
        assert np.max(np.abs(np.cov(x.T) - cov)) < 0.01


class TestDensity:
    def test_standard_normal_at_zero(self):
        assert density(Univariate(Margin.normal()), [0.0])[0] == pytest.approx(0.3989423, abs=1e-7)
        assert density(Gaussian([0.0]), [[0.0]])[0] == pytest.approx(1 / np.sqrt(2 * np.pi), rel=1e-14)

    def test_mixture_is_sum_of_components(self):
        mix = GaussianMixture([0.5, 0.5], [Gaussian([0.0]), Gaussian([3.0])])
        expect = 0.5 * stats.norm.pdf(0) + 0.5 * stats.norm.pdf(3)
        assert density(mix, [[0.0]])[0] == pytest.approx(expect, rel=1e-14)

    def test_capability_absent(self):
        with pytest.raises(UnsupportedOperationError):
            density(max_stable_gumbel(2.0, 5), np.zeros((1, 5)))

    @pytest.mark.parametrize("law", [make_boomerang(0.35), MetaCopula(CopulaSpec("gumbel", 1.7), [Margin.normal()] * 2),
                                     SkewT([0.0, 0.0], np.eye(2), [5.0, 0.0], 12.0), EllipticalT.standard(2, 12.0)],
                             ids=lambda d: d.family)
    def test_integrates_to_one(self, law):
        g = np.linspace(-8, 8, 801)
        xx, yy = np.meshgrid(g, g)
        f = law.pdf(np.column_stack([xx.ravel(), yy.ravel()])).reshape(xx.shape)
        assert np.all(f >= 0)
        assert integrate.trapezoid(integrate.trapezoid(f, g, axis=1), g) == pytest.approx(1.0, abs=3e-3)

    def test_boomerang_on_small_box(self):
        g = np.linspace(-4, 4, 801)
        xx, yy = np.meshgrid(g, g)
        f = make_boomerang(0.35).pdf(np.column_stack([xx.ravel(), yy.ravel()])).reshape(xx.shape)
        assert integrate.trapezoid(integrate.trapezoid(f, g, axis=1), g) == pytest.approx(1.0, abs=1e-3)


class TestMargins:
    MARGINS = [Margin.normal(1.0, 2.0), Margin.student(4.0, 0.5, 1.5), Margin.gumbel(-1.0, 0.7),
               Margin.gev(0.3), Margin.gev(-0.2, 1.0, 2.0), Margin.uniform(-1.0, 3.0),
               Margin.normal_mixture([0.5, 0.5], [0.0, 3.0], [1.0, 1.0])]

    @pytest.mark.parametrize("m", MARGINS, ids=lambda m: m.kind)
    def test_quantile_inverts_cdf(self, m):
        u = np.linspace(0.001, 0.999, 97)
        x = m.ppf(u)
        assert_allclose(m.ppf(m.cdf(x)), x, atol=1e-9, rtol=1e-9)

    @pytest.mark.parametrize("m", MARGINS, ids=lambda m: m.kind)
    def test_pdf_is_derivative_of_cdf(self, m):
        x = m.ppf(np.linspace(0.05, 0.95, 11))
        h = 1e-5
        assert_allclose((m.cdf(x + h) - m.cdf(x - h)) / (2 * h), m.pdf(x), rtol=1e-5)

    def test_bad_parameters(self):
        with pytest.raises(DomainError):
            Margin.normal(0.0, -1.0)
        with pytest.raises(ConfigurationError):
            Margin("cauchy", ())


class TestGev:
    def test_gumbel_branch(self):
        assert gev_quantile(0.0, np.exp(-1.0)) == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("u", [0.1, 0.5, 0.9])
    def test_continuity_at_zero(self, u):
        assert abs(gev_quantile(1e-8, u) - gev_quantile(0.0, u)) < 1e-6

    def test_against_bisection_oracle(self):
        # brentq root of the GEV(0.5) cdf at 0.9, xtol 1e-15
        assert gev_quantile(0.5, 0.9) == pytest.approx(4.161565249522204, abs=1e-8)

    def test_cdf_roundtrip(self):
        for xi in (-0.4, 0.0, 0.25):
            u = np.linspace(0.01, 0.99, 50)
            assert_allclose(gev_cdf(xi, gev_quantile(xi, u)), u, atol=1e-12)

    @pytest.mark.parametrize("u", [0.0, 1.0, -0.1, 1.5])
    def test_outside_unit_interval(self, u):
        with pytest.raises(DomainError):
            gev_quantile(0.1, u)


class TestGaussianParams:
    def test_cholesky_invariants(self):
        gp = GaussianParams(np.zeros(2), np.array([[4.0, 2.0], [2.0, 5.0]]))
        assert_allclose(gp.chol_lower, [[2.0, 0.0], [1.0, 2.0]], atol=1e-12)
        assert_allclose(gp.chol_lower @ gp.chol_lower.T, gp.cov, atol=1e-10)
        assert np.all(np.diag(gp.chol_lower) > 0)

    def test_not_positive_definite(self):
        with pytest.raises(DomainError):
            GaussianParams(np.zeros(2), np.array([[1.0, 2.0], [2.0, 1.0]]))


class TestMixtureAndBoomerang:
    def test_weights_validated(self):
        with pytest.raises(DomainError):
            MixtureSpec((0.5, 0.6), (Gaussian([0.0]), Gaussian([1.0])))

    def test_constants(self):
        b = make_boomerang(0.2)
        assert_allclose(b.weights, [0.6, 0.2, 0.2])
        assert_allclose(b.components[1].mean, [-0.9, 0.3])
        assert_allclose(b.components[2].cov, [[0.358, 0.55], [0.55, 1.02]])
        assert_allclose(b.components[0].cov, 0.35 ** 2 * np.eye(2))

    def test_p_zero_is_single_gaussian(self):
        b = make_boomerang(0.0)
        assert len(b.components) == 1
        assert_allclose(b.components[0].mean, [0.0, -0.7])

    @pytest.mark.parametrize("p", [-0.1, 0.51])
    def test_out_of_range(self, p):
        with pytest.raises(DomainError):
            make_boomerang(p)

    def test_component_frequencies(self):
        _, labels = make_boomerang(0.35).sample_labelled(500, stream(11, "boom"))
        freq = np.bincount(labels, minlength=3) / 500
        assert np.all(np.abs(freq - [0.30, 0.35, 0.35]) <= 0.05)

    def test_lobe_geometry(self):
        x, labels = make_boomerang(0.35).sample_labelled(500, stream(11, "boom"))
        centres = np.array([x[labels == k].mean(axis=0) for k in range(3)])
        assert centres[1, 0] < 0 < centres[2, 0]
        assert centres[0, 1] < min(centres[1, 1], centres[2, 1])

    def test_moments_close_to_standard(self):
        x = make_boomerang(0.35).sample(10 ** 6, stream(5))
        assert np.all(np.abs(x.mean(axis=0)) <= 0.1)
        assert np.all(np.abs(np.cov(x.T) - np.eye(2)) <= 0.25)


class TestElliptical:
    def test_radius_mean(self):
        m = sample_elliptical(np.zeros(2), np.eye(2), ("student-t", 12.0), 10 ** 5, stream(6))
        r2 = np.sum(m.points ** 2, axis=1) / 2
        assert abs(r2.mean() - 1.2) < 0.05

    def test_gaussian_radial_matches_normal(self):
        a = sample_elliptical(np.zeros(2), np.eye(2), "gaussian", 5000, stream(7, "a")).points
        b = Gaussian.standard(2).sample(5000, stream(7, "b"))
        assert stats.ks_2samp(a[:, 0], b[:, 0]).pvalue > 0.01

    def test_bad_nu(self):
        with pytest.raises(DomainError):
            sample_elliptical(np.zeros(2), np.eye(2), ("student-t", 0.0), 10, stream(0))

    def test_null_law_of_the_elliptical_test(self):
        law = EllipticalT.standard(2, 12.0)
        assert law.nu == 12.0 and law.dim == 2

    def test_directions_uniform(self):
        L = np.array([[2.0, 0.0], [1.0, 0.5]])
        mu = np.array([1.0, -1.0])
        n = 10 ** 5
        x = sample_elliptical(mu, L, ("student-t", 5.0), n, stream(8)).points
        z = np.linalg.solve(L, (x - mu).T).T
        u = z / np.linalg.norm(z, axis=1, keepdims=True)
        se_mean = np.sqrt(0.5 / n)
        assert np.all(np.abs(u.mean(axis=0)) < 3 * se_mean)
        c = u.T @ u / n
        se_cov = np.sqrt(np.var(u[:, 0] ** 2) / n)
        assert np.all(np.abs(c - np.eye(2) / 2) < 3 * se_cov)


class TestSkewT:
    def test_symmetric_case(self):
        x = sample_skew_t(np.zeros(2), np.eye(2), [0.0, 0.0], 12.0, 10 ** 5, stream(9)).points
        assert abs(stats.skew(x[:, 0])) < 0.05

    def test_positive_skew(self):
        x = sample_skew_t(np.zeros(2), np.eye(2), [5.0, 0.0], 12.0, 10 ** 5, stream(9)).points
        assert stats.skew(x[:, 0]) > 0

    def test_density_matches_sampler(self):
        law = SkewT([0.5, -0.5], [[1.0, 0.0], [0.4, 0.8]], [2.0, 5.0], 12.0)
        x = law.sample(20000, stream(10))
        # probability of the positive quadrant around the location: sampler vs integrated density
        g = np.linspace(0.5, 12.5, 601)
        h = np.linspace(-0.5, 11.5, 601)
        xx, yy = np.meshgrid(g, h)
        f = law.pdf(np.column_stack([xx.ravel(), yy.ravel()])).reshape(xx.shape)
        mass = integrate.trapezoid(integrate.trapezoid(f, g, axis=1), h)
        freq = np.mean((x[:, 0] > 0.5) & (x[:, 1] > -0.5))
        assert abs(mass - freq) < 4 * np.sqrt(freq * (1 - freq) / 20000) + 2e-3

    def test_grid_drivable(self):
        for a1 in (0.0, 2.0, 5.0):
            for a2 in (-5.0, 0.0, 5.0):
                assert sample_skew_t(np.zeros(2), np.eye(2), [a1, a2], 12.0, 10, stream(0)).n == 10


class TestFromConfig:
    CONFIGS = [
        {"family": "gaussian", "params": {"mean": [0.0, 0.0]}},
        {"family": "boomerang", "params": {"p": 0.35}},
        {"family": "elliptical-t", "params": {"mean": [0.0, 0.0], "nu": 12.0}},
        {"family": "skew-t", "params": {"location": [0.0, 0.0], "alpha": [1.0, 2.0], "nu": 12.0}},
        {"family": "meta-copula", "params": {"copula": {"family": "gumbel", "theta": 1.7, "dim": 2},
                                             "margins": [{"kind": "normal", "params": [0.0, 1.0]}] * 2}},
        {"family": "max-stable-gumbel", "params": {"theta": 1.5, "dim": 3}},
        {"family": "univariate", "params": {"kind": "t", "params": [25.0, 0.0, 1.0]}},
        {"family": "product", "params": {"parts": [{"family": "univariate",
                                                    "params": {"kind": "normal", "params": [0.0, 1.0]}}] * 2}},
    ]

    @pytest.mark.parametrize("cfg", CONFIGS, ids=lambda c: c["family"])
    def test_builds_and_keys_are_json(self, cfg):
        law = from_config(cfg)
        assert json.loads(law.key)["family"] == law.family
        assert law.sample(5, stream(0)).shape == (5, law.dim)

    def test_unknown_family(self):
        with pytest.raises(ConfigurationError):
            from_config({"family": "cauchy"})

    def test_missing_field(self):
        with pytest.raises(ConfigurationError):
            from_config({"family": "gaussian", "params": {}})


class TestCapabilities:
    def test_flags(self):
        assert DENSITY in Gaussian.standard(2).capabilities
        assert MARGINAL_QUANTILE in product([Margin.normal()] * 3).capabilities
        assert DENSITY not in max_stable_gumbel(2.0, 5).capabilities
        assert MARGINAL_CDF in max_stable_gumbel(2.0, 5).capabilities
