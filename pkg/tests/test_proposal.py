import mpmath as mp
import numpy as np
import pytest

import qda
from qda import (
    DomainError,
    Proposal,
    gamma_block,
    gamma_quantile,
    inv_norm_cdf,
    midpoint_grid_1d,
    mvcauchy,
    mvnormal,
    uniform_box,
)
from qda.dacore import TargetDensity, discretize
from qda.qmc import halton_points

mp.mp.dps = 40


def _phi_hp(x):
    return 0.5 * mp.erfc(-mp.mpf(x) / mp.sqrt(2))


class TestInvNormCdf:
    def test_median_is_zero(self):
        assert inv_norm_cdf(0.5) == 0.0

    # frozen from bisection on the high-precision normal CDF
    @pytest.mark.parametrize(
        "p,expected",
        [(0.975, 1.9599639845400542), (0.1, -1.2815515655446004)],
    )
    def test_reference_quantiles(self, p, expected):
        assert inv_norm_cdf(p) == pytest.approx(expected, abs=1e-6)

    def test_cdf_residual_below_1e12(self):
        ps = np.linspace(1e-8, 1 - 1e-8, 101)
        for p in ps:
            assert abs(float(_phi_hp(inv_norm_cdf(p))) - p) < 1e-12

    def test_odd_symmetry(self):
        ps = np.linspace(0.01, 0.49, 25)
        np.testing.assert_allclose(inv_norm_cdf(1 - ps), -inv_norm_cdf(ps), atol=1e-12)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.3, 1.7])
    def test_domain(self, p):
        with pytest.raises(DomainError):
            inv_norm_cdf(p)


class TestGammaQuantile:
    def test_exponential_special_case(self):
        ps = np.linspace(0.05, 0.95, 19)
        np.testing.assert_allclose(gamma_quantile(ps, 1.0, 1.0), -np.log1p(-ps), rtol=1e-12)

    def test_shape2_median(self):
        # frozen from bisection on the high-precision incomplete gamma
        assert gamma_quantile(0.5, 2.0, 1.0) == pytest.approx(1.6783469900166606, abs=1e-5)

    def test_inverts_regularized_incomplete_gamma(self):
        for shape in (0.5, 2.0, 44.0):
            for p in (0.05, 0.5, 0.99):
                q = gamma_quantile(p, shape, 1.0)
                resid = float(mp.gammainc(shape, 0, q, regularized=True)) - p
                assert abs(resid) < 1e-10 * max(p, 1e-3)

    def test_scale_equivariance(self):
        ps = np.array([0.1, 0.4, 0.9])
        np.testing.assert_allclose(
            gamma_quantile(ps, 3.5, 7.0), 7.0 * gamma_quantile(ps, 3.5, 1.0), rtol=1e-14
        )

    def test_monotone_in_p(self):
        q = gamma_quantile(np.linspace(0.01, 0.99, 50), 2.3, 0.7)
        assert np.all(np.diff(q) > 0)

    def test_domain(self):
        with pytest.raises(DomainError):
            gamma_quantile(0.5, -1.0, 1.0)
        with pytest.raises(DomainError):
            gamma_quantile(1.0, 2.0, 1.0)


class TestMapPoint:
    def test_cauchy_center_maps_to_location(self):
        p = Proposal([mvcauchy([2.0, -1.0], np.eye(2))])
        y, logpsi = p.map_point(np.array([0.5, 0.5]))
        np.testing.assert_allclose(y, [2.0, -1.0], atol=1e-12)
        assert logpsi == pytest.approx(0.0, abs=1e-12)

    def test_normal_quantile_transport(self):
        p = Proposal([mvnormal([0.0], [[1.0]])])
        y, _ = p.map_point(np.array([0.975]))
        assert y[0] == pytest.approx(1.959964, abs=1e-6)

    def test_uniform_box_is_identity_on_unit_cube(self):
        p = Proposal([uniform_box([0.0, 0.0, 0.0], [1.0, 1.0, 1.0])])
        u = np.array([0.3, 0.7, 0.999])
        y, logpsi = p.map_point(u)
        np.testing.assert_array_equal(y, u)
        assert logpsi == 0.0

    def test_blocks_apply_to_contiguous_slices(self):
        p = Proposal([mvcauchy([5.0], [[4.0]]), gamma_block(2.0, 3.0), uniform_box([-1.0], [1.0])])
        assert p.dim == 3
        y, _ = p.map_point(np.array([0.5, 0.5, 0.25]))
        assert y[0] == pytest.approx(5.0)
        assert y[1] == pytest.approx(3.0 * 1.6783469900166606, rel=1e-9)
        assert y[2] == pytest.approx(-0.5)

    def test_boundary_raises_for_diverging_transports(self):
        p = Proposal([mvnormal([0.0], [[1.0]])])
        with pytest.raises(DomainError):
            p.map_point(np.array([0.0]))
        with pytest.raises(DomainError):
            p.map_point(np.array([1.0]))

    def test_non_pd_scale_fails_at_construction(self):
        with pytest.raises(np.linalg.LinAlgError):
            mvcauchy([0.0, 0.0], [[1.0, 2.0], [2.0, 1.0]])

    def test_logpsi_matches_batched_evaluation(self):
        p = Proposal([mvnormal([1.0, 2.0], np.diag([4.0, 9.0])), gamma_block(3.0, 2.0)])
        u = halton_points(50, 3).points
        ys, logs = p.map_points(u)
        for k in range(50):
            y1, l1 = p.map_point(u[k])
            np.testing.assert_array_equal(y1, ys[k])
            assert l1 == logs[k]


class TestTransportProperties:
    @pytest.mark.parametrize(
        "block",
        [
            uniform_box([-2.0], [5.0]),
            mvnormal([1.5], [[2.25]]),
            mvcauchy([-3.0], [[0.49]]),
            gamma_block(4.0, 0.5),
        ],
        ids=["uniform_box", "mvnormal", "mvcauchy", "gamma"],
    )
    def test_round_trip_cdf_recovers_u(self, block):
        p = Proposal([block])
        u = halton_points(100, 1).points
        y, _ = p.map_points(u)
        np.testing.assert_allclose(p.coordinate_cdf(y), u, atol=1e-8)

    @pytest.mark.parametrize(
        "block",
        [
            uniform_box([-2.0], [5.0]),
            mvnormal([1.5], [[2.25]]),
            mvcauchy([-3.0], [[0.49]]),
            gamma_block(4.0, 0.5),
        ],
        ids=["uniform_box", "mvnormal", "mvcauchy", "gamma"],
    )
    def test_scalar_transport_strictly_increasing(self, block):
        p = Proposal([block])
        u = np.linspace(0.001, 0.999, 200)[:, None]
        y, _ = p.map_points(u)
        assert np.all(np.diff(y[:, 0]) > 0)

    def test_constant_logpsi_shift_leaves_masses_unchanged(self):
        # self-normalization: psi defined up to a positive constant
        base = Proposal([uniform_box([0.0], [1.0])])

        class Shifted(Proposal):
            def map_points(self, u):
                y, logpsi = super().map_points(u)
                return y, logpsi + 123.456

        shifted = Shifted([uniform_box([0.0], [1.0])])
        target = TargetDensity(
            neg_log_density=lambda x: float(3.0 * x[0]), dim=1, support=(("interval", 0, 1),)
        )
        pts = midpoint_grid_1d(64)
        m0 = discretize(target, base, pts).masses
        m1 = discretize(target, shifted, pts).masses
        np.testing.assert_allclose(m0, m1, atol=1e-14)


def test_describe_mentions_each_block():
    p = Proposal([mvcauchy([0.0], [[1.0]]), gamma_block(1.0, 1.0)])
    text = p.describe()
    assert "mvcauchy" in text and "gamma" in text


def test_package_reexports():
    assert qda.Proposal is Proposal
