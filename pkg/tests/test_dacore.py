import numpy as np
import pytest

from qda import (
    NoMassError,
    Proposal,
    TargetEvaluationError,
    acceptance_rate,
    cdf_at,
    discretize,
    kolmogorov_discrete,
    marginal_quantile,
    midpoint_grid_1d,
    moment,
    sobol_points,
    uniform_box,
)
from qda.dacore import TargetDensity
from qda.metrics import CdfOracle
from qda.models import beta_mixture_mean, beta_mixture_oracle, beta_mixture_target

UNIT_UNIFORM = Proposal([uniform_box([0.0], [1.0])])


def _unit_uniform(d):
    return Proposal([uniform_box(np.zeros(d), np.ones(d))])


def _uniform_target(d):
    return TargetDensity(
        neg_log_density=lambda x: 0.0 if np.all((x >= 0) & (x <= 1)) else np.inf,
        dim=d,
        support=tuple(("interval", 0.0, 1.0) for _ in range(d)),
        name="uniform",
    )


def beta23_target():
    def nll(x):
        v = float(x[0])
        if not 0.0 < v < 1.0:
            return np.inf
        return -(np.log(v) + 2.0 * np.log1p(-v))

    return TargetDensity(nll, dim=1, support=(("interval", 0.0, 1.0),), name="beta23")


def beta23_cdf(x):
    # F(x) = 12 * integral_0^x t(1-t)^2 dt = 6x^2 - 8x^3 + 3x^4, exact polynomial
    v = float(np.clip(x[0], 0.0, 1.0))
    return 6.0 * v**2 - 8.0 * v**3 + 3.0 * v**4


class TestDiscretize:
    def test_uniform_target_gives_equal_masses(self):
        for pts in (midpoint_grid_1d(7), sobol_points(16, 1, skip=0)):
            dp = discretize(_uniform_target(1), _unit_uniform(1), pts)
            np.testing.assert_allclose(dp.masses, 1.0 / pts.m, atol=1e-16)
            assert dp.acceptance_rate == 1.0

    def test_beta23_masses_match_closed_form(self):
        dp = discretize(beta23_target(), UNIT_UNIFORM, midpoint_grid_1d(10))
        a = dp.support[:, 0]
        expected = a * (1 - a) ** 2
        expected /= expected.sum()
        np.testing.assert_allclose(dp.masses, expected, rtol=1e-13)
        # frozen from the closed-form 10-term sum: mass at a=0.45
        assert dp.masses[4] == pytest.approx(0.16253731343283582, rel=1e-12)

    def test_beta_mixture_table_values(self):
        target = beta_mixture_target()
        dp = discretize(target, UNIT_UNIFORM, midpoint_grid_1d(10))
        se = (dp.mean()[0] - beta_mixture_mean()) ** 2
        assert se == pytest.approx(2.1613e-5, rel=1e-2)
        dp30 = discretize(target, UNIT_UNIFORM, midpoint_grid_1d(30))
        se30 = (dp30.mean()[0] - beta_mixture_mean()) ** 2
        assert se30 == pytest.approx(3.2417e-7, rel=1e-2)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            discretize(_uniform_target(2), _unit_uniform(1), midpoint_grid_1d(4))

    def test_all_zero_mass_raises(self):
        dead = TargetDensity(lambda x: np.inf, dim=1, support=("real",), name="nowhere")
        with pytest.raises(NoMassError, match="revise the proposal"):
            discretize(dead, UNIT_UNIFORM, midpoint_grid_1d(8))

    def test_nan_names_the_offending_point(self):
        def bad(x):
            return np.nan if x[0] > 0.5 else 0.0

        target = TargetDensity(bad, dim=1, support=(("interval", 0.0, 1.0),), name="buggy")
        with pytest.raises(TargetEvaluationError, match="buggy"):
            discretize(target, UNIT_UNIFORM, midpoint_grid_1d(10))

    def test_unnormalized_density_invariance(self):
        # ell and ell + c give identical masses: f known only up to a constant
        pts = midpoint_grid_1d(50)
        base = discretize(beta23_target(), UNIT_UNIFORM, pts)
        for c in (-1000.0, -3.5, 17.0, 2000.0):
            shifted = TargetDensity(
                lambda x, c=c: beta23_target().neg_log_density(x) + c,
                dim=1,
                support=(("interval", 0.0, 1.0),),
            )
            dp = discretize(shifted, UNIT_UNIFORM, pts)
            np.testing.assert_allclose(dp.masses, base.masses, atol=1e-14)

    @pytest.mark.parametrize("workers", [2, 8])
    def test_worker_count_is_bit_identical(self, workers):
        target = beta_mixture_target()
        pts = sobol_points(20000, 1, skip=1)
        ref = discretize(target, UNIT_UNIFORM, pts, workers=1)
        par = discretize(target, UNIT_UNIFORM, pts, workers=workers)
        assert np.array_equal(ref.masses, par.masses)
        assert np.array_equal(ref.log_weights, par.log_weights)

    def test_shift_is_max_finite_log_weight(self):
        dp = discretize(beta23_target(), UNIT_UNIFORM, midpoint_grid_1d(20))
        assert dp.shift == np.max(dp.log_weights[np.isfinite(dp.log_weights)])

    def test_source_provenance(self):
        dp = discretize(beta23_target(), UNIT_UNIFORM, midpoint_grid_1d(5))
        assert dp.source["generator"] == "midpoint1d"
        assert dp.source["m"] == 5


class TestAcceptanceRate:
    def test_all_positive(self):
        dp = discretize(_uniform_target(1), _unit_uniform(1), midpoint_grid_1d(9))
        assert acceptance_rate(dp) == 1.0

    def test_half_supported_target(self):
        half = TargetDensity(
            lambda x: 0.0 if x[0] < 0.5 else np.inf,
            dim=1,
            support=(("interval", 0.0, 0.5),),
        )
        dp = discretize(half, UNIT_UNIFORM, midpoint_grid_1d(10))
        assert acceptance_rate(dp) == 0.5

    def test_underflowed_atoms_count_as_zero(self):
        # log-weight gap of 2000 pushes one atom below double precision
        spiky = TargetDensity(
            lambda x: 0.0 if x[0] < 0.5 else 2000.0,
            dim=1,
            support=(("interval", 0.0, 1.0),),
        )
        dp = discretize(spiky, UNIT_UNIFORM, midpoint_grid_1d(2))
        assert dp.masses[1] == 0.0
        assert acceptance_rate(dp) == 0.5


class TestMoments:
    def test_uniform_mean_is_half(self):
        for m in (3, 10, 101):
            dp = discretize(_uniform_target(1), _unit_uniform(1), midpoint_grid_1d(m))
            assert moment(dp, [1]) == pytest.approx(0.5, abs=1e-15)

    def test_beta_mixture_m30_table_value(self):
        dp = discretize(beta_mixture_target(), UNIT_UNIFORM, midpoint_grid_1d(30))
        se = (moment(dp, [1]) - 4.0 / 9.0) ** 2
        assert se == pytest.approx(3.2417e-7, rel=1e-2)

    def test_2d_product_uniform_cross_moment(self):
        dp = discretize(_uniform_target(2), _unit_uniform(2), sobol_points(4096, 2, skip=1))
        assert moment(dp, [1, 1]) == pytest.approx(0.25, abs=2e-3)

    def test_moment_consistency_shrinks_with_m(self):
        # Beta(2,3): E X = 0.4, E X^2 = 0.2
        exact = {1: 0.4, 2: 0.2}
        for k, truth in exact.items():
            errs = []
            for m in (10, 100, 1000):
                dp = discretize(beta23_target(), UNIT_UNIFORM, midpoint_grid_1d(m))
                errs.append(abs(moment(dp, [k]) - truth))
            assert errs[0] > errs[1] > errs[2]

    def test_covariance_two_pass_matches_direct(self):
        dp = discretize(beta_mixture_target(), UNIT_UNIFORM, midpoint_grid_1d(200))
        direct = moment(dp, [2]) - moment(dp, [1]) ** 2
        assert dp.covariance()[0, 0] == pytest.approx(direct, rel=1e-10)


class TestQuantilesAndCdf:
    def test_uniform_grid_quantile(self):
        dp = discretize(_uniform_target(1), _unit_uniform(1), midpoint_grid_1d(10))
        assert marginal_quantile(dp, 0, 0.2) == pytest.approx(0.15)

    def test_single_atom_returns_it_for_every_alpha(self):
        dp = discretize(_uniform_target(1), _unit_uniform(1), midpoint_grid_1d(1))
        for alpha in (0.01, 0.5, 0.99):
            assert marginal_quantile(dp, 0, alpha) == 0.5

    def test_cdf_at_extremes_and_middle(self):
        dp = discretize(_uniform_target(1), _unit_uniform(1), midpoint_grid_1d(10))
        assert cdf_at(dp, [-1.0]) == 0.0
        assert cdf_at(dp, [2.0]) == pytest.approx(1.0)
        assert cdf_at(dp, [0.5]) == pytest.approx(0.5)

    def test_quantile_stable_tie_break(self):
        target = _uniform_target(2)
        pts = sobol_points(64, 2, skip=1)
        dp = discretize(target, _unit_uniform(2), pts)
        q = marginal_quantile(dp, 1, 0.5)
        assert 0.0 <= q < 1.0


class TestConvergenceRate:
    def test_kd_halves_when_m_doubles(self):
        oracle = CdfOracle(cdf=beta23_cdf, dim=1)
        kd = {}
        for m in (32, 64, 128, 256, 512):
            dp = discretize(beta23_target(), UNIT_UNIFORM, midpoint_grid_1d(m))
            kd[m] = kolmogorov_discrete(dp, oracle)
        for m in (32, 64, 128, 256):
            ratio = kd[m] / kd[2 * m]
            assert 1.6 <= ratio <= 2.4, (m, ratio)


class TestCsvExport:
    def test_header_and_roundtrip(self, tmp_path):
        dp = discretize(beta_mixture_target(), UNIT_UNIFORM, midpoint_grid_1d(10))
        path = tmp_path / "posterior.csv"
        dp.to_csv(path)
        text = path.read_text().splitlines()
        assert text[0].startswith("# M=10 R=1")
        assert text[1] == "y_1,mass,log_weight"
        body = np.loadtxt(path, delimiter=",", skiprows=2)
        np.testing.assert_array_equal(body[:, 0], dp.support[:, 0])
        np.testing.assert_array_equal(body[:, 1], dp.masses)
