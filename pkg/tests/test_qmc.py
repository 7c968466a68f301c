import numpy as np
import pytest
from scipy.stats import qmc as scipy_qmc

from qda import CapacityError, from_array, halton_points, midpoint_grid_1d, sobol_points


class TestSobol:
    def test_first_nonzero_point_1d(self):
        assert sobol_points(1, 1, skip=1).points.ravel().tolist() == [0.5]

    def test_first_four_after_zero_1d(self):
        got = sobol_points(4, 1, skip=1).points.ravel().tolist()
        assert got == [0.5, 0.75, 0.25, 0.375]

    def test_sequence_starts_at_origin(self):
        assert sobol_points(2, 2, skip=0).points[0].tolist() == [0.0, 0.0]

    def test_skip_one_drops_the_zero_point(self):
        pts = sobol_points(100, 3, skip=1).points
        assert not np.any(np.all(pts == 0.0, axis=1))

    @pytest.mark.parametrize("d", [1, 2, 3, 7, 20, 51, 100])
    def test_matches_reference_generator(self, d):
        # independent oracle: the scipy Sobol engine on the same Joe-Kuo set
        ref = scipy_qmc.Sobol(d=d, scramble=False).random(128)
        got = sobol_points(128, d, skip=0).points
        np.testing.assert_array_equal(got, ref)

    def test_skip_slices_the_same_sequence(self):
        whole = sobol_points(64, 4, skip=0).points
        part = sobol_points(16, 4, skip=37).points
        np.testing.assert_array_equal(part, whole[37:53])

    def test_deterministic_bit_identical(self):
        a = sobol_points(257, 9, skip=5).points
        b = sobol_points(257, 9, skip=5).points
        assert np.array_equal(a, b)

    def test_dimension_capacity_error(self):
        with pytest.raises(CapacityError):
            sobol_points(4, 101)

    def test_sequence_length_capacity_error(self):
        with pytest.raises(CapacityError):
            sobol_points(2**30, 1, skip=1)

    @pytest.mark.parametrize("m", [16, 64, 256])
    def test_star_discrepancy_proxy_1d(self, m):
        x = np.sort(sobol_points(m, 1, skip=1).points.ravel())
        i = np.arange(1, m + 1)
        dstar = max(np.max(np.abs(i / m - x)), np.max(np.abs((i - 1) / m - x)))
        assert dstar <= 2.0 * np.log2(m) / m


class TestHalton:
    def test_base2_by_hand(self):
        got = halton_points(3, 1).points.ravel().tolist()
        assert got == [0.5, 0.25, 0.75]

    def test_bases_2_and_3_by_hand(self):
        got = halton_points(2, 2).points
        np.testing.assert_allclose(got, [[1 / 2, 1 / 3], [1 / 4, 2 / 3]], atol=1e-15)

    def test_single_point(self):
        assert halton_points(1, 1).points.ravel().tolist() == [0.5]

    def test_dimension_cap(self):
        with pytest.raises(CapacityError):
            halton_points(3, 51)

    def test_deterministic(self):
        assert np.array_equal(halton_points(50, 5).points, halton_points(50, 5).points)


class TestMidpointGrid:
    def test_single_point(self):
        assert midpoint_grid_1d(1).points.ravel().tolist() == [0.5]

    def test_two_points(self):
        assert midpoint_grid_1d(2).points.ravel().tolist() == [0.25, 0.75]

    def test_ten_points(self):
        got = midpoint_grid_1d(10).points.ravel()
        expected = [0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95]
        np.testing.assert_array_equal(got, expected)

    @pytest.mark.parametrize("m", [1, 7, 100, 1234])
    def test_exact_pattern_and_mean(self, m):
        pts = midpoint_grid_1d(m).points.ravel()
        i = np.arange(1, m + 1)
        np.testing.assert_array_equal(pts, (2 * i - 1) / (2 * m))
        assert np.all(np.diff(pts) > 0)
        # integrates linear functions exactly
        assert pts.mean() == pytest.approx(0.5, abs=1e-15)


class TestSupportPointSet:
    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            from_array([[0.2], [1.0]])

    def test_csv_roundtrip_full_precision(self, tmp_path):
        sps = sobol_points(17, 3, skip=1)
        path = tmp_path / "pts.csv"
        sps.to_csv(path)
        back = np.loadtxt(path, delimiter=",")
        np.testing.assert_array_equal(back, sps.points)
