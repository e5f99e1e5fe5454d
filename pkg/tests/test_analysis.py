import math

import numpy as np
import pytest

from loewnerlab.analysis import (
    check_capacity_bounds,
    diameter,
    distance_to_polyline,
    find_self_intersection,
    hausdorff_distance,
    is_simple,
    lip_norm_estimate,
    oscillation,
    self_similarity_residual,
)
from loewnerlab.loewner_core import DrivingFunction, solve_trace
from loewnerlab.message import DomainError


def sqrt_driver(k, steps=200):
    return DrivingFunction.from_callable(lambda t: k * math.sqrt(t), 1.0, steps)


class TestLipNorm:
    def test_square_root_driver(self):
        report = lip_norm_estimate(sqrt_driver(2.0))
        assert report.estimate == pytest.approx(2.0, rel=1e-12)
        assert report.witness[0] == 0.0
        assert max(value for _, value in report.scale_profile) == report.estimate

    def test_dyadic_lags_keep_the_origin_pairs(self):
        report = lip_norm_estimate(sqrt_driver(2.0), pair_budget=100)
        assert report.estimate == pytest.approx(2.0, rel=1e-12)
        lags = [lag for lag, _ in report.scale_profile]
        assert lags == [1, 2, 4, 8, 16, 32, 64, 128]

    def test_constant_driver(self):
        assert lip_norm_estimate(DrivingFunction.constant(3.0, 1.0)).estimate == 0.0

    def test_subsampling_never_increases_the_estimate(self):
        driver = DrivingFunction.from_callable(lambda t: math.sin(7 * t), 1.0, 200)
        coarse = DrivingFunction(driver.times[::4], driver.values[::4])
        assert lip_norm_estimate(coarse).estimate <= lip_norm_estimate(driver).estimate


class TestSelfSimilarity:
    def test_linear_driver(self):
        driver = DrivingFunction.from_callable(lambda t: t, 1.0, 100)
        assert self_similarity_residual(driver, 2.0, 2.0) < 1e-12
        assert self_similarity_residual(driver, 1.0, 2.0) == pytest.approx(0.5)

    def test_time_factor_above_one(self):
        with pytest.raises(DomainError):
            self_similarity_residual(DrivingFunction.constant(0.0, 1.0), 1.0, 1.0)

    def test_oscillation(self):
        driver = DrivingFunction([0.0, 1.0, 2.0], [0.0, 3.0, -1.0])
        assert oscillation(driver) == 4.0


class TestGeometry:
    def test_diameter(self):
        assert diameter([0, 1, 1 + 1j, 1j]) == pytest.approx(math.sqrt(2))
        assert diameter([0, 1, 3]) == pytest.approx(3.0)
        assert diameter([2j]) == 0.0

    def test_distance_to_polyline(self):
        assert distance_to_polyline(1j, [0, 2]) == pytest.approx(1.0)
        assert distance_to_polyline(3 + 0j, [0, 2]) == pytest.approx(1.0)
        assert distance_to_polyline(1 + 0j, [0, 2]) == 0.0

    def test_hausdorff(self):
        assert hausdorff_distance([0, 1], [0, 1, 1 + 1j]) == pytest.approx(1.0)

    def test_self_intersection(self):
        assert find_self_intersection([0, 2, 1 + 1j, 1 - 1j]) == (0, 2)
        assert find_self_intersection([0, 1, 1 + 1j, 1j, 0.5 - 1j]) is not None
        assert is_simple([0, 1j, 1 + 1j, 1 + 2j])


class TestCapacityBounds:
    def test_vertical_slit_is_extremal(self):
        driver = DrivingFunction.constant(0.0, 1.0)
        report = check_capacity_bounds(driver, solve_trace(driver, steps=500))
        assert report.im_ratio == pytest.approx(1.0)
        assert report.drift_ratio == 0.0
        assert report.ok

    def test_smooth_driver(self):
        driver = DrivingFunction.from_callable(lambda t: math.sin(5 * t), 1.0, 300)
        report = check_capacity_bounds(driver, solve_trace(driver))
        assert report.im_ratio <= 1 + 1e-3
        assert report.drift_ratio <= 1 + 1e-3
        assert report.diameter > 0
