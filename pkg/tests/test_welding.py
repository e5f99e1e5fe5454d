import math

import numpy as np
import pytest

from loewnerlab.analysis import oscillation, self_similarity_residual
from loewnerlab.fractal_curves import half_sierpinski, hilbert, koch
from loewnerlab.loewner_core import DrivingFunction, solve_trace, transform_driving
from loewnerlab.message import DomainError, ExtractionError
from loewnerlab.welding import (
    LEFT,
    RIGHT,
    extract_chain,
    extract_driving,
    extract_driving_staged,
    refine_polyline,
    resample_uniform,
    round_trip_residual,
    sided_slit_map,
    total_capacity,
)


def sine_trace(steps=200):
    driver = DrivingFunction.from_callable(lambda t: math.sin(3 * t), 1.0, steps)
    return driver, solve_trace(driver)


class TestRefinePolyline:
    def test_keeps_vertices_and_bounds_edges(self):
        curve = np.array([0, 1j, 1 + 1j])
        refined = refine_polyline(curve, 0.3)
        assert len(refined) == 9
        assert np.max(np.abs(np.diff(refined))) <= 0.3
        for z in curve:
            assert np.any(refined == z)

    def test_coarse_delta_is_identity(self):
        curve = np.array([0, 1j])
        assert np.array_equal(refine_polyline(curve, 5.0), curve)

    def test_rejects_bad_delta(self):
        with pytest.raises(DomainError):
            refine_polyline([0, 1j], 0.0)


class TestSidedSlitMap:
    def test_slit_points_go_to_their_side(self):
        points = np.array([0.5j, 0.5j, 3.0 + 0j])
        sides = np.array([RIGHT, LEFT, 0], dtype=np.int8)
        images, new_sides = sided_slit_map(points, sides, 0.0, 1.0)
        assert images[0].real == pytest.approx(math.sqrt(0.75))
        assert images[1].real == pytest.approx(-math.sqrt(0.75))
        assert abs(images[2] - math.sqrt(10)) < 1e-12
        assert list(new_sides) == [RIGHT, LEFT, 0]

    def test_untagged_slit_point_defaults_right(self):
        images, sides = sided_slit_map(np.array([0.5j]), np.zeros(1, dtype=np.int8), 0.0, 1.0)
        assert sides[0] == RIGHT
        assert images[0].real > 0


class TestExtractDriving:
    def test_vertical_segment(self):
        driver = extract_driving([0, 2j], delta=0.01)
        assert driver.T == pytest.approx(1.0, abs=1e-9)
        assert np.max(np.abs(driver.values)) < 1e-9

    def test_translated_segment(self):
        driver = extract_driving([1.5, 1.5 + 2j], delta=0.05)
        assert driver.values[0] == 1.5
        assert np.allclose(driver.values, 1.5, atol=1e-9)

    def test_recovers_trace_samples(self):
        driver, trace = sine_trace()
        estimate = extract_driving(trace.vertices)
        assert len(estimate) == len(driver)
        assert np.allclose(estimate.times, trace.times, atol=1e-9)
        assert np.allclose(estimate.values, driver(trace.times), atol=1e-8)

    def test_capacity_matches_trace(self):
        _, trace = sine_trace()
        assert total_capacity(trace.vertices) == pytest.approx(1.0, abs=1e-9)
        assert extract_chain(trace.vertices).total_capacity == pytest.approx(1.0, abs=1e-9)

    def test_consecutive_duplicates_are_ignored(self):
        once = extract_driving([0, 1j, 1 + 1j])
        twice = extract_driving([0, 1j, 1j, 1 + 1j, 1 + 1j])
        assert once.same_samples(twice)

    def test_curve_returning_to_real_axis(self):
        with pytest.raises(ExtractionError) as info:
            extract_driving([0, 1j, 1 + 1j, 1])
        assert info.value.arc_index is not None

    def test_curve_must_start_on_real_axis(self):
        with pytest.raises(DomainError):
            extract_driving([1j, 2j])
        with pytest.raises(DomainError):
            extract_driving([0, -1j])

    @pytest.mark.parametrize("r", [0.5, 2.0, 3.0])
    def test_scaling_covariance(self, r):
        _, trace = sine_trace()
        base = extract_driving(trace.vertices)
        scaled = extract_driving(r * trace.vertices)
        expected = transform_driving(base, r)
        assert len(scaled) == len(expected)
        assert np.max(np.abs(scaled.values - expected.values)) < 1e-9 * r
        assert np.max(np.abs(scaled.times - expected.times)) < 1e-9 * r * r

    def test_upright_koch_is_extracted(self):
        driver = extract_driving(koch(3, upright=True))
        assert driver.values[0] == 0.0
        assert np.all(np.diff(driver.times) > 0)


class TestStagedExtraction:
    def test_matches_one_shot(self):
        _, trace = sine_trace()
        one_shot = extract_driving(trace.vertices)
        staged = extract_driving_staged(trace.vertices, len(trace) // 2)
        assert len(one_shot) == len(staged)
        assert np.max(np.abs(one_shot.values - staged.values)) < 1e-9

    def test_split_range(self):
        with pytest.raises(DomainError):
            extract_driving_staged([0, 1j, 2j], 0)


class TestRoundTrip:
    def test_resample_uniform(self):
        driver = DrivingFunction([0.0, 0.3, 1.0], [0.0, 0.3, 1.0])
        uniform = resample_uniform(driver, 10)
        assert np.allclose(np.diff(uniform.times), 0.1)
        assert np.allclose(uniform.values, uniform.times)

    def test_constant_drivers(self):
        assert round_trip_residual(DrivingFunction.constant(0.0, 1.0), steps=200) < 1e-9
        assert round_trip_residual(DrivingFunction.constant(1.0, 1.0), steps=200) < 1e-9

    @pytest.mark.slow
    def test_refinement_keeps_residual_small(self):
        driver = DrivingFunction.from_callable(lambda t: math.sin(10 * t), 1.0, 10_000)
        coarse = round_trip_residual(driver, delta=1e-3)
        fine = round_trip_residual(driver, delta=5e-4)
        assert coarse < 0.05
        assert fine <= 1.5 * coarse + 1e-12


class TestFractalDrivers:
    # levels and bars measured on the current extraction; the Hilbert stem keeps
    # the residual far above what Koch reaches
    @pytest.mark.slow
    @pytest.mark.parametrize(
        "curve, factors, bar",
        [
            (lambda: hilbert(5), (4.0, 16.0), 0.6),
            (lambda: half_sierpinski(7), (2.0, 4.0), 0.2),
        ],
    )
    def test_self_similarity_residual(self, curve, factors, bar):
        driver = extract_driving(curve())
        residual = self_similarity_residual(driver, *factors)
        assert residual <= bar * oscillation(driver)
