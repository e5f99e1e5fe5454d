import cmath
import math

import numpy as np
import pytest

from loewnerlab.config import LabUserConfig
from loewnerlab.instance import init_lab
from loewnerlab.loewner_core import (
    DrivingFunction,
    Interpolation,
    RefinementPolicy,
    SlitMapChain,
    SlitSampling,
    Trace,
    backward_flow,
    capacity_grid,
    concat_driving,
    driving_speed,
    evolve_point,
    hull_real_interval,
    inverse_vertical_slit_map,
    ray_angle_of_sqrt,
    self_similar_endpoint,
    solve_trace,
    transform_driving,
    vertical_slit_map,
)
from loewnerlab.message import BranchError, DomainError, JunctionError, RefinementError
from loewnerlab.types import Alive, Captured


def sine_driver(steps=400):
    return DrivingFunction.from_callable(lambda t: math.sin(3 * t), 1.0, steps)


def bubble(C, steps=2000):
    return DrivingFunction.from_callable(
        lambda t: C * math.sqrt(max(1.0 - t, 0.0)), 1.0, steps, singular_times=(1.0,)
    )


class TestCapacityGrid:
    def test_uniform(self):
        grid = capacity_grid(2.0, 10)
        assert np.allclose(grid, np.linspace(0.0, 2.0, 11))

    def test_refined_toward_singular_time(self):
        grid = capacity_grid(1.0, 100, singular_times=(1.0,))
        assert grid[0] == 0.0 and grid[-1] == 1.0
        assert np.all(np.diff(grid) > 0)
        assert 1.0 - grid[-2] < 1e-11
        # far from the singular time the grid stays uniform
        assert np.isclose(grid[1], 0.01)

    def test_interior_singular_time_is_a_node(self):
        grid = capacity_grid(1.0, 10, singular_times=(0.37,))
        assert np.any(grid == 0.37)

    def test_graded_cells_shrink_with_distance(self):
        ratio = 0.05
        grid = capacity_grid(1.0, 100, singular_times=(1.0,), ratio=ratio, floor=1e-9)
        band = grid[:-1] >= 1.0 - 0.01 / ratio
        widths = np.diff(grid)[band][:-1]
        dist = 1.0 - grid[1:][band][:-1]
        assert len(widths) > 100
        assert np.all(widths <= ratio / (1 - ratio) * dist * (1 + 1e-9))
        assert 1e-9 <= 1.0 - grid[-2] < 1e-9 / (1 - ratio)

    def test_rejects_bad_floor(self):
        with pytest.raises(DomainError):
            capacity_grid(1.0, 10, singular_times=(1.0,), floor=0.0)

    def test_rejects_bad_arguments(self):
        with pytest.raises(DomainError):
            capacity_grid(0.0, 10)
        with pytest.raises(DomainError):
            capacity_grid(1.0, 0)
        with pytest.raises(DomainError):
            capacity_grid(1.0, 10, singular_times=(2.0,))


class TestDrivingFunction:
    def test_validation(self):
        with pytest.raises(DomainError):
            DrivingFunction([0.1, 1.0], [0.0, 0.0])
        with pytest.raises(DomainError):
            DrivingFunction([0.0, 0.5, 0.5], [0.0, 0.0, 0.0])
        with pytest.raises(DomainError):
            DrivingFunction([0.0, 1.0], [0.0, math.nan])
        with pytest.raises(DomainError):
            DrivingFunction([0.0], [0.0])

    def test_samples_are_read_only(self):
        driver = DrivingFunction.constant(1.0, 2.0)
        with pytest.raises(ValueError):
            driver.values[0] = 3.0

    def test_interpolation(self):
        linear = DrivingFunction([0.0, 1.0, 2.0], [0.0, 2.0, 0.0])
        assert linear(0.5) == pytest.approx(1.0)
        right = linear.with_interpolation(Interpolation.RIGHT)
        assert right(0.5) == 2.0
        assert right(1.5) == 0.0

    def test_restrict(self):
        driver = DrivingFunction([0.0, 1.0, 2.0], [0.0, 2.0, 0.0])
        head = driver.restrict(1.5)
        assert head.T == 1.5
        assert head.values[-1] == pytest.approx(1.0)
        with pytest.raises(DomainError):
            driver.restrict(3.0)

    def test_concat(self):
        first = DrivingFunction([0.0, 1.0], [0.0, 1.0])
        second = DrivingFunction([0.0, 0.5], [1.0, 3.0])
        joined = concat_driving(first, second)
        assert joined.T == 1.5
        assert joined(1.5) == 3.0
        with pytest.raises(JunctionError):
            concat_driving(first, DrivingFunction([0.0, 0.5], [2.0, 2.0]))


class TestVerticalSlitMap:
    def test_tip_goes_to_base_point(self):
        assert abs(vertical_slit_map(1j, 0.0, 1.0)) < 1e-15
        assert abs(vertical_slit_map(0.5 + 2j, 0.5, 2.0) - 0.5) < 1e-15

    def test_known_values(self):
        assert vertical_slit_map(0.0, 0.0, 2.0) == pytest.approx(2.0)
        assert vertical_slit_map(3.0, 0.0, 4.0) == pytest.approx(5.0)
        assert vertical_slit_map(-3.0, 0.0, 4.0) == pytest.approx(-5.0)
        assert vertical_slit_map(2j, 0.0, math.sqrt(3)) == pytest.approx(1j)

    def test_is_inverted(self):
        z = 1 + 2j
        w = vertical_slit_map(z, 0.3, 1.5)
        assert w.imag > 0
        assert abs(inverse_vertical_slit_map(w, 0.3, 1.5) - z) < 1e-12

    def test_inverse_lands_on_slit(self):
        assert inverse_vertical_slit_map(math.sqrt(3), 0.0, 2.0) == pytest.approx(1j)
        assert inverse_vertical_slit_map(0.0, 0.0, 2.0) == pytest.approx(2j)
        assert inverse_vertical_slit_map(0.5, 0.0, 1.0) == pytest.approx(1j * math.sqrt(0.75))

    def test_random_round_trip(self):
        rng = np.random.default_rng(7)
        checked = 0
        for _ in range(10_000):
            x, y = rng.uniform(-2.0, 2.0), rng.uniform(0.1, 2.0)
            z = complex(rng.uniform(-4.0, 4.0), rng.uniform(1e-3, 4.0))
            if abs(z.real - x) < 1e-2 and z.imag < y + 1e-2:
                continue
            w = vertical_slit_map(z, x, y)
            assert abs(inverse_vertical_slit_map(w, x, y) - z) <= 1e-8 * max(1.0, abs(z))
            checked += 1
        assert checked > 9_000

    def test_slit_points_have_no_image(self):
        with pytest.raises(BranchError):
            vertical_slit_map(0.5j, 0.0, 1.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            vertical_slit_map(1j, 0.0, 0.0)
        with pytest.raises(DomainError):
            vertical_slit_map(1 - 1j, 0.0, 1.0)


class TestSlitMapChain:
    def test_forward_inverse(self):
        chain = SlitMapChain.from_driver(sine_driver(50))
        z = np.array([0.5 + 1j, -1 + 3j, 3 + 0.5j])
        assert np.allclose(chain.inverse(chain.forward(z)), z, atol=1e-10)

    def test_total_capacity(self):
        chain = SlitMapChain.from_driver(sine_driver(50))
        assert chain.total_capacity == pytest.approx(1.0, abs=1e-14)
        assert len(chain.extend(chain)) == 100

    def test_sampling(self):
        driver = DrivingFunction([0.0, 1.0, 2.0], [0.0, 2.0, 0.0])
        right = SlitMapChain.from_driver(driver)
        average = SlitMapChain.from_driver(driver, sampling=SlitSampling.AVERAGE)
        assert list(right.xs) == [2.0, 0.0]
        assert list(average.xs) == [1.0, 1.0]
        assert list(average.dts) == [1.0, 1.0]

    def test_prefix(self):
        chain = SlitMapChain.from_driver(sine_driver(50))
        head = chain.prefix(20)
        assert len(head) == 20
        assert np.array_equal(head.xs, chain.xs[:20])
        z = np.array([0.5 + 1j])
        assert np.allclose(chain.prefix(50).forward(z), chain.forward(z))

    def test_rejects_empty_steps(self):
        with pytest.raises(DomainError):
            SlitMapChain([0.0], [0.0])


class TestSolveTrace:
    def test_vertical_slit(self):
        trace = solve_trace(DrivingFunction.constant(0.0, 1.0), steps=1000)
        assert len(trace) == 1001
        assert abs(trace.tip - 2j) < 1e-9
        assert np.allclose(trace.vertices.real, 0.0, atol=1e-12)
        assert hull_real_interval(trace) is None

    def test_vertices_in_closed_half_plane(self):
        trace = solve_trace(sine_driver())
        assert trace.vertices[0] == 0
        assert np.all(trace.vertices.imag >= 0)
        assert trace.max_height() <= 2 * math.sqrt(trace.T) * (1 + 1e-3)

    def test_equivariance(self):
        driver = sine_driver(200)
        base = solve_trace(driver).vertices
        shifted = solve_trace(transform_driving(driver, 1.0, 0.7)).vertices
        reflected = solve_trace(transform_driving(driver, 1.0, reflect=True)).vertices
        scaled = solve_trace(transform_driving(driver, 3.0)).vertices
        assert np.max(np.abs(shifted - (base + 0.7))) < 1e-8
        assert np.max(np.abs(reflected + np.conj(base))) < 1e-8
        assert np.max(np.abs(scaled - 3 * base)) < 1e-8

    def test_max_jump(self):
        driver = DrivingFunction.constant(0.0, 1.0)
        with pytest.raises(RefinementError):
            solve_trace(driver, steps=4, policy=RefinementPolicy(max_jump=0.1))

    def test_straight_ray_of_square_root_driver(self):
        k = math.sqrt(2)
        assert ray_angle_of_sqrt(k) == pytest.approx(math.pi / 3, abs=1e-10)
        driver = DrivingFunction.from_callable(lambda t: k * math.sqrt(t), 1.0, 4000)
        tip = solve_trace(driver).tip
        assert cmath.phase(tip) == pytest.approx(math.pi / 3, abs=3e-2)

    def test_ray_angle_of_zero_is_vertical(self):
        assert ray_angle_of_sqrt(0.0) == math.pi / 2
        assert ray_angle_of_sqrt(-math.sqrt(2)) == pytest.approx(2 * math.pi / 3)


class TestTraceLanding:
    @pytest.mark.parametrize(
        "c, expected",
        [(0.0, 2j), (4.0, -2.0), (5.0, -4.0), (-5.0, 4.0), (-4.0, 2.0)],
    )
    def test_self_similar_endpoint(self, c, expected):
        assert abs(self_similar_endpoint(c) - expected) < 1e-12

    @pytest.mark.parametrize("c", [-6.0, -3.0, -0.5, 1.0, 3.9, 4.5, 8.0])
    def test_endpoint_solves_the_fixed_point_equation(self, c):
        F = self_similar_endpoint(c)
        assert F.imag >= 0
        assert abs(F * F + c * F + 4) < 1e-9

    def test_endpoint_is_continuous_at_four(self):
        assert abs(self_similar_endpoint(4.0 - 1e-10) - self_similar_endpoint(4.0)) < 1e-4
        assert abs(self_similar_endpoint(4.0 + 1e-10) - self_similar_endpoint(4.0)) < 1e-4

    def test_landing_policy(self):
        policy = RefinementPolicy.landing_at(2.0)
        assert policy.singular_times == (2.0,)
        assert policy.sampling is SlitSampling.AVERAGE
        assert policy.close_singular

    def test_bubble_four_lands_at_two(self):
        driver = bubble(4.0)
        policy = RefinementPolicy.landing_at(1.0)
        on_grid = solve_trace(driver, policy=policy)
        regridded = solve_trace(driver, steps=2000, policy=policy)
        assert abs(on_grid.tip - 2.0) < 1e-2
        assert abs(regridded.tip - 2.0) < 1e-2

    def test_bubble_five_lands_at_one(self):
        trace = solve_trace(bubble(5.0), policy=RefinementPolicy.landing_at(1.0))
        assert abs(trace.tip - 1.0) < 1e-2
        hull = hull_real_interval(trace)
        assert hull is not None
        assert hull[0] == pytest.approx(1.0, abs=1e-2)
        assert hull[1] == 5.0

    def test_closure_can_be_switched_off(self):
        policy = RefinementPolicy(
            singular_times=(1.0,), sampling=SlitSampling.AVERAGE, close_singular=False
        )
        trace = solve_trace(bubble(5.0), policy=policy)
        closed = solve_trace(bubble(5.0), policy=RefinementPolicy.landing_at(1.0))
        assert np.array_equal(trace.vertices[:-1], closed.vertices[:-1])


class TestHullRealInterval:
    def test_landed_trace(self):
        trace = Trace([1.0, 1 + 1j, 3.0], [0.0, 0.5, 1.0])
        assert hull_real_interval(trace) == (1.0, 3.0)


class TestEvolvePoint:
    def test_alive_point(self):
        verdict = evolve_point(DrivingFunction.constant(0.0, 1.0), 1 + 1j, 0.0, 1.0)
        assert isinstance(verdict, Alive)
        assert abs(verdict.point - cmath.sqrt(4 + 2j)) < 1e-9

    def test_point_on_the_slit_is_captured(self):
        verdict = evolve_point(DrivingFunction.constant(0.0, 1.0), 1j, 0.0, 1.0)
        assert isinstance(verdict, Captured)
        assert verdict.capture_time == pytest.approx(0.25, abs=1e-6)

    def test_real_point_stays_real(self):
        verdict = evolve_point(DrivingFunction.constant(0.0, 1.0), 1.0)
        assert isinstance(verdict, Alive)
        assert verdict.point == pytest.approx(math.sqrt(5), abs=1e-9)

    def test_partial_interval(self):
        verdict = evolve_point(DrivingFunction.constant(0.0, 2.0), 1.0, 1.0, 2.0)
        assert verdict.point == pytest.approx(math.sqrt(5), abs=1e-9)

    def test_driving_speed_of_bubble(self):
        assert driving_speed(bubble(5.0), 1.0 - 1e-3, 1.0) == pytest.approx(5.0, rel=1e-6)
        assert driving_speed(DrivingFunction.constant(2.0, 1.0), 0.5, 1.0) == 0.0

    def test_fast_driver_lowers_the_threshold(self, monkeypatch):
        init_lab(LabUserConfig(capture_delta=0.5))
        driver = bubble(5.0)
        monkeypatch.setattr("loewnerlab.loewner_core.driving_speed", lambda *args: 0.0)
        early = evolve_point(driver, 4.5)
        monkeypatch.setattr("loewnerlab.loewner_core.driving_speed", lambda *args: 5.0)
        late = evolve_point(driver, 4.5)
        assert isinstance(early, Captured) and isinstance(late, Captured)
        assert early.gap == pytest.approx(0.5)
        assert late.gap == pytest.approx(0.2)
        assert early.capture_time < late.capture_time < 1.0

    @pytest.mark.slow
    def test_verdict_survives_halving_tol(self):
        driver = bubble(5.0)
        inside = [evolve_point(driver, 4.5, tol=tol) for tol in (1e-9, 5e-10)]
        outside = [evolve_point(driver, 0.5, tol=tol) for tol in (1e-9, 5e-10)]
        assert all(isinstance(v, Captured) for v in inside)
        assert abs(inside[0].capture_time - inside[1].capture_time) <= 1e-6
        assert all(isinstance(v, Alive) for v in outside)
        assert abs(outside[0].point - outside[1].point) <= 1e-6

    def test_domain(self):
        driver = DrivingFunction.constant(0.0, 1.0)
        with pytest.raises(DomainError):
            evolve_point(driver, 0.0)
        with pytest.raises(DomainError):
            evolve_point(driver, 1 - 1j)
        with pytest.raises(DomainError):
            evolve_point(driver, 1j, 0.5, 0.25)


class TestBackwardFlow:
    def test_matches_vertical_slit(self):
        w = 1 + 1j
        expected = inverse_vertical_slit_map(w, 0.0, 2.0)
        assert abs(backward_flow(DrivingFunction.constant(0.0, 1.0), w) - expected) < 1e-7

    def test_matches_slit_composition(self):
        driver = sine_driver(4000)
        w = 0.5 + 1j
        chained = complex(SlitMapChain.from_driver(driver).inverse([w])[0])
        assert abs(backward_flow(driver, w) - chained) < 1e-2

    def test_needs_interior_point(self):
        with pytest.raises(DomainError):
            backward_flow(DrivingFunction.constant(0.0, 1.0), 1.0)
