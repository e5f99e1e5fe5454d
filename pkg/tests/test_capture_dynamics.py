import math

import numpy as np
import pytest

from loewnerlab.analysis import lip_norm_estimate
from loewnerlab.capture_dynamics import (
    capture_scan,
    capture_scan_report,
    drift_minimum,
    fixed_points,
    flow_rate,
    flow_x,
    lemma_constants,
    lemma_interval_constants,
    lemma_tail_delta,
    normalize_at_capture,
    phase_inequality_margin,
    sigma_of,
    to_flow_coordinates,
    unfactored_phase_lhs,
    verify_lemma_interval,
)
from loewnerlab.loewner_core import DrivingFunction, evolve_point
from loewnerlab.message import DomainError, PreconditionError
from loewnerlab.types import Alive, Captured


def bubble(C, steps=2000):
    return DrivingFunction.from_callable(
        lambda t: C * math.sqrt(max(1 - t, 0.0)), 1.0, steps, singular_times=(1.0,)
    )


class TestFixedPoints:
    def test_above_four(self):
        fp = fixed_points(5.0)
        assert fp.A == pytest.approx(4.0)
        assert fp.B == pytest.approx(1.0)

    def test_at_and_below_four(self):
        assert fixed_points(4.0).A == fixed_points(4.0).B == 2.0
        assert fixed_points(3.0) == fixed_points(3.5)

    def test_fixed_points_are_stationary(self):
        fp = fixed_points(6.0)
        assert flow_rate(fp.A, 6.0) == pytest.approx(0.0, abs=1e-12)
        assert flow_rate(fp.B, 6.0) == pytest.approx(0.0, abs=1e-12)

    def test_sign_table(self):
        # between B and A the flow rises; below B and between A and sigma it falls
        assert flow_rate(2.0, 5.0) > 0
        assert flow_rate(0.5, 5.0) < 0
        assert flow_rate(4.5, 5.0) < 0
        assert flow_rate(5.5, 5.0) > 0


class TestFlow:
    def test_fixed_point_stays(self):
        path = flow_x(5.0, 4.0, 2.0, samples=20)
        assert np.allclose(path.x, 4.0, atol=1e-9)
        assert not path.hit

    def test_attracted_to_A(self):
        path = flow_x(5.0, 4.5, 10.0)
        assert 4.0 < path.x[-1] < 4.001
        assert all(direction == -1 for _, _, direction in path.segments)
        assert path.states()[0].t == 0.0

    def test_repelled_below_B(self):
        path = flow_x(5.0, 0.9, 1.0, samples=10)
        assert np.all(np.diff(path.x) < 0)

    def test_below_four_everything_below_sigma_falls(self):
        path = flow_x(3.9, 3.0, 3.0, samples=50)
        assert np.all(np.diff(path.x) < 0)
        assert not path.hit
        assert all(direction == -1 for _, _, direction in path.segments)

    def test_time_change_matches_point_evolution(self):
        driver = bubble(5.0)
        verdict = evolve_point(driver, 2.0, 0.0, 0.5)
        assert isinstance(verdict, Alive)
        s, x = to_flow_coordinates(verdict.point.real, 0.5)
        assert s == pytest.approx(math.log(2.0))
        path = flow_x(5.0, 2.0, s, samples=10)
        assert path.x[-1] == pytest.approx(x, abs=1e-6)

    def test_rejects_start_on_sigma(self):
        with pytest.raises(DomainError):
            flow_x(5.0, 5.0, 1.0)

    def test_flow_coordinates(self):
        assert to_flow_coordinates(3.0, 0.0) == (0.0, 3.0)
        s, x = to_flow_coordinates(1.0, 1 - math.exp(-2.0))
        assert s == pytest.approx(2.0)
        assert x == pytest.approx(math.e)


class TestNormalization:
    def test_sigma_of_bubble_is_constant(self):
        driver = bubble(5.0)
        for s in (0.5, 1.0, 3.0):
            assert sigma_of(driver, s) == pytest.approx(5.0, abs=1e-3)

    def test_normalize_at_capture(self):
        driver = DrivingFunction.from_callable(lambda t: t, 1.0, 100)
        normalized = normalize_at_capture(driver, 0.5)
        assert normalized.T == 1.0
        assert normalized.values[-1] == pytest.approx(0.0, abs=1e-12)
        assert normalized.values[0] == pytest.approx(-math.sqrt(0.5), abs=1e-12)

    def test_sigma_is_bounded_by_the_norm(self):
        driver = DrivingFunction.from_callable(lambda t: math.sin(5 * t) + 2 * t, 1.0, 400)
        normalized = normalize_at_capture(driver, 1.0)
        bound = lip_norm_estimate(normalized).estimate
        for t in normalized.times[:-1]:
            s = -math.log1p(-float(t))
            assert abs(sigma_of(normalized, s)) <= bound + 1e-7

    def test_normalize_rejects_late_capture(self):
        with pytest.raises(DomainError):
            normalize_at_capture(DrivingFunction.constant(0.0, 1.0), 2.0)


class TestLemmaConstants:
    def test_interval(self):
        c = lemma_interval_constants(0.25)
        assert c.L == pytest.approx(1.2192236, abs=1e-7)
        assert c.I[1] - c.I[0] == pytest.approx(2.5)

    def test_tail(self):
        c = lemma_constants(0.01, 3.0)
        assert c.Delta == pytest.approx(1.0)
        assert c.drift_min == pytest.approx(0.5)
        assert drift_minimum(3.0) == (0.5, 1.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            lemma_interval_constants(0.5)
        with pytest.raises(DomainError):
            lemma_constants(0.1, 4.0)


class TestPhaseMargin:
    def test_reference_value(self):
        assert phase_inequality_margin(3.5, 5e-5) == pytest.approx(-0.125002442, abs=1e-8)

    def test_limit_near_four(self):
        value = phase_inequality_margin(3.999999, 1e-28)
        assert value == pytest.approx(4 * math.sqrt(2) - 8, abs=2e-3)

    def test_unfactored_form_is_a_rescaling(self):
        F = phase_inequality_margin(3.5, 5e-5)
        for s in (0.5, 1.5, 10.5):
            lhs = unfactored_phase_lhs(3.5, 5e-5, s, 0.8)
            assert lhs / math.sqrt(math.exp(-s) * 0.8) == pytest.approx(F, rel=1e-9)

    def test_increasing_in_epsilon(self):
        for M in (3.0, 3.5):
            values = [phase_inequality_margin(M, e) for e in np.geomspace(1e-6, 1e-2, 20)]
            assert np.all(np.diff(values) > 0)

    def test_domain(self):
        with pytest.raises(DomainError):
            phase_inequality_margin(4.0, 1e-3)
        with pytest.raises(DomainError):
            phase_inequality_margin(3.0, 0.0)


class TestCapture:
    @pytest.mark.slow
    def test_point_between_A_and_sigma_is_captured(self):
        verdict = evolve_point(bubble(5.0), 4.5)
        assert isinstance(verdict, Captured)
        assert verdict.capture_time <= 1.0

    @pytest.mark.slow
    def test_point_below_B_survives(self):
        verdict = evolve_point(bubble(5.0), 0.5)
        assert isinstance(verdict, Alive)
        assert verdict.point.real < 0.5

    @pytest.mark.slow
    def test_scan(self):
        captured = capture_scan(bubble(5.0), 4.1, 4.9, 5)
        assert [r.x for r in captured] == pytest.approx(list(np.linspace(4.1, 4.9, 5)))
        assert all(r.side == -1 for r in captured)

    @pytest.mark.slow
    def test_scan_with_flow(self):
        report = capture_scan_report(bubble(5.0), 4.3, 4.7, 2, with_flow=True)
        assert len(report.captured) == 2
        for record in report.captured:
            path = record.flow_trace
            assert path is not None
            assert path.x[0] == pytest.approx(record.x)
            assert abs(path.x[-1] - 4.0) < 1e-2
        assert capture_scan_report(bubble(5.0), 4.3, 4.7, 2).captured[0].flow_trace is None

    @pytest.mark.slow
    def test_scan_with_hull(self):
        report = capture_scan_report(bubble(5.0), 0.2, 4.6, 5, with_hull=True)
        assert report.hull is not None
        lo, hi = report.hull
        assert lo == pytest.approx(1.0, abs=1e-2)
        assert hi == 5.0
        assert all(lo < r.x <= hi for r in report.captured)
        assert all(x < lo for x, _ in report.alive)
        assert capture_scan_report(bubble(5.0), 4.3, 4.7, 2).hull is None

    def test_scan_rejects_interval_around_start(self):
        with pytest.raises(DomainError):
            capture_scan_report(bubble(5.0), 4.0, 6.0, 3)

    def test_scan_of_translation_has_no_captures(self):
        report = capture_scan_report(DrivingFunction.constant(0.0, 1.0), 1.0, 2.0, 3)
        assert report.captured == []
        assert [x for x, _ in report.alive] == pytest.approx([1.0, 1.5, 2.0])
        assert report.alive[0][1] == pytest.approx(math.sqrt(5), abs=1e-8)


class TestLemmaInterval:
    def test_tail_delta(self):
        assert lemma_tail_delta(0.04, 2.0) == pytest.approx(1.0)
        with pytest.raises(DomainError):
            lemma_tail_delta(0.04, 4.5)

    @pytest.mark.slow
    def test_start_inside_interval(self):
        fp = fixed_points(4.2)
        report = verify_lemma_interval(bubble(4.2), (fp.A + fp.B) / 2, 0.1)
        assert report.S0_observed == 0.0
        assert report.containment

    @pytest.mark.slow
    def test_point_near_sigma_enters_and_stays(self):
        report = verify_lemma_interval(bubble(4.2), 4.1, 0.1)
        assert report.S0_observed is not None and report.S0_observed > 0
        assert report.containment
        assert report.interval[0] <= report.path.x[-1] <= report.interval[1]

    @pytest.mark.slow
    def test_uncaptured_point(self):
        with pytest.raises(PreconditionError):
            verify_lemma_interval(bubble(4.2), 0.5, 0.1)
