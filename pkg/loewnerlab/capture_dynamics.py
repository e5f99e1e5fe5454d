"""
Capture of real points by a driving function normalized to capture at t = 1.

With s = -ln(1 - t), the points x_s = e^{s/2} g_t(x) follow
dx/ds = -(x^2 - sigma x + 4) / (2 (sigma - x)), sigma(s) = e^{s/2} lambda(1 - e^{-s}).
For sigma >= 4 the numerator has roots A >= B (A attracting, B repelling).
"""

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple, Union

import numpy as np
from scipy import integrate

from loewnerlab.instance import get_config
from loewnerlab.logs import log_debug, log_warn
from loewnerlab.loewner_core import (
    DrivingFunction,
    RefinementPolicy,
    evolve_point,
    hull_real_interval,
    solve_trace,
)
from loewnerlab.message import (
    DomainError,
    LoewnerError,
    NonFiniteError,
    PreconditionError,
    StepUnderflowError,
)
from loewnerlab.types import Alive, Captured

SigmaLike = Union[float, Callable[[float], float]]


@dataclass(frozen=True)
class FixedPoints:
    A: float
    B: float


@dataclass(frozen=True)
class FlowState:
    s: float
    x: float
    sigma: float

    @property
    def t(self) -> float:
        return -math.expm1(-self.s)


@dataclass(frozen=True)
class FlowPath:
    """Sampled x_s. `segments` are maximal (s_start, s_end, direction) runs of the sign of dx/ds."""

    s: np.ndarray
    x: np.ndarray
    sigma: np.ndarray
    hit: bool
    hit_s: Optional[float]
    segments: List[Tuple[float, float, int]]

    def states(self) -> List[FlowState]:
        return [FlowState(float(a), float(b), float(c)) for a, b, c in zip(self.s, self.x, self.sigma)]


@dataclass(frozen=True)
class CaptureRecord:
    x: float
    capture_time: float
    side: int
    flow_trace: Optional[FlowPath] = None


@dataclass
class CaptureScan:
    """Outcome of a scan: captured points, points alive at the end, and per-point errors.

    `hull` is the real interval swallowed by the trace, when asked for.
    """

    captured: List[CaptureRecord] = field(default_factory=list)
    alive: List[Tuple[float, float]] = field(default_factory=list)
    errors: List[Tuple[float, str]] = field(default_factory=list)
    hull: Optional[Tuple[float, float]] = None


@dataclass(frozen=True)
class LemmaConstants:
    epsilon: float
    L: float
    I: Tuple[float, float]
    M: Optional[float] = None
    Delta: Optional[float] = None
    drift_min: Optional[float] = None
    S0: Optional[float] = None


@dataclass(frozen=True)
class LemmaIntervalReport:
    S0_observed: Optional[float]
    containment: bool
    interval: Tuple[float, float]
    path: FlowPath


def normalize_at_capture(driver: DrivingFunction, T: float) -> DrivingFunction:
    """u -> (lambda(T u) - lambda(T)) / sqrt(T) on [0, 1]; the Lip(1/2) norm is unchanged."""
    if not T > 0:
        raise DomainError(f"capture time must be positive, got {T}")
    if T > driver.T * (1 + 1e-12):
        raise DomainError(f"capture time {T} beyond the driver horizon {driver.T}")
    restricted = driver.restrict(min(T, driver.T))
    end = restricted.values[-1]
    root = math.sqrt(T)
    times = restricted.times / restricted.T
    times[-1] = 1.0
    return DrivingFunction(times, (restricted.values - end) / root, driver.interpolation)


def sigma_of(driver: Union[DrivingFunction, Callable[[float], float]], s: float) -> float:
    if s < 0:
        raise DomainError(f"s must be >= 0, got {s}")
    return math.exp(s / 2) * float(driver(-math.expm1(-s)))


def fixed_points(sigma: float) -> FixedPoints:
    if sigma < 4:
        return FixedPoints(2.0, 2.0)
    root = math.sqrt(sigma * sigma - 16)
    return FixedPoints((sigma + root) / 2, (sigma - root) / 2)


def flow_rate(x: float, sigma: float) -> float:
    return -(x * x - sigma * x + 4) / (2 * (sigma - x))


def _as_sigma(sigma: SigmaLike) -> Callable[[float], float]:
    if callable(sigma):
        return sigma
    value = float(sigma)
    return lambda s: value


def _segments(s: np.ndarray, rates: np.ndarray, scale: float) -> List[Tuple[float, float, int]]:
    signs = np.where(np.abs(rates) <= 1e-12 * scale, 0, np.sign(rates)).astype(int)
    segments = []
    start = 0
    for k in range(1, len(signs) + 1):
        if k == len(signs) or signs[k] != signs[start]:
            segments.append((float(s[start]), float(s[k - 1]), int(signs[start])))
            start = k
    return segments


def flow_x(
    sigma: SigmaLike,
    x0: float,
    s_max: float,
    samples: int = 400,
    tol: float = 1e-10,
) -> FlowPath:
    """
    Integrates the time-changed flow from x0 up to s_max, sampled on a uniform s grid.
    Stops with hit=True when |x_s - sigma(s)| falls below capture_delta.
    """
    sigma_fn = _as_sigma(sigma)
    if not s_max > 0:
        raise DomainError(f"s_max must be positive, got {s_max}")
    if x0 == sigma_fn(0.0):
        raise DomainError(f"x0={x0} coincides with sigma(0)")

    threshold = get_config().capture_delta

    def rhs(s, y):
        gap = sigma_fn(s) - y[0]
        if gap == 0:
            return [math.inf]
        return [flow_rate(y[0], sigma_fn(s))]

    def hit(s, y):
        return abs(y[0] - sigma_fn(s)) - threshold

    hit.terminal = True
    hit.direction = -1

    grid = np.linspace(0.0, s_max, samples + 1)
    sol = integrate.solve_ivp(
        rhs, (0.0, s_max), [float(x0)], method="DOP853", rtol=tol, atol=tol * 1e-2,
        t_eval=grid, events=hit, max_step=s_max / 64,
    )
    if sol.status == -1:
        if not np.all(np.isfinite(sol.y)):
            raise NonFiniteError(f"flow from x0={x0} produced non-finite values")
        raise StepUnderflowError(f"flow from x0={x0} stalled: {sol.message}")

    s = sol.t
    x = sol.y[0]
    sig = np.array([sigma_fn(v) for v in s])
    hit_s = float(sol.t_events[0][0]) if sol.status == 1 and len(sol.t_events[0]) else None
    rates = np.array([flow_rate(a, b) if a != b else 0.0 for a, b in zip(x, sig)])
    scale = max(1.0, float(np.max(np.abs(x))) if len(x) else 1.0)
    return FlowPath(
        s=s, x=x, sigma=sig, hit=hit_s is not None, hit_s=hit_s,
        segments=_segments(s, rates, scale),
    )


def lemma_interval_constants(epsilon: float) -> LemmaConstants:
    """L = 2 + eps - sqrt(eps (eps + 4)) and I = [L, L + 5 sqrt(eps)]."""
    if not 0 < epsilon < 0.5:
        raise DomainError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    L = 2 + epsilon - math.sqrt(epsilon * (epsilon + 4))
    return LemmaConstants(epsilon=epsilon, L=L, I=(L, L + 5 * math.sqrt(epsilon)))


def lemma_tail_delta(epsilon: float, M: float) -> float:
    if not 0 < epsilon < 0.5:
        raise DomainError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    if not 0 < M < 4:
        raise DomainError(f"M must lie in (0, 4), got {M}")
    return 10 * math.sqrt(epsilon) / (4 - M)


def drift_minimum(M: float) -> Tuple[float, float]:
    """Minimum of -dx/ds over x < M at sigma = M and where it is attained: ((4 - M) / 2, M - 2)."""
    if not 0 < M < 4:
        raise DomainError(f"M must lie in (0, 4), got {M}")
    return (4 - M) / 2, M - 2


def lemma_constants(epsilon: float, M: float) -> LemmaConstants:
    base = lemma_interval_constants(epsilon)
    return LemmaConstants(
        epsilon=epsilon, L=base.L, I=base.I, M=M,
        Delta=lemma_tail_delta(epsilon, M), drift_min=drift_minimum(M)[0],
    )


def verify_lemma_interval(
    driver: DrivingFunction, x: float, epsilon: float, s_max: float = 20.0
) -> LemmaIntervalReport:
    """
    Flows a point captured at t = 1 and reports its first entry time into I and
    whether it stays in I up to s_max.
    """
    constants = lemma_interval_constants(epsilon)
    verdict = evolve_point(driver, complex(x, 0.0), 0.0, 1.0)
    if not isinstance(verdict, Captured):
        raise PreconditionError(f"x={x} is not captured by t=1")

    path = flow_x(lambda s: sigma_of(driver, s), x, s_max)
    lo, hi = constants.I
    inside = (path.x >= lo) & (path.x <= hi)
    if not np.any(inside):
        return LemmaIntervalReport(None, False, constants.I, path)
    first = int(np.argmax(inside))
    report = LemmaIntervalReport(
        S0_observed=float(path.s[first]),
        containment=bool(np.all(inside[first:])),
        interval=constants.I,
        path=path,
    )
    log_debug("lemma interval", {"x": x, "S0": report.S0_observed, "contained": report.containment})
    return report


def _phase_terms(M: float, epsilon: float) -> Tuple[float, float]:
    if not 0 < M < 4:
        raise DomainError(f"M must lie in (0, 4), got {M}")
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    return 4 + 2 * epsilon, 10 * math.sqrt(epsilon) / (4 - M)


def phase_inequality_margin(M: float, epsilon: float) -> float:
    """
    Coefficient of sqrt(e^{-s} T2) in the worst case of
    (4+2e) sqrt(T2 - t1) - M sqrt(T2 - t2) + (4+2e) sqrt(|t2 - T1|) - M sqrt(T1 - t1);
    negative values rule out a trace filling a neighbourhood.
    """
    c, delta = _phase_terms(M, epsilon)
    q = math.exp(-delta)
    return (
        c * math.sqrt(2 * q + (1 - q) / 2)
        - M * math.exp(-delta / 2)
        + c * math.sqrt((1 - q) / 2)
        - M * math.exp(-delta / 2)
    )


def unfactored_phase_lhs(M: float, epsilon: float, s: float, T2: float) -> float:
    """The same left-hand side at concrete s and T2, with the extremal gap bounds plugged in."""
    c, delta = _phase_terms(M, epsilon)
    if not T2 > 0:
        raise DomainError(f"T2 must be positive, got {T2}")
    late = math.exp(-(s + delta)) * T2
    spread = 0.5 * (math.exp(-s) - math.exp(-(s + delta))) * T2
    return (
        c * math.sqrt(2 * late + spread)
        - M * math.sqrt(late)
        + c * math.sqrt(spread)
        - M * math.sqrt(late)
    )


def capture_scan_report(
    driver: DrivingFunction,
    x_lo: float,
    x_hi: float,
    n: int,
    t1: Optional[float] = None,
    with_flow: bool = False,
    with_hull: bool = False,
) -> CaptureScan:
    """
    Evolves n equally spaced real points. Points that fail to integrate are recorded
    with their error and the scan continues. With `with_hull` the trace of the whole
    driver is solved, closed at its horizon, and its swallowed interval is attached.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if x_lo > x_hi:
        raise DomainError(f"empty scan interval [{x_lo}, {x_hi}]")
    start = driver(0.0)
    if x_lo <= start <= x_hi:
        raise DomainError(f"scan interval [{x_lo}, {x_hi}] contains lambda(0)={start}")

    scan = CaptureScan()
    if with_hull:
        trace = solve_trace(driver, policy=RefinementPolicy.landing_at(driver.T))
        scan.hull = hull_real_interval(trace)
    for x in np.linspace(x_lo, x_hi, n):
        x = float(x)
        try:
            verdict = evolve_point(driver, complex(x, 0.0), 0.0, t1)
        except LoewnerError as e:
            log_warn("capture scan point failed", {"x": x, "error": type(e).__name__})
            scan.errors.append((x, str(e)))
            continue
        match verdict:
            case Captured(capture_time=T_x):
                path = None
                if with_flow and driver.T >= 1.0:
                    path = flow_x(lambda s: sigma_of(driver, s), x, -math.log1p(-min(T_x, 1 - 1e-12)))
                side = 1 if x > start else -1
                scan.captured.append(CaptureRecord(x, T_x, side, path))
            case Alive(point=g):
                scan.alive.append((x, g.real))
    log_debug(
        "capture scan",
        {"n": n, "captured": len(scan.captured), "alive": len(scan.alive), "errors": len(scan.errors)},
    )
    return scan


def capture_scan(
    driver: DrivingFunction, x_lo: float, x_hi: float, n: int, t1: Optional[float] = None
) -> List[CaptureRecord]:
    """Captured points of an equally spaced scan, sorted by x."""
    return capture_scan_report(driver, x_lo, x_hi, n, t1).captured


def to_flow_coordinates(g: float, t: float) -> Tuple[float, float]:
    """(s, x_s) for a real value g = g_t(x) at time t < 1."""
    if not 0 <= t < 1:
        raise DomainError(f"t must lie in [0, 1), got {t}")
    s = -math.log1p(-t)
    return s, math.exp(s / 2) * g
