"""
Driving functions of Lip(1/2) norm at most 4 whose traces visit given points in order.

Every point is reached by a rescaled, translated (and possibly mirrored) prefix of the
base curve driven by 4 - 4 sqrt(1 - t), which runs from 0 to 2. Before each segment
the driver waits with constant value until the target's image has moved into the
angle window of the base curve and the waiting time is long enough for the norm
bound to survive the junction.

All slit maps here use averaged sampling, so the base curve lands on R at 2 and a
scaled copy of its polyline is exactly the polyline of the scaled driver.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from loewnerlab.analysis import distance_to_polyline, lip_norm_estimate
from loewnerlab.instance import get_config
from loewnerlab.logs import log_debug, log_info
from loewnerlab.loewner_core import (
    DrivingFunction,
    Interpolation,
    RefinementPolicy,
    SlitMapChain,
    SlitSampling,
    Trace,
    _slit_forward,
    capacity_grid,
    concat_driving,
    solve_trace,
)
from loewnerlab.message import DomainError, RefinementError, VisitationError
from loewnerlab.utils import as_complex_array

_MAX_DOUBLINGS = 200
NORM_TOLERANCE = 1e-2
# deeper cells lose their width to rounding once the curve is rescaled
BASE_FLOOR = 1e-9
SAMPLING = SlitSampling.AVERAGE


def folded_angle(u: complex) -> float:
    """Angle between u and the nearer half of the real axis, in [0, pi/2]."""
    return math.atan2(u.imag, abs(u.real))


def base_driving(resolution: int) -> DrivingFunction:
    grid = capacity_grid(1.0, resolution, singular_times=(1.0,), floor=BASE_FLOOR)
    return DrivingFunction(grid, 4 - 4 * np.sqrt(np.maximum(1 - grid, 0.0)), Interpolation.LINEAR)


@dataclass(frozen=True)
class Piece:
    """A stretch of driver and its trace vertices after the first, in the frame at its start."""

    driver: DrivingFunction
    vertices: np.ndarray


def constant_piece(x: float, sigma: float) -> Piece:
    return Piece(DrivingFunction([0.0, sigma], [x, x]), np.array([complex(x, 2 * math.sqrt(sigma))]))


@dataclass(frozen=True)
class BaseFamily:
    """
    The discretized base curve with its ray table. Vertex k sits at capacity time
    times[k]; ray(theta) reports where the ray from 0 at angle theta crosses it.
    The last vertex is the landing point, so every angle in the window has a crossing.
    """

    driver: DrivingFunction
    trace: Trace
    window: float
    angles: np.ndarray
    radii: np.ndarray
    r_min: float

    @property
    def times(self) -> np.ndarray:
        return self.trace.times

    def ray(self, theta: float) -> Tuple[float, int]:
        """(r_theta, k) where the ray crosses the edge ending at vertex k."""
        if not 0 < theta <= self.window * (1 + 1e-12):
            raise DomainError(f"angle {theta} outside the window (0, {self.window}]")
        vertices = self.trace.vertices
        args = self.vertex_angles
        count = int(np.searchsorted(-args, -theta, side="right"))
        n = len(args)
        if count >= n:
            # only reachable if the landing vertex sits a rounding error above R
            return float(abs(vertices[-1])), n
        v = vertices[count]
        d = vertices[count + 1] - v
        u = complex(math.cos(theta), math.sin(theta))
        r = _cross(v, d) / _cross(u, d)
        return float(r), count + 1

    def scaled_vertices(self, x: float, a: float, mirrored: bool, k: int) -> np.ndarray:
        """Vertices 1..k of the trace of x + a lambda(t / a^2), or of its mirror image."""
        head = self.trace.vertices[1 : k + 1]
        return x + a * (-np.conj(head) if mirrored else head)

    @property
    def vertex_angles(self) -> np.ndarray:
        return np.angle(self.trace.vertices[1:])


def _cross(a: complex, b: complex) -> float:
    return a.real * b.imag - a.imag * b.real


@lru_cache(maxsize=4)
def build_base_family(resolution: int = 4000, table_size: int = 512) -> BaseFamily:
    """
    Traces 4 - 4 sqrt(1 - t) at `resolution` steps refined toward t = 1 and tabulates
    r_theta over the angle window. The angles of the trace vertices seen from 0 must
    decrease along the curve, otherwise rays would meet it more than once.
    """
    window = get_config().window_max_angle
    driver = base_driving(resolution)
    trace = solve_trace(driver, policy=RefinementPolicy.landing_at(1.0))
    args = np.angle(trace.vertices[1:])
    if np.any(np.diff(args) > 1e-12):
        bad = int(np.argmax(np.diff(args))) + 1
        raise RefinementError(f"base curve turns back toward the vertical at vertex {bad}")

    family = BaseFamily(
        driver=driver, trace=trace, window=window,
        angles=np.zeros(0), radii=np.zeros(0), r_min=0.0,
    )
    angles = np.linspace(window / table_size, window, table_size)
    radii = np.array([family.ray(float(a))[0] for a in angles])
    r_min = float(np.min(radii))
    if not r_min > 0:
        raise RefinementError("ray table has a non-positive radius")
    log_debug("base family built", {"steps": len(trace) - 1, "tip": trace.tip, "r_min": r_min})
    return BaseFamily(driver, trace, window, angles, radii, r_min)


def segment_piece(x: float, z: complex, family: Optional[BaseFamily] = None) -> Piece:
    """
    The driver of segment_driver together with its trace vertices, read off the
    base family so that z lies on them up to rounding.
    """
    z = complex(z)
    if not z.imag > 0:
        raise DomainError(f"segment target must lie in H, got {z}")
    u = z - x
    if abs(u.real) <= 1e-12 * abs(u):
        return constant_piece(x, u.imag * u.imag / 4)

    family = family or build_base_family()
    theta = folded_angle(u)
    if theta > family.window * (1 + 1e-12):
        raise DomainError(
            f"target angle {theta:.4f} outside the window {family.window:.4f}; wait first"
        )
    r, k = family.ray(theta)
    a = abs(u) / r
    mirrored = u.real < 0
    sign = -1.0 if mirrored else 1.0
    times = a * a * family.times[: k + 1]
    values = x + sign * a * family.driver.values[: k + 1]
    driver = DrivingFunction(times, values, Interpolation.LINEAR)
    return Piece(driver, family.scaled_vertices(x, a, mirrored, k))


def segment_driver(
    x: float, z: complex, family: Optional[BaseFamily] = None
) -> Tuple[DrivingFunction, float]:
    """
    A driver starting at x whose trace runs from x to z. A target straight above x
    gets the constant driver for (Im z)^2 / 4; otherwise the base curve is scaled by
    a = |z - x| / r_theta (mirrored when Re z < x) and cut at the first grid time past
    the ray crossing, so z lies on the discretized trace.
    """
    piece = segment_piece(x, z, family)
    return piece.driver, piece.driver.T


def waiting_time(
    T_n: float,
    chain: SlitMapChain,
    z_next: complex,
    x_n: Optional[float] = None,
    family: Optional[BaseFamily] = None,
) -> float:
    """
    Smallest constant-driving time tau, times the safety factor, after which the image
    of z_next lies within the shrunken angle window and 4 T_n sigma(tau) <= tau^2,
    with sigma(tau) = (|w - x_n| / r_theta)^2 bounding the next segment's duration.
    x_n defaults to the position of the chain's last slit.
    """
    config = get_config()
    family = family or build_base_family()
    if x_n is None:
        x_n = float(chain.xs[-1]) if len(chain) else 0.0
    zeta = complex(chain.forward([z_next])[0]) if len(chain) else complex(z_next)
    if not zeta.imag > 0:
        raise DomainError(f"point {z_next} is already on or under the trace")

    def image(tau: float) -> complex:
        if tau <= 0:
            return zeta
        return complex(_slit_forward(zeta, x_n, 2 * math.sqrt(tau)))

    def angle(tau: float) -> float:
        return folded_angle(image(tau) - x_n)

    if T_n == 0 and angle(0.0) <= family.window:
        return 0.0

    target = family.window / config.safety_factor
    scale = abs(zeta - x_n) ** 2
    tau_angle = 0.0
    if angle(0.0) > target:
        hi = scale
        for _ in range(_MAX_DOUBLINGS):
            if angle(hi) <= target:
                break
            hi *= 2
        else:
            raise DomainError("angle window never reached while waiting")
        tau_angle = optimize.brentq(lambda t: angle(t) - target, 0.0, hi, xtol=1e-14 * hi)
        tau_angle = max(tau_angle, hi * 1e-14)
        if angle(tau_angle) > target:
            tau_angle *= 1 + 1e-9

    def slack(tau: float) -> float:
        w = image(tau)
        r, _ = family.ray(max(angle(tau), 1e-300))
        return tau * tau - 4 * T_n * (abs(w - x_n) / r) ** 2

    tau = tau_angle
    if T_n > 0 and slack(tau) < 0:
        lo, hi = tau, max(tau, scale, T_n)
        for _ in range(_MAX_DOUBLINGS):
            if slack(hi) >= 0:
                break
            lo, hi = hi, hi * 2
        else:
            raise DomainError("waiting inequality never satisfied")
        tau = optimize.brentq(slack, lo, hi, xtol=1e-14 * hi)
        if slack(tau) < 0:
            tau = hi
    return tau * config.safety_factor


@dataclass
class BuildState:
    """Driver and slit maps accumulated so far; `vertices` is the trace built alongside."""

    origin: float
    pieces: List[DrivingFunction] = field(default_factory=list)
    chain: SlitMapChain = field(default_factory=SlitMapChain.empty)
    vertices: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    T: float = 0.0
    visited: int = 0

    @property
    def tip_value(self) -> float:
        return float(self.pieces[-1].values[-1]) if self.pieces else self.origin

    def append(self, pieces: Sequence[Piece]) -> None:
        if len(self.vertices) == 0:
            self.vertices = np.array([complex(self.origin, 0.0)])
        for piece in pieces:
            mapped = self.chain.inverse(piece.vertices) if len(self.chain) else piece.vertices
            self.vertices = np.concatenate([self.vertices, mapped])
            self.chain = self.chain.extend(SlitMapChain.from_driver(piece.driver, sampling=SAMPLING))
            self.pieces.append(piece.driver)
        self.T = self.chain.total_capacity

    def driver(self) -> DrivingFunction:
        driver = self.pieces[0]
        for piece in self.pieces[1:]:
            driver = concat_driving(driver, piece)
        return driver

    def trace(self) -> Trace:
        return Trace(self.vertices, self.chain.driving_times())


@dataclass(frozen=True)
class DenseBuild:
    driver: DrivingFunction
    trace: Trace
    norm: float
    distances: np.ndarray
    skipped: List[int]


def build_dense(
    points, tol: float = 1e-2, origin: float = 0.0, family: Optional[BaseFamily] = None
) -> DenseBuild:
    """
    Builds the driver point by point. Points already within tol/2 of the trace are
    skipped; for the others the driver waits, then appends a segment ending at the
    point's current image. The trace is assembled stage by stage from the base
    family; the norm is estimated on the final concatenated driver.
    """
    targets = as_complex_array(points)
    if len(targets) == 0:
        raise DomainError("no points to visit")
    if np.any(targets.imag <= 0) or not np.all(np.isfinite(targets)):
        raise DomainError("points must be finite and lie in H")
    if len(np.unique(targets)) != len(targets):
        raise DomainError("points must be pairwise distinct")
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")

    family = family or build_base_family()
    state = BuildState(origin=origin)
    skipped: List[int] = []
    for i, z in enumerate(targets):
        if len(state.vertices) > 1 and distance_to_polyline(z, state.vertices) <= tol / 2:
            skipped.append(i)
            continue

        x = state.tip_value
        zeta = complex(state.chain.forward([z])[0]) if len(state.chain) else complex(z)
        if not zeta.imag > 0:
            raise VisitationError(f"point {z} was swallowed by the trace", point_index=i)

        stage: List[Piece] = []
        u = zeta - x
        if abs(u.real) > 1e-12 * abs(u):
            tau = waiting_time(state.T, state.chain, z, x_n=x, family=family)
            if tau > 0:
                stage.append(constant_piece(x, tau))
                zeta = complex(_slit_forward(zeta, x, 2 * math.sqrt(tau)))
        stage.append(segment_piece(x, zeta, family))
        state.append(stage)
        state.visited += 1
        log_debug("point visited", {"index": i, "T": state.T})

    driver = state.driver()
    trace = state.trace()
    distances = np.array([distance_to_polyline(z, trace.vertices) for z in targets])
    worst = int(np.argmax(distances))
    if distances[worst] > tol:
        raise VisitationError(
            f"trace passes {distances[worst]:.3e} from the point, tolerance is {tol}",
            point_index=worst,
        )
    norm = lip_norm_estimate(driver).estimate
    if norm > 4 + NORM_TOLERANCE:
        raise RefinementError(f"estimated norm {norm:.6f} exceeds 4")
    log_info("dense driver built", {"points": len(targets), "skipped": len(skipped), "T": driver.T, "norm": norm})
    return DenseBuild(driver, trace, norm, distances, skipped)


def build_dense_driver(points, tol: float = 1e-2) -> DrivingFunction:
    return build_dense(points, tol).driver
