"""
Forward and backward chordal Loewner evolution with vertical-slit maps.

A driving function is discretized into a SlitMapChain: substep k keeps the driver
constant at one value x_k for capacity dt_k, which is exactly the elementary map
h_k(z) = x_k + sqrt((z - x_k)^2 + 4 dt_k). Composing the inverses
h_1^-1 o ... o h_k^-1 and evaluating at x_k gives trace vertex k.

x_k is the right-endpoint sample by default. Averaged sampling (the mean of both
endpoint samples) keeps the fixed points of square-root drivers exact, which is what
lets a bubble trace land where it should.
"""

import math
from enum import Enum
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, optimize

from loewnerlab.instance import get_config
from loewnerlab.logs import log_debug
from loewnerlab.message import (
    BranchError,
    DomainError,
    JunctionError,
    NonFiniteError,
    RefinementError,
    StepUnderflowError,
)
from loewnerlab.types import Alive, Captured, Evolution
from loewnerlab.utils import as_complex_array, frozen

# relative size below which an imaginary part counts as zero
_REAL_AXIS_EPS = 1e-14


class Interpolation(str, Enum):
    RIGHT = "piecewise-constant-right"
    LINEAR = "linear"


class SlitSampling(str, Enum):
    RIGHT = "right-endpoint"
    AVERAGE = "endpoint-average"


def capacity_grid(
    T: float,
    steps: int,
    singular_times: Sequence[float] = (),
    ratio: float = 0.05,
    floor: float = 1e-13,
) -> np.ndarray:
    """
    Uniform grid of `steps` cells on [0, T], geometrically refined toward each singular
    time s. Inside |t - s| < h / ratio the uniform nodes are replaced by nodes at
    offsets (h / ratio) (1 - ratio)^j, so every cell there is at most `ratio` times its
    distance to s. Refinement stops at offset floor * T.
    """
    if T <= 0 or not math.isfinite(T):
        raise DomainError(f"capacity horizon must be positive, got {T}")
    if steps < 1:
        raise DomainError(f"steps must be >= 1, got {steps}")
    if not 0 < ratio < 1:
        raise DomainError(f"refinement ratio must lie in (0, 1), got {ratio}")
    if not 0 < floor < 1:
        raise DomainError(f"refinement floor must lie in (0, 1), got {floor}")

    h = T / steps
    start = h / ratio
    uniform = np.linspace(0.0, T, steps + 1)
    keep = np.ones(len(uniform), dtype=bool)
    pieces = []
    for s in singular_times:
        if not 0 < s <= T:
            raise DomainError(f"singular time {s} outside (0, {T}]")
        keep &= np.abs(uniform - s) >= start
        count = max(1, int(math.ceil(math.log(floor * T / start) / math.log(1 - ratio))))
        offsets = start * (1 - ratio) ** np.arange(count + 1)
        offsets = offsets[offsets >= floor * T]
        pieces.append(s - offsets)
        pieces.append(s + offsets)
        pieces.append(np.array([s]))
    grid = np.unique(np.concatenate([uniform[keep], *pieces]))
    grid = grid[(grid > 0) & (grid < T)]
    return np.concatenate([[0.0], grid, [T]])


class DrivingFunction:
    """
    Sampled driving function lambda(t) on [0, T] in half-plane-capacity time.

    The interpolation tag decides how the function is evaluated between samples;
    slit-map composition reads the samples at its own grid nodes (see SlitSampling).
    """

    times: np.ndarray
    values: np.ndarray
    interpolation: Interpolation

    def __init__(
        self,
        times: Iterable[float],
        values: Iterable[float],
        interpolation: Interpolation = Interpolation.LINEAR,
    ):
        times_arr = np.asarray(list(times) if not isinstance(times, np.ndarray) else times, dtype=float)
        values_arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=float)
        if times_arr.ndim != 1 or times_arr.shape != values_arr.shape:
            raise DomainError("times and values must be 1-d and of equal length")
        if len(times_arr) < 2:
            raise DomainError("a driving function needs at least 2 samples")
        if times_arr[0] != 0.0:
            raise DomainError(f"driving function must start at t=0, got {times_arr[0]}")
        if not (np.all(np.isfinite(times_arr)) and np.all(np.isfinite(values_arr))):
            raise DomainError("driving function samples must be finite")
        if np.any(np.diff(times_arr) <= 0):
            raise DomainError("driving function times must be strictly increasing")
        self.times = frozen(times_arr)
        self.values = frozen(values_arr)
        self.interpolation = Interpolation(interpolation)

    @classmethod
    def from_callable(
        cls,
        fn: Callable[[float], float],
        T: float,
        steps: int = 1000,
        singular_times: Sequence[float] = (),
        interpolation: Interpolation = Interpolation.LINEAR,
    ) -> "DrivingFunction":
        grid = capacity_grid(T, steps, singular_times)
        return cls(grid, [fn(float(t)) for t in grid], interpolation)

    @classmethod
    def constant(cls, value: float, T: float) -> "DrivingFunction":
        return cls([0.0, T], [value, value])

    @property
    def T(self) -> float:
        return float(self.times[-1])

    def __len__(self) -> int:
        return len(self.times)

    def __call__(self, t):
        if self.interpolation is Interpolation.LINEAR:
            out = np.interp(t, self.times, self.values)
        else:
            idx = np.clip(np.searchsorted(self.times, t, side="left"), 0, len(self.times) - 1)
            out = self.values[idx]
        if np.ndim(out) == 0:
            return float(out)
        return out

    def with_interpolation(self, interpolation: Interpolation) -> "DrivingFunction":
        return DrivingFunction(self.times, self.values, interpolation)

    def restrict(self, t_end: float) -> "DrivingFunction":
        """The driver on [0, t_end], with an interpolated sample at t_end."""
        if not 0 < t_end <= self.T:
            raise DomainError(f"restriction end {t_end} outside (0, {self.T}]")
        keep = self.times < t_end
        times = np.concatenate([self.times[keep], [t_end]])
        values = np.concatenate([self.values[keep], [self(t_end)]])
        return DrivingFunction(times, values, self.interpolation)

    def same_samples(self, other: "DrivingFunction") -> bool:
        return np.array_equal(self.times, other.times) and np.array_equal(
            self.values, other.values
        )

    def __repr__(self) -> str:
        return (
            f"DrivingFunction(n={len(self)}, T={self.T:.6g}, "
            f"interpolation={self.interpolation.value})"
        )


def _slit_forward(z, x: float, y: float) -> np.ndarray:
    """x + sqrt((z - x)^2 + y^2) on the branch asymptotic to z - x; no slit checks."""
    u = np.asarray(z, dtype=complex) - x
    with np.errstate(divide="ignore", invalid="ignore"):
        w = u * np.sqrt(1.0 + (y * y) / (u * u))
    w = np.where(u == 0, complex(y, 0.0), w)
    return x + w


def _slit_inverse(w, x: float, y: float) -> np.ndarray:
    """x + sqrt((w - x)^2 - y^2) with the result in the closed upper half-plane."""
    v = np.asarray(w, dtype=complex) - x
    with np.errstate(divide="ignore", invalid="ignore"):
        r = v * np.sqrt(1.0 - (y * y) / (v * v))
    on_base = (np.abs(v.imag) <= _REAL_AXIS_EPS * (np.abs(v) + y)) & (
        np.abs(v.real) <= y
    )
    lifted = 1j * np.sqrt(np.maximum(y * y - v.real**2, 0.0))
    r = np.where(on_base, lifted, r)
    return x + r


def _on_open_slit(z: complex, x: float, y: float) -> bool:
    u = z - x
    return abs(u.real) <= _REAL_AXIS_EPS * (abs(u) + y) and 0 < u.imag < y


def _check_half_plane(z: complex, name: str = "z") -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"{name} must be finite, got {z}")
    if z.imag < 0:
        raise DomainError(f"{name} must lie in the closed upper half-plane, got {z}")
    return z


def vertical_slit_map(z: complex, x: float, y: float) -> complex:
    """
    Maps H minus the slit [x, x + iy] conformally onto H; the tip goes to x and
    the half-plane capacity of the slit is y^2 / 4.
    """
    if not y > 0:
        raise DomainError(f"slit height must be positive, got {y}")
    z = _check_half_plane(z)
    if _on_open_slit(z, x, y):
        raise BranchError(f"{z} lies strictly inside the slit at x={x} of height {y}")
    w = complex(_slit_forward(z, x, y))
    return complex(w.real, max(w.imag, 0.0))


def inverse_vertical_slit_map(w: complex, x: float, y: float) -> complex:
    """Inverse of vertical_slit_map; real w with |w - x| < y lands on the slit."""
    if not y > 0:
        raise DomainError(f"slit height must be positive, got {y}")
    w = _check_half_plane(w, "w")
    r = complex(_slit_inverse(w, x, y))
    return complex(r.real, max(r.imag, 0.0))


class SlitMapChain:
    """
    Ordered vertical-slit maps (x_k, dt_k). Applied in order they discretize g_T;
    inverted in reverse order they discretize g_T^-1 = f_T.
    """

    xs: np.ndarray
    dts: np.ndarray

    def __init__(self, xs: Iterable[float], dts: Iterable[float]):
        xs_arr = np.asarray(list(xs) if not isinstance(xs, np.ndarray) else xs, dtype=float)
        dts_arr = np.asarray(list(dts) if not isinstance(dts, np.ndarray) else dts, dtype=float)
        if xs_arr.shape != dts_arr.shape or xs_arr.ndim != 1:
            raise DomainError("xs and dts must be 1-d and of equal length")
        if np.any(~np.isfinite(xs_arr)) or np.any(~np.isfinite(dts_arr)):
            raise DomainError("slit parameters must be finite")
        if np.any(dts_arr <= 0):
            raise DomainError("every slit step needs dt > 0")
        self.xs = frozen(xs_arr)
        self.dts = frozen(dts_arr)
        self.total_capacity = math.fsum(dts_arr.tolist())

    @classmethod
    def empty(cls) -> "SlitMapChain":
        return cls(np.zeros(0), np.zeros(0))

    @classmethod
    def from_driver(
        cls,
        driver: DrivingFunction,
        grid: Optional[np.ndarray] = None,
        sampling: SlitSampling = SlitSampling.RIGHT,
    ) -> "SlitMapChain":
        grid = driver.times if grid is None else np.asarray(grid, dtype=float)
        values = np.asarray(driver(grid), dtype=float)
        if SlitSampling(sampling) is SlitSampling.AVERAGE:
            xs = 0.5 * (values[:-1] + values[1:])
        else:
            xs = values[1:]
        return cls(xs, np.diff(grid))

    def prefix(self, count: int) -> "SlitMapChain":
        """The first `count` steps."""
        return SlitMapChain(self.xs[:count], self.dts[:count])

    @property
    def heights(self) -> np.ndarray:
        return 2.0 * np.sqrt(self.dts)

    @property
    def steps(self) -> List[Tuple[float, float]]:
        return list(zip(self.xs.tolist(), self.dts.tolist()))

    def __len__(self) -> int:
        return len(self.xs)

    def extend(self, other: "SlitMapChain") -> "SlitMapChain":
        return SlitMapChain(
            np.concatenate([self.xs, other.xs]), np.concatenate([self.dts, other.dts])
        )

    def forward(self, z) -> np.ndarray:
        """g_T(z) for points off the hull."""
        w = as_complex_array(z)
        for x, y in zip(self.xs, self.heights):
            w = _slit_forward(w, x, y)
        return w

    def inverse(self, w) -> np.ndarray:
        """g_T^-1(w) for points in the closed upper half-plane."""
        z = as_complex_array(w)
        for x, y in zip(self.xs[::-1], self.heights[::-1]):
            z = _slit_inverse(z, x, y)
        return z

    def driving_times(self) -> np.ndarray:
        return np.concatenate([[0.0], np.cumsum(self.dts)])

    def trace_vertices(self, start: float) -> np.ndarray:
        """
        Vertex k (k >= 1) is (h_1^-1 o ... o h_k^-1)(x_k); vertex 0 is the base point.
        All vertices are carried through the inverse maps together.
        """
        heights = self.heights
        verts = self.xs.astype(complex)
        for i in range(len(self.xs) - 1, -1, -1):
            verts[i:] = _slit_inverse(verts[i:], self.xs[i], heights[i])
        return np.concatenate([[complex(start, 0.0)], verts])


class Trace:
    """Polyline discretization of the trace: vertices in H-bar with capacity times."""

    vertices: np.ndarray
    times: np.ndarray

    def __init__(self, vertices, times: Iterable[float]):
        verts = as_complex_array(vertices)
        times_arr = np.asarray(list(times) if not isinstance(times, np.ndarray) else times, dtype=float)
        if len(verts) != len(times_arr) or len(verts) < 1:
            raise DomainError("trace vertices and times must be non-empty and of equal length")
        if verts[0].imag != 0:
            raise DomainError("the first trace vertex must lie on the real axis")
        if times_arr[0] != 0 or np.any(np.diff(times_arr) <= 0):
            raise DomainError("trace times must start at 0 and increase strictly")
        self.vertices = frozen(verts)
        self.times = frozen(times_arr)

    @property
    def T(self) -> float:
        return float(self.times[-1])

    @property
    def tip(self) -> complex:
        return complex(self.vertices[-1])

    def max_height(self) -> float:
        return float(np.max(self.vertices.imag))

    def __len__(self) -> int:
        return len(self.vertices)


class RefinementPolicy:
    """
    How solve_trace partitions [0, T]: uniform cells, geometric refinement toward
    singular times, and an optional bound on the distance between adjacent vertices.

    With `close_singular`, the vertex at each singular time s is the exact endpoint
    of the trace driven by lambda(s) + c sqrt(s - t) over the last cell before s,
    so a bubble driver lands on R instead of stalling at the refinement floor.
    """

    singular_times: Tuple[float, ...]
    ratio: float
    floor: float
    max_jump: Optional[float]
    sampling: SlitSampling
    close_singular: bool

    def __init__(
        self,
        singular_times: Sequence[float] = (),
        ratio: float = 0.05,
        floor: float = 1e-13,
        max_jump: Optional[float] = None,
        sampling: SlitSampling = SlitSampling.RIGHT,
        close_singular: bool = True,
    ):
        self.singular_times = tuple(float(s) for s in singular_times)
        self.ratio = ratio
        self.floor = floor
        self.max_jump = max_jump
        self.sampling = SlitSampling(sampling)
        self.close_singular = close_singular

    @classmethod
    def landing_at(cls, T: float) -> "RefinementPolicy":
        """Averaged sampling closed at T, for drivers with a square-root singularity there."""
        return cls(singular_times=(T,), sampling=SlitSampling.AVERAGE)


def self_similar_endpoint(c: float) -> complex:
    """
    Endpoint of the trace driven by c sqrt(1 - t) on [0, 1], relative to the start
    value c. For |c| < 4 it is the upper root of F^2 + cF + 4 = 0; for |c| >= 4 the
    trace lands on R at the real root nearer the final driving value -c.
    """
    disc = c * c - 16.0
    if disc < 0:
        return complex(-c / 2, math.sqrt(-disc) / 2)
    root = math.sqrt(disc)
    return complex((-c - root) / 2 if c > 0 else (-c + root) / 2, 0.0)


def _closure_indices(grid: np.ndarray, singular_times: Sequence[float]) -> List[int]:
    tol = 1e-12 * max(1.0, float(grid[-1]))
    indices = []
    for s in singular_times:
        j = int(np.argmin(np.abs(grid - s)))
        if j > 0 and abs(grid[j] - s) <= tol:
            indices.append(j)
    return sorted(set(indices))


def _closure_vertex(chain: SlitMapChain, j: int, before: float, at: float, cell: float) -> complex:
    root = math.sqrt(cell)
    w = before + root * self_similar_endpoint((before - at) / root)
    return complex(chain.prefix(j - 1).inverse([w])[0])


def solve_trace(
    driver: DrivingFunction,
    steps: Optional[int] = None,
    policy: Optional[RefinementPolicy] = None,
) -> Trace:
    """
    Computes the trace of `driver` by composing inverse vertical-slit maps.

    With steps=None the driver's own sample grid is used; otherwise [0, T] is split
    into `steps` cells refined per `policy`. Singular times that are grid nodes get
    the closed-form endpoint vertex when the policy asks for it.
    """
    policy = policy or RefinementPolicy()
    if steps is None:
        grid = np.asarray(driver.times)
    else:
        grid = capacity_grid(driver.T, steps, policy.singular_times, policy.ratio, policy.floor)

    chain = SlitMapChain.from_driver(driver, grid, policy.sampling)
    vertices = chain.trace_vertices(driver(0.0))
    if policy.close_singular:
        values = np.asarray(driver(grid), dtype=float)
        for j in _closure_indices(grid, policy.singular_times):
            vertices[j] = _closure_vertex(chain, j, values[j - 1], values[j], grid[j] - grid[j - 1])

    if not np.all(np.isfinite(vertices)):
        raise NonFiniteError("trace computation produced non-finite vertices")
    scale = max(1.0, float(np.max(np.abs(vertices))))
    worst = float(np.min(vertices.imag))
    if worst < -1e-9 * scale:
        raise BranchError(f"trace vertex below the real axis (im={worst:.3e})")
    vertices = vertices.real + 1j * np.maximum(vertices.imag, 0.0)

    if policy.max_jump is not None and len(vertices) > 1:
        jumps = np.abs(np.diff(vertices))
        k = int(np.argmax(jumps))
        if jumps[k] > policy.max_jump:
            raise RefinementError(
                f"vertices {k} and {k + 1} are {jumps[k]:.3e} apart, "
                f"more than the allowed {policy.max_jump:.3e}"
            )

    log_debug("trace solved", {"steps": len(chain), "T": driver.T, "tip": complex(vertices[-1])})
    return Trace(vertices, grid)


_MAX_WINDOW_SAMPLES = 2048
_MAX_THRESHOLD_CUTS = 8


def _gap_event(driver: DrivingFunction, threshold: float):
    def gap(t, y):
        return math.hypot(y[0] - driver(t), y[1]) - threshold

    gap.terminal = True
    gap.direction = -1
    return gap


def driving_speed(driver: DrivingFunction, t: float, span: float) -> float:
    """
    Fastest the driver can move near t at the scale of the horizon `span`: its
    Lip(1/2) modulus over samples within span / 64 of t, divided by sqrt(span).
    """
    reach = span / 64
    lo, hi = max(0.0, t - reach), min(driver.T, t + reach)
    inside = driver.times[(driver.times > lo) & (driver.times < hi)]
    if len(inside) > _MAX_WINDOW_SAMPLES:
        inside = inside[:: len(inside) // _MAX_WINDOW_SAMPLES + 1]
    times = np.concatenate([[lo], inside, [hi]])
    values = np.asarray(driver(times), dtype=float)
    dt = times[None, :] - times[:, None]
    dv = np.abs(values[None, :] - values[:, None])
    upper = dt > 0
    if not np.any(upper):
        return 0.0
    modulus = float(np.max(dv[upper] / np.sqrt(dt[upper])))
    return modulus / math.sqrt(span)


def evolve_point(
    driver: DrivingFunction,
    z0: complex,
    t0: float = 0.0,
    t1: Optional[float] = None,
    tol: float = 1e-9,
) -> Evolution:
    """
    Integrates dg/dt = 2 / (g - lambda(t)) from t0 to t1 starting at z0.

    Returns Alive(g_t1(z0)) when the solution exists on [t0, t1]. Returns
    Captured(T_x) when the gap |g - lambda| falls below
    capture_delta * sqrt(t1 - t0) and the outward drift 2 / gap there beats
    driving_speed. When the drift is too weak the threshold is lowered to
    1 / driving_speed and integration resumes from the crossing.
    """
    config = get_config()
    t1 = driver.T if t1 is None else float(t1)
    if not 0 <= t0 < t1 <= driver.T * (1 + 1e-12):
        raise DomainError(f"need 0 <= t0 < t1 <= {driver.T}, got t0={t0}, t1={t1}")
    z0 = _check_half_plane(z0, "z0")
    if z0.imag == 0 and z0.real == driver(t0):
        raise DomainError(f"z0={z0} coincides with the driving value at t0")

    span = t1 - t0
    threshold = config.capture_delta * math.sqrt(span)

    def rhs(t, y):
        d = complex(y[0] - driver(t), y[1])
        if d == 0:
            return [math.inf, 0.0]
        q = 2.0 / d
        return [q.real, q.imag]

    start, state = t0, [z0.real, z0.imag]
    for _ in range(_MAX_THRESHOLD_CUTS):
        if start >= t1:
            break
        gap = _gap_event(driver, threshold)

        sol = integrate.solve_ivp(
            rhs,
            (start, t1),
            state,
            method="DOP853",
            rtol=min(config.ode_rtol, tol),
            atol=min(config.ode_atol, tol * 1e-3),
            max_step=span / 64,
            events=gap,
        )
        if sol.status == -1:
            if not np.all(np.isfinite(sol.y)):
                raise NonFiniteError(f"evolution of {z0} produced non-finite values")
            raise StepUnderflowError(f"evolution of {z0} stalled at t={sol.t[-1]:.6g}: {sol.message}")
        if sol.status != 1 or len(sol.t_events[0]) == 0:
            break

        capture_time = float(sol.t_events[0][0])
        speed = driving_speed(driver, capture_time, span)
        if 2.0 / threshold > speed:
            log_debug("point captured", {"z0": z0, "T_x": capture_time})
            return Captured(capture_time=capture_time, gap=threshold)
        log_debug("capture threshold lowered", {"z0": z0, "t": capture_time, "speed": speed})
        start, state = capture_time, list(sol.y_events[0][0])
        threshold = min(threshold / 2, 1.0 / speed)
    else:
        raise StepUnderflowError(f"evolution of {z0} kept meeting a driver too fast to call capture")

    end = complex(sol.y[0, -1], max(sol.y[1, -1], 0.0))
    if not (math.isfinite(end.real) and math.isfinite(end.imag)):
        raise NonFiniteError(f"evolution of {z0} produced non-finite values")
    return Alive(end)


def backward_flow(driver: DrivingFunction, w: complex, tol: float = 1e-10) -> complex:
    """
    f_T(w) from the backward equation df/dt = -2 / (f - xi(t)), xi(t) = lambda(T - t).
    Since f_T = g_T^-1, this cross-checks the slit-map composition for w in H.
    """
    w = _check_half_plane(w, "w")
    if w.imag == 0:
        raise DomainError("backward flow is integrated for points strictly inside H")
    T = driver.T

    def rhs(t, y):
        q = -2.0 / complex(y[0] - driver(T - t), y[1])
        return [q.real, q.imag]

    sol = integrate.solve_ivp(
        rhs, (0.0, T), [w.real, w.imag], method="DOP853", rtol=tol, atol=tol * 1e-2,
        max_step=T / 64,
    )
    if sol.status != 0 or not np.all(np.isfinite(sol.y)):
        raise NonFiniteError(f"backward flow from {w} failed: {sol.message}")
    return complex(sol.y[0, -1], sol.y[1, -1])


def transform_driving(
    driver: DrivingFunction, r: float, x: float = 0.0, reflect: bool = False
) -> DrivingFunction:
    """Driver of the hulls r*K_{t/r^2} (+ x, reflected in iR when `reflect`)."""
    if not r > 0:
        raise DomainError(f"scale factor must be positive, got {r}")
    sign = -1.0 if reflect else 1.0
    return DrivingFunction(
        driver.times * (r * r), sign * r * driver.values + x, driver.interpolation
    )


def concat_driving(
    first: DrivingFunction, second: DrivingFunction, tol: float = 1e-9
) -> DrivingFunction:
    """Runs `second` after `first`; the value at T1 + u is second(u)."""
    jump = abs(second.values[0] - first.values[-1])
    if jump > tol * max(1.0, abs(first.values[-1])):
        raise JunctionError(
            f"driving functions do not meet: {first.values[-1]!r} vs {second.values[0]!r}"
        )
    times = np.concatenate([first.times, first.T + second.times[1:]])
    values = np.concatenate([first.values, second.values[1:]])
    return DrivingFunction(times, values, first.interpolation)


def hull_real_interval(trace: Trace, tol: float = 1e-3) -> Optional[Tuple[float, float]]:
    """
    Real interval between the base point and the landing point once the trace has
    come back to R; None while the tip is off R.
    """
    scale = max(1.0, float(np.max(np.abs(trace.vertices))))
    if trace.tip.imag > tol * scale:
        return None
    base = float(trace.vertices[0].real)
    landing = trace.tip.real
    return (min(base, landing), max(base, landing))


def ray_angle_of_sqrt(k: float) -> float:
    """
    Angle (radians, from the positive real axis) of the straight trace of k*sqrt(t),
    from k = 2 (1 - 2a) / sqrt(a (1 - a)) with angle a*pi.
    """
    if k == 0:
        return math.pi / 2

    def f(a):
        return 2 * (1 - 2 * a) / math.sqrt(a * (1 - a)) - k

    a = optimize.brentq(f, 1e-15, 1 - 1e-15, xtol=1e-15)
    return a * math.pi
