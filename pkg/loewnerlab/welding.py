"""
Driving-term extraction from polylines by vertical-slit unzipping.

Each step takes the image zeta of the next curve vertex under the maps built so far,
treats it as the tip of a vertical slit at Re(zeta), and maps every remaining vertex
through that slit map. The emitted sample is lambda(t_k) = Re(zeta) at the
accumulated capacity t_k.
"""

import math
from typing import List, Optional

import numpy as np

from loewnerlab.logs import log_debug, log_trace
from loewnerlab.loewner_core import (
    DrivingFunction,
    Interpolation,
    SlitMapChain,
    _slit_forward,
    concat_driving,
    solve_trace,
)
from loewnerlab.message import DomainError, ExtractionError
from loewnerlab.utils import as_complex_array

# images below -_BRANCH_TOL * scale are branch failures, above it they snap to R
_BRANCH_TOL = 1e-10

RIGHT = 1
LEFT = -1


def refine_polyline(curve, delta: float) -> np.ndarray:
    """
    Subdivides every edge into ceil(length / delta) equal pieces. Original vertices
    are kept exactly, so the refined polyline traces the same set.
    """
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    points = as_complex_array(curve)
    if len(points) < 2:
        raise DomainError("a polyline needs at least 2 vertices")

    lengths = np.abs(np.diff(points))
    pieces = np.maximum(1, np.ceil(lengths / delta).astype(int))
    if np.all(pieces == 1):
        return points.copy()

    starts = np.repeat(points[:-1], pieces)
    edges = np.repeat(np.diff(points), pieces)
    offsets = np.concatenate([np.arange(k) / k for k in pieces])
    return np.concatenate([starts + offsets * edges, points[-1:]])


def sided_slit_map(points: np.ndarray, sides: np.ndarray, x: float, y: float):
    """
    Vertical-slit map for unzipping. Points on the erased slit [x, x + iy] go to the
    real preimage on their tagged side; untagged ones take the side of Re(z - x),
    defaulting to the right. Returns the images and the updated side tags.
    """
    u = points - x
    on_slit = (np.abs(u.real) <= 1e-13 * (np.abs(u) + y)) & (u.imag >= 0) & (u.imag < y)
    images = _slit_forward(points, x, y)
    if not np.any(on_slit):
        return images, sides

    sides = sides.copy()
    untagged = on_slit & (sides == 0)
    sides[untagged] = np.where(u.real[untagged] < 0, LEFT, RIGHT)
    flat = x + sides[on_slit] * np.sqrt(np.maximum(y * y - u.imag[on_slit] ** 2, 0.0))
    images[on_slit] = flat
    return images, sides


class WeldState:
    """
    Mutable state of one unzipping run. `pending` holds the images of the vertices not
    yet absorbed; `absorbed` counts the vertices consumed so far, so it is also the
    arc index reported on failure.
    """

    def __init__(self, points: np.ndarray, origin: float):
        self.pending = points
        self.sides = np.zeros(len(points), dtype=np.int8)
        self.xs: List[float] = []
        self.dts: List[float] = []
        self.elapsed = 0.0
        self.origin = origin
        self.absorbed = 0
        self.skipped = 0

    @property
    def chain(self) -> SlitMapChain:
        return SlitMapChain(self.xs, self.dts)

    def done(self) -> bool:
        return len(self.pending) == 0

    def absorb(self) -> None:
        zeta = complex(self.pending[0])
        self.absorbed += 1
        rest = self.pending[1:]
        rest_sides = self.sides[1:]

        if not zeta.imag > 0:
            raise ExtractionError(
                f"vertex image {zeta} lies on the real axis, dt would be {zeta.imag**2 / 4:.3e}",
                arc_index=self.absorbed,
            )
        dt = zeta.imag * zeta.imag / 4
        if self.elapsed + dt == self.elapsed:
            # capacity below float resolution at this time, the map is the identity
            self.skipped += 1
            log_trace("vertex skipped", {"arc": self.absorbed, "dt": dt})
            self.pending, self.sides = rest, rest_sides
            return

        x = zeta.real
        images, sides = sided_slit_map(rest, rest_sides, x, zeta.imag)
        if len(images):
            scale = max(1.0, float(np.max(np.abs(images))))
            low = float(np.min(images.imag))
            if low < -_BRANCH_TOL * scale:
                bad = int(np.argmin(images.imag))
                raise ExtractionError(
                    f"image of a later vertex fell below the real axis (im={low:.3e})",
                    arc_index=self.absorbed + 1 + bad,
                )
            images = images.real + 1j * np.maximum(images.imag, 0.0)

        self.xs.append(x)
        self.dts.append(dt)
        self.elapsed += dt
        self.pending, self.sides = images, sides

    def driving_function(self) -> DrivingFunction:
        times = np.concatenate([[0.0], np.cumsum(self.dts)])
        values = np.concatenate([[self.origin], self.xs])
        return DrivingFunction(times, values, Interpolation.LINEAR)


def _prepare(curve, delta: Optional[float]) -> np.ndarray:
    points = as_complex_array(curve)
    if len(points) < 2:
        raise DomainError("a polyline needs at least 2 vertices")
    if not np.all(np.isfinite(points)):
        raise DomainError("curve vertices must be finite")
    if points[0].imag != 0:
        raise DomainError(f"curve must start on the real axis, starts at {points[0]}")
    if np.any(points.imag < 0):
        raise DomainError("curve must lie in the closed upper half-plane")
    if delta is not None:
        points = refine_polyline(points, delta)
    keep = np.concatenate([[True], np.diff(points) != 0])
    return points[keep]


def _unzip(points: np.ndarray) -> WeldState:
    state = WeldState(points[1:].copy(), float(points[0].real))
    while not state.done():
        state.absorb()
    if len(state.xs) == 0:
        raise ExtractionError("no vertex carried positive capacity", arc_index=state.absorbed)
    log_debug(
        "driving term extracted",
        {"vertices": len(points), "skipped": state.skipped, "T": state.elapsed},
    )
    return state


def extract_driving(curve, delta: Optional[float] = None) -> DrivingFunction:
    """
    Driving function of a simple polyline starting on R, in capacity time.

    With `delta` the polyline is first refined to edges of length at most delta.
    Samples whose capacity increment vanishes in floating point are dropped, so the
    output times increase strictly.
    """
    return _unzip(_prepare(curve, delta)).driving_function()


def extract_chain(curve, delta: Optional[float] = None) -> SlitMapChain:
    """The slit maps absorbed while unzipping `curve`; forward() approximates g_T."""
    return _unzip(_prepare(curve, delta)).chain


def extract_driving_staged(curve, split: int, delta: Optional[float] = None) -> DrivingFunction:
    """
    Two-stage extraction: unzip vertices 0..split, push the rest forward through the
    slit maps of that prefix, unzip the pushed remainder, and concatenate the drivers.
    """
    points = _prepare(curve, delta)
    if not 1 <= split < len(points) - 1:
        raise DomainError(f"split must lie in [1, {len(points) - 2}], got {split}")

    prefix = _unzip(points[: split + 1])
    head = prefix.driving_function()
    suffix = prefix.chain.forward(points[split + 1 :])
    remainder = np.concatenate([[complex(head.values[-1], 0.0)], suffix])
    remainder = remainder.real + 1j * np.maximum(remainder.imag, 0.0)
    tail = _unzip(remainder).driving_function()
    return concat_driving(head, tail)


def resample_uniform(driver: DrivingFunction, n: int) -> DrivingFunction:
    """Linear resampling of `driver` onto n equal capacity cells."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    times = np.linspace(0.0, driver.T, n + 1)
    return DrivingFunction(
        times, driver.with_interpolation(Interpolation.LINEAR)(times), Interpolation.LINEAR
    )


def driving_residual(estimate: DrivingFunction, reference: DrivingFunction) -> float:
    """sup |estimate - reference| over the reference grid on their common time range."""
    horizon = min(estimate.T, reference.T)
    grid = reference.times[reference.times <= horizon]
    linear = estimate.with_interpolation(Interpolation.LINEAR)
    return float(np.max(np.abs(linear(grid) - reference.values[: len(grid)])))


def round_trip_residual(
    driver: DrivingFunction, steps: Optional[int] = None, delta: Optional[float] = None
) -> float:
    """Traces `driver`, extracts the trace back, and returns the sup difference."""
    trace = solve_trace(driver, steps)
    estimate = extract_driving(trace.vertices, delta)
    reference = DrivingFunction(
        trace.times, np.asarray(driver(trace.times), dtype=float), Interpolation.LINEAR
    )
    residual = driving_residual(estimate, reference)
    log_debug("round trip", {"steps": len(trace) - 1, "residual": residual})
    return residual


def total_capacity(curve, delta: Optional[float] = None) -> float:
    """Half-plane capacity of a polyline, as accumulated by unzipping."""
    return math.fsum(_unzip(_prepare(curve, delta)).dts)
