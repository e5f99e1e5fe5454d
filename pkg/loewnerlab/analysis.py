"""
Estimators and geometric checks over driving functions and polylines.

Norm estimates are computed from samples only and are lower bounds of the true
Lip(1/2) norm; the per-lag profile shows at which scales the sup is attained.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.spatial import ConvexHull, QhullError
from scipy.spatial.distance import directed_hausdorff

from loewnerlab.instance import get_config
from loewnerlab.logs import log_debug
from loewnerlab.loewner_core import DrivingFunction, Interpolation, Trace
from loewnerlab.message import DomainError
from loewnerlab.utils import as_complex_array


@dataclass(frozen=True)
class NormReport:
    """estimate is the max over scale_profile; witness is the sample-time pair attaining it."""

    estimate: float
    witness: Tuple[float, float]
    scale_profile: List[Tuple[int, float]]


def _lags(n: int, pair_budget: int) -> np.ndarray:
    if n * n <= pair_budget:
        return np.arange(1, n)
    dyadic = 2 ** np.arange(int(math.floor(math.log2(n - 1))) + 1)
    return dyadic[dyadic < n]


def lip_norm_estimate(driver: DrivingFunction, pair_budget: Optional[int] = None) -> NormReport:
    """
    sup |lambda(b) - lambda(a)| / sqrt(b - a) over sample pairs. Every pair is visited
    when n^2 fits the budget; otherwise all pairs at each dyadic index lag.
    """
    budget = pair_budget if pair_budget is not None else get_config().pair_budget
    t = driver.times
    v = driver.values
    n = len(t)
    best, witness = 0.0, (float(t[0]), float(t[1]))
    profile: List[Tuple[int, float]] = []
    for lag in _lags(n, budget):
        lag = int(lag)
        ratios = np.abs(v[lag:] - v[:-lag]) / np.sqrt(t[lag:] - t[:-lag])
        k = int(np.argmax(ratios))
        top = float(ratios[k])
        profile.append((lag, top))
        if top > best:
            best, witness = top, (float(t[k]), float(t[k + lag]))
    log_debug("norm estimated", {"samples": n, "lags": len(profile), "estimate": best})
    return NormReport(best, witness, profile)


def oscillation(driver: DrivingFunction) -> float:
    return float(np.max(driver.values) - np.min(driver.values))


def self_similarity_residual(
    driver: DrivingFunction, value_factor: float, time_factor: float
) -> float:
    """sup over the driver's samples of |value_factor * lambda(t / time_factor) - lambda(t)|."""
    if not time_factor > 1:
        raise DomainError(f"time factor must exceed 1, got {time_factor}")
    linear = driver.with_interpolation(Interpolation.LINEAR)
    t = driver.times
    if len(t[t / time_factor > 0]) < 2:
        raise DomainError("not enough samples to compare the two scales")
    return float(np.max(np.abs(value_factor * linear(t / time_factor) - driver.values)))


def diameter(points) -> float:
    pts = as_complex_array(points)
    if len(pts) < 2:
        return 0.0
    xy = np.column_stack([pts.real, pts.imag])
    try:
        hull = ConvexHull(xy)
        candidates = pts[hull.vertices]
    except (QhullError, ValueError):
        # collinear or degenerate input: the extremes along the spread direction
        far = pts[int(np.argmax(np.abs(pts - pts[0])))]
        return float(np.max(np.abs(pts - far)))
    return float(np.max(np.abs(candidates[:, None] - candidates[None, :])))


@dataclass(frozen=True)
class CapacityReport:
    im_ratio: float
    drift_ratio: float
    diameter: float
    im_ok: bool
    drift_ok: bool

    @property
    def ok(self) -> bool:
        return self.im_ok and self.drift_ok


def check_capacity_bounds(
    driver: DrivingFunction, trace: Trace, tol: float = 1e-3
) -> CapacityReport:
    """
    Ratios of max Im(trace) to 2 sqrt(T) and of |lambda(T) - lambda(0)| to
    4 diam(trace); both bounds hold when the ratios are at most 1 + tol.
    """
    T = trace.T
    im_ratio = trace.max_height() / (2 * math.sqrt(T))
    diam = diameter(trace.vertices)
    drift = abs(float(driver.values[-1]) - float(driver.values[0]))
    drift_ratio = drift / (4 * diam) if diam > 0 else (0.0 if drift == 0 else math.inf)
    return CapacityReport(
        im_ratio=im_ratio,
        drift_ratio=drift_ratio,
        diameter=diam,
        im_ok=im_ratio <= 1 + tol,
        drift_ok=drift_ratio <= 1 + tol,
    )


def distance_to_polyline(z: complex, vertices) -> float:
    pts = as_complex_array(vertices)
    if len(pts) == 1:
        return float(abs(z - pts[0]))
    a = pts[:-1]
    d = np.diff(pts)
    length2 = np.abs(d) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(length2 > 0, ((np.conj(d) * (z - a)).real) / length2, 0.0)
    s = np.clip(s, 0.0, 1.0)
    return float(np.min(np.abs(a + s * d - z)))


def hausdorff_distance(first, second) -> float:
    a = as_complex_array(first)
    b = as_complex_array(second)
    xa = np.column_stack([a.real, a.imag])
    xb = np.column_stack([b.real, b.imag])
    return max(directed_hausdorff(xa, xb)[0], directed_hausdorff(xb, xa)[0])


def _cross(u, v):
    return u.real * v.imag - u.imag * v.real


def _within_box(p, q, r, eps):
    return (
        (np.minimum(p.real, q.real) - eps <= r.real)
        & (r.real <= np.maximum(p.real, q.real) + eps)
        & (np.minimum(p.imag, q.imag) - eps <= r.imag)
        & (r.imag <= np.maximum(p.imag, q.imag) + eps)
    )


def find_self_intersection(points, tol: float = 1e-12) -> Optional[Tuple[int, int]]:
    """
    First pair (i, j), j > i + 1, of polyline edges that cross or touch; None for a
    simple polyline.
    """
    pts = as_complex_array(points)
    a, b = pts[:-1], pts[1:]
    scale = max(1.0, float(np.max(np.abs(pts))))
    eps = tol * scale
    for i in range(len(a) - 2):
        p, q = a[i], b[i]
        c, d = a[i + 2 :], b[i + 2 :]
        o1 = _cross(q - p, c - p)
        o2 = _cross(q - p, d - p)
        o3 = _cross(d - c, p - c)
        o4 = _cross(d - c, q - c)
        area = eps * np.maximum(abs(q - p), np.abs(d - c))
        proper = (o1 * o2 < 0) & (o3 * o4 < 0) & (np.abs(o1) > area) & (np.abs(o2) > area) \
            & (np.abs(o3) > area) & (np.abs(o4) > area)
        touch = (
            ((np.abs(o1) <= area) & _within_box(p, q, c, eps))
            | ((np.abs(o2) <= area) & _within_box(p, q, d, eps))
            | ((np.abs(o3) <= area) & _within_box(c, d, p, eps))
            | ((np.abs(o4) <= area) & _within_box(c, d, q, eps))
        )
        hits = proper | touch
        if np.any(hits):
            return i, i + 2 + int(np.argmax(hits))
    return None


def is_simple(points) -> bool:
    return find_self_intersection(points) is None
