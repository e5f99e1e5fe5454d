"""
Polyline approximants of self-similar curves, anchored on R.

Generators substitute every edge level times (Koch, arrowhead), decode Hilbert
indices (hilbert), or nest squares (positive_area_curve). Outputs are complex
arrays; the first vertex is always real.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from loewnerlab.instance import get_config
from loewnerlab.logs import log_debug
from loewnerlab.message import DomainError, LevelCapError

_SIXTY = np.exp(1j * math.pi / 3)

# half-gasket triangle: vertical side [0, 2i], left corner at -sqrt(3) + i
GASKET_TOP = 2j
GASKET_LEFT = complex(-math.sqrt(3), 1.0)


class FractalKind(str, Enum):
    KOCH = "koch"
    HILBERT = "hilbert"
    ARROWHEAD = "arrowhead"
    HALF_SIERPINSKI = "half_sierpinski"
    POSITIVE_AREA = "positive_area"


@dataclass(frozen=True)
class FractalSpec:
    kind: FractalKind
    level: int
    epsilons: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.level < 0:
            raise DomainError(f"level must be >= 0, got {self.level}")
        if self.epsilons is not None and not all(0 <= e < 1 for e in self.epsilons):
            raise DomainError("epsilons must lie in [0, 1)")


@dataclass(frozen=True)
class Square:
    """Axis-aligned square of a positive-area stage; area is exact."""

    center: complex
    side: float
    area: Fraction = field(compare=False)


def vertex_count(kind: FractalKind, level: int) -> int:
    match FractalKind(kind):
        case FractalKind.KOCH | FractalKind.HILBERT | FractalKind.POSITIVE_AREA:
            return 4**level + 1
        case FractalKind.ARROWHEAD:
            return 3**level + 1
        case FractalKind.HALF_SIERPINSKI:
            return 2 + (3**level - 1) // 2


def _check_level(kind: FractalKind, level: int, minimum: int = 0) -> None:
    if level < minimum:
        raise DomainError(f"{kind.value} level must be >= {minimum}, got {level}")
    cap = get_config().max_vertices
    count = vertex_count(kind, level)
    if count > cap:
        raise LevelCapError(f"{kind.value} level {level} needs {count} vertices, cap is {cap}")


def _koch_substitute(points: np.ndarray) -> np.ndarray:
    a = points[:-1]
    d = np.diff(points) / 3
    out = np.empty(4 * len(a) + 1, dtype=complex)
    out[0:-1:4] = a
    out[1:-1:4] = a + d
    out[2:-1:4] = a + d + d * _SIXTY
    out[3:-1:4] = a + 2 * d
    out[-1] = points[-1]
    return out


def koch(level: int, upright: bool = False) -> np.ndarray:
    """
    Level-n van Koch polyline from 0 to 1 with bumps in H. With `upright` the curve
    is turned a quarter to run from 0 to i; it then meets R only at 0, which is the
    form driving-term extraction accepts.
    """
    _check_level(FractalKind.KOCH, level)
    points = np.array([0.0, 1.0], dtype=complex)
    for _ in range(level):
        points = _koch_substitute(points)
    return 1j * points if upright else points


def _hilbert_cells(level: int) -> Tuple[np.ndarray, np.ndarray]:
    side = 1 << level
    t = np.arange(side * side, dtype=np.int64)
    x = np.zeros_like(t)
    y = np.zeros_like(t)
    s = 1
    while s < side:
        rx = 1 & (t // 2)
        ry = 1 & (t ^ rx)
        flip = (ry == 0) & (rx == 1)
        x = np.where(flip, s - 1 - x, x)
        y = np.where(flip, s - 1 - y, y)
        swap = ry == 0
        x, y = np.where(swap, y, x), np.where(swap, x, y)
        x = x + s * rx
        y = y + s * ry
        t = t // 4
        s *= 2
    return x, y


def hilbert(level: int) -> np.ndarray:
    """
    Centers of the 4^level subsquares of [0,1]^2 in Hilbert order, starting in the
    lower-left subsquare and ending in the lower-right one, preceded by a vertical
    stem from R to the first center.
    """
    _check_level(FractalKind.HILBERT, level, minimum=1)
    x, y = _hilbert_cells(level)
    side = float(1 << level)
    centers = (x + 0.5) / side + 1j * (y + 0.5) / side
    return np.concatenate([[complex(centers[0].real, 0.0)], centers])


def _arrowhead_on(start: complex, end: complex, level: int, sign: int) -> np.ndarray:
    points = np.array([start, end], dtype=complex)
    signs = np.array([sign], dtype=np.int8)
    for _ in range(level):
        a = points[:-1]
        half = np.diff(points) / 2
        p1 = a + half * np.exp(1j * signs * math.pi / 3)
        p2 = p1 + half
        out = np.empty(3 * len(a) + 1, dtype=complex)
        out[0:-1:3] = a
        out[1:-1:3] = p1
        out[2:-1:3] = p2
        out[-1] = points[-1]
        points = out
        signs = np.stack([-signs, signs, -signs], axis=1).reshape(-1)
    return points


def sierpinski_arrowhead(level: int) -> np.ndarray:
    """
    Arrowhead approximant from 0 to 1: each edge becomes three edges of half length
    turning 60 degrees, the outer two with the opposite orientation.
    """
    _check_level(FractalKind.ARROWHEAD, level)
    return _arrowhead_on(0j, 1 + 0j, level, 1)


def half_sierpinski(level: int) -> np.ndarray:
    """
    Half-gasket curve in the equilateral triangle with corners 0, 2i and
    -sqrt(3) + i. Level 0 is the side from 0 to the left corner L. Level n is level
    n-1 shrunk by 1/2 about 0 (running from 0 to L/2) followed by an arrowhead of
    level n-1 from L/2 to L bulging into the triangle. The curve meets R only at 0
    and each level is the previous one scaled by 1/2 plus one arrowhead.
    """
    _check_level(FractalKind.HALF_SIERPINSKI, level)
    points = np.array([0j, GASKET_LEFT], dtype=complex)
    for n in range(1, level + 1):
        arrow = _arrowhead_on(GASKET_LEFT / 2, GASKET_LEFT, n - 1, -1)
        points = np.concatenate([points / 2, arrow[1:]])
    return points


def _split_quadrants(origin, xv, yv):
    """Children of Hilbert regions (origin, x-vector, y-vector) in curve order."""
    return [
        (origin, yv / 2, xv / 2),
        (origin + xv / 2, xv / 2, yv / 2),
        (origin + xv / 2 + yv / 2, xv / 2, yv / 2),
        (origin + xv / 2 + yv, -yv / 2, -xv / 2),
    ]


def positive_area_curve(
    level: int, epsilons: Sequence[float]
) -> Tuple[np.ndarray, List[List[Square]]]:
    """
    Stage `level` of the nested-square construction of a curve with positive area.

    Stage k replaces every square of stage k-1 by its four Hilbert quadrants, each
    shrunk about its own center so that together they keep a fraction 1 - eps_k of
    the parent's area; the gaps between them are the corridors the curve runs
    through. The polyline joins the stage-`level` centers in Hilbert order after a
    stem from R. With all eps_k = 0 the construction is hilbert(level).
    """
    if len(epsilons) < level:
        raise DomainError(f"need {level} epsilons, got {len(epsilons)}")
    if not all(0 <= e < 1 for e in epsilons[:level]):
        raise DomainError("epsilons must lie in [0, 1)")
    _check_level(FractalKind.POSITIVE_AREA, level, minimum=1)

    origin = np.array([0j])
    xv = np.array([1j])
    yv = np.array([1 + 0j])
    area = Fraction(1)
    stages: List[List[Square]] = []
    for k in range(level):
        eps = Fraction(epsilons[k])
        shrink = math.sqrt(1 - epsilons[k])
        children = _split_quadrants(origin, xv, yv)
        origin = np.stack([c[0] for c in children], axis=1).reshape(-1)
        xv = np.stack([c[1] for c in children], axis=1).reshape(-1)
        yv = np.stack([c[2] for c in children], axis=1).reshape(-1)
        center = origin + (xv + yv) / 2
        xv = xv * shrink
        yv = yv * shrink
        origin = center - (xv + yv) / 2
        area = area * (1 - eps) / 4
        side = float(np.abs(xv[0]))
        stages.append([Square(complex(c), side, area) for c in center])

    centers = origin + (xv + yv) / 2
    polyline = np.concatenate([[complex(centers[0].real, 0.0)], centers])
    log_debug("positive area stage built", {"level": level, "area": float(area * 4**level)})
    return polyline, stages


def stage_area(squares: Sequence[Square]) -> Fraction:
    return sum((s.area for s in squares), Fraction(0))


@dataclass(frozen=True)
class AreaEstimate:
    value: float
    error_bound: float
    terms: int


def limit_area_estimate(
    epsilons: Union[Sequence[float], Callable[[int], float]], terms: int = 10_000
) -> AreaEstimate:
    """
    Infinite product of (1 - eps_k). A finite sequence is multiplied out exactly. For a
    callable k -> eps_k (k >= 1) the log-product of `terms` factors is extrapolated
    from its value at terms/2, assuming a 1/N tail; the bound is the size of the
    extrapolation step.
    """
    if callable(epsilons):
        if terms < 2:
            raise DomainError(f"terms must be >= 2, got {terms}")
        values = np.array([epsilons(k) for k in range(1, terms + 1)], dtype=float)
    else:
        values = np.asarray(list(epsilons), dtype=float)
    if np.any(values < 0) or np.any(values >= 1):
        raise DomainError("epsilons must lie in [0, 1)")

    if not callable(epsilons):
        return AreaEstimate(float(np.prod(1 - values)), 0.0, len(values))

    logs = np.cumsum(np.log1p(-values))
    full = logs[-1]
    half = logs[terms // 2 - 1]
    extrapolated = 2 * full - half
    return AreaEstimate(
        value=float(np.exp(extrapolated)),
        error_bound=float(abs(np.exp(extrapolated) - np.exp(full))),
        terms=terms,
    )


def limit_area(
    epsilons: Union[Sequence[float], Callable[[int], float]], terms: int = 10_000
) -> float:
    return limit_area_estimate(epsilons, terms).value


def generate(spec: FractalSpec) -> np.ndarray:
    match spec.kind:
        case FractalKind.KOCH:
            return koch(spec.level, upright=True)
        case FractalKind.HILBERT:
            return hilbert(spec.level)
        case FractalKind.ARROWHEAD:
            return sierpinski_arrowhead(spec.level)
        case FractalKind.HALF_SIERPINSKI:
            return half_sierpinski(spec.level)
        case FractalKind.POSITIVE_AREA:
            return positive_area_curve(spec.level, spec.epsilons or ())[0]
    raise DomainError(f"unknown fractal kind {spec.kind}")
