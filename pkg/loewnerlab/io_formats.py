"""
File formats: driving CSV (header `t,lambda`), curve JSON
({"vertices": [[x, y], ...], "times": [...]}), capture CSV, and SVG figures.

Floats are written with repr so that CSV and JSON round trips are exact.
"""

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from loewnerlab.capture_dynamics import CaptureRecord
from loewnerlab.loewner_core import DrivingFunction, Interpolation
from loewnerlab.message import DomainError, ParseError
from loewnerlab.utils import as_complex_array

PathLike = Union[str, Path]

DRIVING_HEADER = ["t", "lambda"]
CAPTURE_HEADER = ["x", "T_x", "side"]


def _parse_float(text: str, line: int, field: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"not a number: {text!r}", line=line, field=field) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite value {text!r}", line=line, field=field)
    return value


def dumps_driving_csv(driver: DrivingFunction) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(DRIVING_HEADER)
    for t, v in zip(driver.times.tolist(), driver.values.tolist()):
        writer.writerow([repr(t), repr(v)])
    return buffer.getvalue()


def loads_driving_csv(text: str, interpolation: Interpolation = Interpolation.LINEAR) -> DrivingFunction:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ParseError("empty driving file", line=1)
    header = [cell.strip() for cell in rows[0]]
    if header != DRIVING_HEADER:
        raise ParseError(f"expected header t,lambda, got {','.join(header)}", line=1)
    times: List[float] = []
    values: List[float] = []
    for number, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise ParseError(f"expected 2 fields, got {len(row)}", line=number)
        times.append(_parse_float(row[0], number, "t"))
        values.append(_parse_float(row[1], number, "lambda"))
    try:
        return DrivingFunction(times, values, interpolation)
    except DomainError as e:
        raise ParseError(e.original_message) from e


def write_driving_csv(driver: DrivingFunction, path: PathLike) -> None:
    Path(path).write_text(dumps_driving_csv(driver))


def read_driving_csv(path: PathLike) -> DrivingFunction:
    return loads_driving_csv(Path(path).read_text())


def dumps_curve_json(vertices, times: Optional[Sequence[float]] = None) -> str:
    pts = as_complex_array(vertices)
    payload = {"vertices": [[float(z.real), float(z.imag)] for z in pts]}
    if times is not None:
        payload["times"] = [float(t) for t in times]
    return json.dumps(payload)


def loads_curve_json(text: str) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", line=e.lineno) from None
    if not isinstance(payload, dict) or "vertices" not in payload:
        raise ParseError("curve JSON needs a 'vertices' list", field="vertices")
    raw = payload["vertices"]
    if not isinstance(raw, list):
        raise ParseError("'vertices' must be a list", field="vertices")
    points = []
    for k, pair in enumerate(raw):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise ParseError(f"vertex {k} is not an [x, y] pair", field="vertices")
        x, y = pair
        if not all(isinstance(c, (int, float)) and math.isfinite(c) for c in (x, y)):
            raise ParseError(f"vertex {k} has a non-numeric coordinate", field="vertices")
        points.append(complex(x, y))
    times = None
    if "times" in payload and payload["times"] is not None:
        if not isinstance(payload["times"], list) or len(payload["times"]) != len(points):
            raise ParseError("'times' must match 'vertices' in length", field="times")
        times = np.asarray(payload["times"], dtype=float)
    return np.asarray(points, dtype=complex), times


def write_curve_json(vertices, path: PathLike, times: Optional[Sequence[float]] = None) -> None:
    Path(path).write_text(dumps_curve_json(vertices, times))


def read_curve_json(path: PathLike) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    return loads_curve_json(Path(path).read_text())


def read_number_list(path: PathLike) -> List[float]:
    """A JSON list of numbers, used for epsilon sequences."""
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", line=e.lineno) from None
    if not isinstance(payload, list) or not all(isinstance(v, (int, float)) for v in payload):
        raise ParseError("expected a JSON list of numbers")
    return [float(v) for v in payload]


def dumps_capture_csv(records: Iterable[CaptureRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CAPTURE_HEADER)
    for record in records:
        writer.writerow([repr(record.x), repr(record.capture_time), record.side])
    return buffer.getvalue()


SVG_TEMPLATE = """\
<?xml version="1.0" standalone="no"?>
<svg width="%(width)d" height="%(height)d" viewBox="%(min_x)f %(min_y)f %(span_x)f %(span_y)f"
    version="1.1" xmlns="http://www.w3.org/2000/svg">
<g transform="scale(1,-1) translate(0,%(flip)f)">
%(body)s
</g></svg>
"""

PALETTE = ["#1f4e9c", "#b8312f", "#2f8f46", "#8a4fb8", "#c77c1e"]


class SVGFigure:
    """Collects polylines and axes and renders them with y pointing up."""

    def __init__(self):
        self.min_x = self.max_x = self.min_y = self.max_y = None
        self.commands: List[str] = []

    def require(self, x: float, y: float) -> None:
        if self.min_x is None:
            self.min_x = self.max_x = x
            self.min_y = self.max_y = y
        else:
            self.min_x = min(self.min_x, x)
            self.max_x = max(self.max_x, x)
            self.min_y = min(self.min_y, y)
            self.max_y = max(self.max_y, y)

    def path(self, points, color: str = "#000000", width: float = 0.004) -> None:
        pts = as_complex_array(points)
        xs, ys = pts.real, pts.imag
        self.require(float(xs.min()), float(ys.min()))
        self.require(float(xs.max()), float(ys.max()))
        head = f"M {xs[0]:.6f} {ys[0]:.6f}"
        tail = " ".join(f"L {x:.6f} {y:.6f}" for x, y in zip(xs[1:], ys[1:]))
        self.commands.append(
            f'<path class="curve" d="{head} {tail}" '
            f'style="fill:none;stroke:{color};stroke-width:{width:f}"/>'
        )

    def axes(self) -> None:
        pad = self._pad()
        lo_x, hi_x = self.min_x - pad, self.max_x + pad
        lo_y, hi_y = min(self.min_y, 0.0) - pad, self.max_y + pad
        self.commands.append(
            f'<line class="axis" x1="{lo_x:f}" y1="0" x2="{hi_x:f}" y2="0" style="stroke:#888888;stroke-width:{pad / 20:f}"/>'
        )
        if lo_x <= 0 <= hi_x:
            self.commands.append(
                f'<line class="axis" x1="0" y1="{lo_y:f}" x2="0" y2="{hi_y:f}" style="stroke:#888888;stroke-width:{pad / 20:f}"/>'
            )

    def _pad(self) -> float:
        span = max(self.max_x - self.min_x, self.max_y - self.min_y)
        return 0.05 * span if span > 0 else 0.1

    def render(self, pixels: int = 600) -> str:
        if self.min_x is None:
            raise DomainError("nothing to draw")
        pad = self._pad()
        min_x = self.min_x - pad
        min_y = min(self.min_y, 0.0) - pad
        span_x = self.max_x + pad - min_x
        span_y = self.max_y + pad - min_y
        width = pixels
        height = max(1, int(round(pixels * span_y / span_x)))
        return SVG_TEMPLATE % {
            "width": width,
            "height": height,
            "min_x": min_x,
            "min_y": min_y,
            "span_x": span_x,
            "span_y": span_y,
            "flip": -(2 * min_y + span_y),
            "body": "\n".join(self.commands),
        }


def render_curves_svg(curves: Sequence, pixels: int = 600) -> str:
    """One <path> per curve, plus the real axis (and the imaginary axis when in view)."""
    figure = SVGFigure()
    for k, curve in enumerate(curves):
        figure.path(curve, PALETTE[k % len(PALETTE)])
    figure.axes()
    return figure.render(pixels)


def render_driving_svg(driver: DrivingFunction, pixels: int = 600) -> str:
    """Graph of lambda over [0, T]."""
    return render_curves_svg([driver.times + 1j * driver.values], pixels)


def write_svg(svg: str, path: PathLike) -> None:
    Path(path).write_text(svg)
