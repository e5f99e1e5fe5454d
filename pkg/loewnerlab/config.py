import math
from typing import Dict, Optional

from loewnerlab.types import LogLevel


class LabUserConfig:
    """
    LabUserConfig is used to configure the global loewnerlab instance when it is created.

    Every field is optional; a field left as None takes its default from LabConfig.
    """

    capture_delta: Optional[float]
    ode_rtol: Optional[float]
    ode_atol: Optional[float]
    max_vertices: Optional[int]
    window_max_angle: Optional[float]
    safety_factor: Optional[float]
    pair_budget: Optional[int]
    seed: Optional[int]
    log_level: Optional[LogLevel]
    passthrough: Optional[bool]
    noop: Optional[bool]

    def __init__(
        self,
        capture_delta: Optional[float] = None,
        ode_rtol: Optional[float] = None,
        ode_atol: Optional[float] = None,
        max_vertices: Optional[int] = None,
        window_max_angle: Optional[float] = None,
        safety_factor: Optional[float] = None,
        pair_budget: Optional[int] = None,
        seed: Optional[int] = None,
        log_level: Optional[LogLevel] = None,
        passthrough: Optional[bool] = None,
        noop: Optional[bool] = None,
        attributes: Optional[Dict[str, str]] = None,
    ):
        self.capture_delta = capture_delta
        self.ode_rtol = ode_rtol
        self.ode_atol = ode_atol
        self.max_vertices = max_vertices
        self.window_max_angle = window_max_angle
        self.safety_factor = safety_factor
        self.pair_budget = pair_budget
        self.seed = seed
        self.log_level = log_level
        self.passthrough = passthrough
        self.noop = noop
        self.attributes = attributes


class LabConfig:
    """
    LabConfig is the fully resolved configuration read by the numerical modules.

    capture_delta scales the capture threshold of point evolution, max_vertices caps
    fractal generators, window_max_angle and safety_factor tune the dense builder, and
    pair_budget bounds exhaustive norm estimation.
    """

    capture_delta: float
    ode_rtol: float
    ode_atol: float
    max_vertices: int
    window_max_angle: float
    safety_factor: float
    pair_budget: int
    seed: int
    log_level: LogLevel
    passthrough: bool
    noop: bool

    def __init__(
        self,
        capture_delta: float,
        ode_rtol: float,
        ode_atol: float,
        max_vertices: int,
        window_max_angle: float,
        safety_factor: float,
        pair_budget: int,
        seed: int,
        log_level: LogLevel,
        passthrough: bool,
        noop: bool,
        attributes: Optional[Dict[str, str]] = None,
    ):
        self.capture_delta = capture_delta
        self.ode_rtol = ode_rtol
        self.ode_atol = ode_atol
        self.max_vertices = max_vertices
        self.window_max_angle = window_max_angle
        self.safety_factor = safety_factor
        self.pair_budget = pair_budget
        self.seed = seed
        self.log_level = log_level
        self.passthrough = passthrough
        self.noop = noop
        self.attributes = dict(attributes or {})


DEFAULT_CONFIG: LabConfig = LabConfig(
    capture_delta=1e-6,
    ode_rtol=1e-10,
    ode_atol=1e-12,
    max_vertices=2_000_000,
    window_max_angle=math.pi / 3,
    safety_factor=1.1,
    pair_budget=4_000_000,
    seed=0,
    log_level=LogLevel.INFO,
    passthrough=True,
    noop=False,
    attributes={},
)
