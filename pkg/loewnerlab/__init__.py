from loewnerlab.instance import init_lab, shutdown_lab
from loewnerlab.config import LabUserConfig
from loewnerlab.logs import log_info, log_error, log_warn, log_debug, log_trace
from loewnerlab.attributes import add_attributes, get_attributes
from loewnerlab.loewner_core import (
    DrivingFunction,
    SlitMapChain,
    Trace,
    RefinementPolicy,
    SlitSampling,
    vertical_slit_map,
    inverse_vertical_slit_map,
    solve_trace,
    evolve_point,
    transform_driving,
    concat_driving,
)
from loewnerlab.welding import extract_driving, extract_driving_staged, round_trip_residual
from loewnerlab.fractal_curves import FractalKind, FractalSpec, generate, limit_area
from loewnerlab.capture_dynamics import (
    capture_scan,
    fixed_points,
    flow_x,
    phase_inequality_margin,
    verify_lemma_interval,
)
from loewnerlab.dense_builder import build_dense, build_dense_driver
from loewnerlab.analysis import check_capacity_bounds, lip_norm_estimate, self_similarity_residual

__all__ = [
    "init_lab",
    "shutdown_lab",
    "LabUserConfig",
    "log_info",
    "log_error",
    "log_warn",
    "log_debug",
    "log_trace",
    "add_attributes",
    "get_attributes",
    "DrivingFunction",
    "SlitMapChain",
    "Trace",
    "RefinementPolicy",
    "SlitSampling",
    "vertical_slit_map",
    "inverse_vertical_slit_map",
    "solve_trace",
    "evolve_point",
    "transform_driving",
    "concat_driving",
    "extract_driving",
    "extract_driving_staged",
    "round_trip_residual",
    "FractalKind",
    "FractalSpec",
    "generate",
    "limit_area",
    "capture_scan",
    "fixed_points",
    "flow_x",
    "phase_inequality_margin",
    "verify_lemma_interval",
    "build_dense",
    "build_dense_driver",
    "check_capacity_bounds",
    "lip_norm_estimate",
    "self_similarity_residual",
]
