import threading
from typing import Optional

from loewnerlab.config import DEFAULT_CONFIG, LabConfig, LabUserConfig
from loewnerlab.message import AlreadyInitializedError

_global_config: Optional[LabConfig] = None
_global_config_lock = threading.Lock()


def init_lab(user_config: Optional[LabUserConfig] = None) -> LabConfig:
    """
    Initialize the global configuration from the provided user config.
    Fields left unset fall back to the defaults.
    """
    global _global_config
    with _global_config_lock:
        if _global_config is not None:
            raise AlreadyInitializedError()
        _global_config = _merge_config(user_config, DEFAULT_CONFIG)
        return _global_config


def shutdown_lab() -> None:
    """Clear the global configuration so that init_lab() may be called again."""
    global _global_config
    with _global_config_lock:
        _global_config = None


def get_config() -> LabConfig:
    """
    Returns the global configuration, or the defaults when the lab was never initialized.
    Numerical routines call this, so they work without init_lab().
    """
    with _global_config_lock:
        if _global_config is None:
            return DEFAULT_CONFIG
        return _global_config


def _pick(value, default):
    return value if value is not None else default


def _merge_config(
    user_config: Optional[LabUserConfig], default_config: LabConfig
) -> LabConfig:
    if user_config is None:
        return default_config

    return LabConfig(
        capture_delta=_pick(user_config.capture_delta, default_config.capture_delta),
        ode_rtol=_pick(user_config.ode_rtol, default_config.ode_rtol),
        ode_atol=_pick(user_config.ode_atol, default_config.ode_atol),
        max_vertices=_pick(user_config.max_vertices, default_config.max_vertices),
        window_max_angle=_pick(
            user_config.window_max_angle, default_config.window_max_angle
        ),
        safety_factor=_pick(user_config.safety_factor, default_config.safety_factor),
        pair_budget=_pick(user_config.pair_budget, default_config.pair_budget),
        seed=_pick(user_config.seed, default_config.seed),
        log_level=_pick(user_config.log_level, default_config.log_level),
        passthrough=_pick(user_config.passthrough, default_config.passthrough),
        noop=_pick(user_config.noop, default_config.noop),
        attributes=_pick(user_config.attributes, default_config.attributes),
    )
