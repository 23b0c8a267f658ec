"""Trajectory and resource design for a two-UAV wireless powered network."""

from ._core import (
    ConfigError,
    ScenarioConfig,
    SolverError,
    direct_comp,
    direct_ic,
    infinite_comp,
    infinite_ic,
    rate_upper_bound_comp,
    sample_zf_rate,
    solve_comp,
    solve_ic,
)

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "SolverError",
    "direct_comp",
    "direct_ic",
    "infinite_comp",
    "infinite_ic",
    "rate_upper_bound_comp",
    "sample_zf_rate",
    "solve_comp",
    "solve_ic",
]
