"""Named experiment scenarios, configuration and reporting."""

from .config import ConfigError, ExperimentConfig, config_from_dict, load_config
from .registry import CALIBRATION, REGISTRY, TOLERANCES, list_scenarios
from .runner import ReportRecord, RunResult, run, write_reports

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "config_from_dict",
    "load_config",
    "CALIBRATION",
    "REGISTRY",
    "TOLERANCES",
    "list_scenarios",
    "ReportRecord",
    "RunResult",
    "run",
    "write_reports",
]
