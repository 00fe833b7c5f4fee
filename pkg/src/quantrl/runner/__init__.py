"""Config-driven experiment runner and CLI."""

from .config import DEFAULTS, DataConfig, ExperimentConfig, config_hash, load_config, resolve_config
from .manifest import RunManifest

__all__ = [
    "DEFAULTS", "DataConfig", "ExperimentConfig", "RunManifest",
    "config_hash", "load_config", "resolve_config",
]
