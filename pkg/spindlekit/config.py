"""
Runtime settings for spindlekit.

Precedence: CLI flags > environment (optionally seeded from a .env file) > YAML settings
file > built-in defaults.
"""

import dataclasses
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import yaml

from .errors import ConfigError


CONFIG_PATH = Path.home() / '.config' / 'spindlekit' / 'config.yaml'

ENV_KEYS = {
    'SPINDLEKIT_THREADS': 'threads',
    'SPINDLEKIT_TOL': 'abs_eps',
    'SPINDLEKIT_SAMPLES': 'samples',
    'SPINDLEKIT_SEED': 'seed',
    'SPINDLEKIT_LOG_LEVEL': 'log_level',
}

LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')


@dataclass(frozen=True)
class Settings:
    threads: int = 1
    abs_eps: float = 1e-9
    ang_eps: float = 1e-12
    samples: int = 360
    seed: int = 0
    log_level: str = 'WARNING'
    scan_steps: int = 60
    shape_samples: int = 128

    def __post_init__(self):
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")
        if not self.abs_eps > 0 or not self.ang_eps > 0:
            raise ConfigError("abs_eps and ang_eps must be positive")
        if self.samples < 8:
            raise ConfigError(f"samples must be >= 8, got {self.samples}")
        if self.shape_samples < 3:
            raise ConfigError(f"shape_samples must be >= 3, got {self.shape_samples}")
        if self.log_level not in LOG_LEVELS:
            raise ConfigError(f"log_level must be one of {', '.join(LOG_LEVELS)}")

    def replace(self, **changes: Any) -> 'Settings':
        """Copy with the non-None entries of ``changes`` applied."""
        return dataclasses.replace(self, **{k: v for k, v in changes.items() if v is not None})


def _coerce(key: str, raw: Any, source: str) -> Any:
    field_types = {f.name: f.type for f in dataclasses.fields(Settings)}
    if key not in field_types:
        raise ConfigError(f"unknown setting '{key}' in {source}")
    kind = field_types[key]
    try:
        if kind in (int, 'int'):
            return int(raw)
        if kind in (float, 'float'):
            return float(raw)
        return str(raw).upper() if key == 'log_level' else str(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"invalid value {raw!r} for '{key}' in {source}") from None


def _read_yaml(path: Path) -> Dict[str, Any]:
    if not path.exists():
        return {}
    try:
        with open(path) as f:
            data = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse settings file {path}: {e}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"settings file {path} must contain a mapping")
    return {k: _coerce(k, v, str(path)) for k, v in data.items()}


def load_settings(env: Optional[Mapping[str, str]] = None,
                  config_path: Optional[Path] = None) -> Settings:
    """Build Settings from the YAML settings file and the environment."""
    env = os.environ if env is None else env
    if config_path is None:
        config_path = Path(env['SPINDLEKIT_CONFIG']) if env.get('SPINDLEKIT_CONFIG') else CONFIG_PATH

    values = _read_yaml(config_path)
    for env_key, field_name in ENV_KEYS.items():
        if env.get(env_key):
            values[field_name] = _coerce(field_name, env[env_key], env_key)

    try:
        return Settings(**values)
    except TypeError as e:
        raise ConfigError(str(e)) from None
