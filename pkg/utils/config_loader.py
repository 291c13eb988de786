import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

from utils.errors import ConfigError

ROOT_DIR = Path(__file__).resolve().parent.parent
DEFAULT_CONFIG = ROOT_DIR / "config.yaml"

REQUIRED_SECTIONS = ('numerics', 'quadrature', 'expapprox', 'construct',
                     'solver', 'hierarchy', 'oracle', 'output', 'logging')
KNOWN_BACKENDS = ("cvxpy", "clarabel", "scs")

# environment variable -> (dot key, converter)
ENV_OVERRIDES = {
    "PKL_SOLVER_TOL": ("solver.tolerance", float),
    "PKL_SOLVER_BACKEND": ("solver.backend", str),
}

_MISSING = object()


class ConfigLoader:
    """Process-wide view of config.yaml with PKL_* environment overrides"""
    _instance = None
    _config = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(ConfigLoader, cls).__new__(cls)
        return cls._instance

    def __init__(self):
        if self._config is None:
            self.load_config()

    def load_config(self, config_path: Optional[str] = None) -> Dict[str, Any]:
        """
        Load configuration from YAML, apply environment overrides, validate

        Args:
            config_path: YAML file; the repository's config.yaml if omitted

        Returns:
            The loaded configuration dictionary
        """
        config_file = Path(config_path) if config_path else DEFAULT_CONFIG
        if not config_file.exists():
            raise ConfigError(f"Configuration file not found: {config_file}")

        try:
            with open(config_file, 'r', encoding='utf-8') as f:
                loaded = yaml.safe_load(f)
        except (OSError, yaml.YAMLError) as e:
            raise ConfigError(f"Failed to read {config_file}: {e}") from e
        if not isinstance(loaded, dict):
            raise ConfigError(f"{config_file} does not contain a mapping")

        previous, self._config = self._config, loaded
        try:
            self._apply_env_overrides()
            self._validate_config()
        except ConfigError:
            self._config = previous
            raise
        self.source = config_file
        self._create_directories()
        return self._config

    def _apply_env_overrides(self):
        load_dotenv()
        for var, (key, convert) in ENV_OVERRIDES.items():
            raw = os.environ.get(var)
            if not raw:
                continue
            try:
                self.update(key, convert(raw))
            except ValueError as e:
                raise ConfigError(f"{var}={raw!r} is not valid for {key}") from e

    def _validate_config(self):
        missing = [s for s in REQUIRED_SECTIONS if s not in self._config]
        if missing:
            raise ConfigError(f"Required configuration sections missing: {', '.join(missing)}")

        solver = self._config['solver']
        if float(solver.get('tolerance', 0)) <= 0:
            raise ConfigError("solver.tolerance must be positive")
        if str(solver.get('backend', '')).lower() not in KNOWN_BACKENDS:
            raise ConfigError(f"Unknown solver backend '{solver.get('backend')}', "
                              f"expected one of {KNOWN_BACKENDS}")
        if float(self._config['numerics'].get('residual_tol', 0)) <= 0:
            raise ConfigError("numerics.residual_tol must be positive")

        for name in ('univariate', 'multivariate'):
            profile = self._config['construct'].get(name)
            if not isinstance(profile, dict):
                raise ConfigError(f"construct.{name} is missing")
            if not (profile.get('sigma', 0) > 0 and 0 < profile.get('delta', 0) < 1
                    and profile.get('R', 0) >= 1):
                raise ConfigError(f"construct.{name} needs sigma > 0, 0 < delta < 1, R >= 1")

    def _create_directories(self):
        for dir_path in (self._config['output'].get('dir'),
                         os.path.dirname(self._config['logging'].get('file', ''))):
            if dir_path:
                Path(dir_path).mkdir(parents=True, exist_ok=True)

    def get(self, key: str, default: Any = None) -> Any:
        """Value at a dot-notation key (e.g. 'solver.tolerance'), or default"""
        if self._config is None:
            self.load_config()

        node = self._config
        for part in key.split('.'):
            node = node.get(part, _MISSING) if isinstance(node, dict) else _MISSING
            if node is _MISSING:
                return default
        return node

    def get_section(self, section: str) -> Dict[str, Any]:
        if self._config is None:
            self.load_config()
        return self._config.get(section, {})

    def update(self, key: str, value: Any):
        """Set a value at runtime (not written back to the file)"""
        *parents, leaf = key.split('.')
        node = self._config
        for part in parents:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"cannot set '{key}': '{part}' is not a section")
        node[leaf] = value

    @property
    def config(self) -> Dict[str, Any]:
        if self._config is None:
            self.load_config()
        return self._config


# Singleton instance
config_loader = ConfigLoader()
