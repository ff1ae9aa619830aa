"""Configuration management."""

import os
from typing import Any

import yaml

from app.kernel import MonoidError

CONFIG_ENV = 'SQFREE_CONFIG'
SEED_ENV = 'SQFREE_SEED'


class ConfigError(MonoidError):
    """Raised for unreadable or ill-typed configuration."""


class Config:
    """Lab configuration."""

    def __init__(self, config_path: str | None = None):
        self.config_path = config_path or os.environ.get(CONFIG_ENV, 'config.yaml')
        self.data: dict[str, Any] = {}
        self.load()

    def load(self):
        """Load configuration from YAML file."""
        if os.path.exists(self.config_path):
            try:
                with open(self.config_path) as f:
                    self.data = yaml.safe_load(f) or {}
            except yaml.YAMLError as e:
                raise ConfigError(f"{self.config_path}: {e}") from e
            if not isinstance(self.data, dict):
                raise ConfigError(f"{self.config_path}: top level must be a mapping")
        else:
            self.data = {}

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value."""
        keys = key.split('.')
        value = self.data
        for k in keys:
            if isinstance(value, dict):
                value = value.get(k)
            else:
                return default
            if value is None:
                return default
        return value

    def _int(self, key: str, default: int, minimum: int = 0) -> int:
        value = self.get(key, default)
        if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
            raise ConfigError(f"{key} must be an integer of at least {minimum}, got {value!r}")
        return value

    # Search bounds
    @property
    def element_bound(self) -> int:
        """Get the default norm bound for quantified elements."""
        return self._int('search.element_bound', 8)

    @property
    def product_factor(self) -> int:
        """Get the product bound as a multiple of the element bound."""
        return self._int('search.product_factor', 3, minimum=1)

    @property
    def product_bound(self) -> int:
        return self.element_bound * self.product_factor

    @property
    def max_power(self) -> int:
        return self._int('search.max_power', 8, minimum=2)

    @property
    def node_budget(self) -> int:
        """Get the node limit for generic factorization search."""
        return self._int('search.node_budget', 200_000, minimum=1)

    # Ladder family
    @property
    def level_cap(self) -> int:
        return self._int('ladder.level_cap', 8, minimum=2)

    @property
    def divisor_depth(self) -> int:
        return self._int('ladder.divisor_depth', 2)

    def family_defaults(self) -> dict[str, dict[str, Any]]:
        """Parameters applied to specs that leave them out."""
        return {'ladder': {'level_cap': self.level_cap, 'divisor_depth': self.divisor_depth}}

    # Reports
    @property
    def report_format(self) -> str:
        """Get default report format."""
        value = self.get('report.format', 'text')
        if value not in ('text', 'structured'):
            raise ConfigError(f"report.format must be 'text' or 'structured', got {value!r}")
        return value

    @property
    def report_dir(self) -> str:
        return self.get('report.out_dir', 'reports')

    # Run settings
    @property
    def seed(self) -> int:
        """Get sampling seed; the environment overrides the file."""
        env = os.environ.get(SEED_ENV)
        if env is not None:
            try:
                return int(env) & ((1 << 64) - 1)
            except ValueError as e:
                raise ConfigError(f"{SEED_ENV} must be an integer, got {env!r}") from e
        return self._int('run.seed', 20240501)

    @property
    def workers(self) -> int:
        return self._int('run.workers', 1, minimum=1)

    @property
    def catalog_path(self) -> str | None:
        """Get catalog file path (None means the bundled catalog)."""
        return self.get('catalog.path')

    # API server
    @property
    def server_host(self) -> str:
        """Get Flask server host."""
        return self.get('server.host', '0.0.0.0')

    @property
    def server_port(self) -> int:
        """Get Flask server port."""
        return self._int('server.port', 5000, minimum=1)

    @property
    def max_api_bound(self) -> int:
        """Get the largest bound the HTTP API accepts."""
        return self._int('server.max_bound', 16, minimum=1)
