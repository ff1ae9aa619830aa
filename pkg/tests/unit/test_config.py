"""Unit tests for configuration loading."""

import pytest

from app.config import CONFIG_ENV, SEED_ENV, Config, ConfigError


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    monkeypatch.delenv(SEED_ENV, raising=False)
    monkeypatch.delenv(CONFIG_ENV, raising=False)


@pytest.fixture
def empty_config(tmp_path):
    return Config(str(tmp_path / "missing.yaml"))


class TestDefaults:
    """Test values used when no file exists."""

    def test_search_defaults(self, empty_config):
        assert empty_config.element_bound == 8
        assert empty_config.product_bound == 24
        assert empty_config.max_power == 8
        assert empty_config.node_budget == 200_000

    def test_run_defaults(self, empty_config):
        assert empty_config.seed == 20240501
        assert empty_config.workers == 1
        assert empty_config.report_format == 'text'
        assert empty_config.catalog_path is None

    def test_server_defaults(self, empty_config):
        assert empty_config.server_host == '0.0.0.0'
        assert empty_config.server_port == 5000
        assert empty_config.max_api_bound == 16

    def test_family_defaults(self, empty_config):
        assert empty_config.family_defaults() == {'ladder': {'level_cap': 8, 'divisor_depth': 2}}


class TestLoading:
    """Test reading YAML files."""

    def test_values_from_file(self, config_file):
        config = Config(config_file("""
search:
  element_bound: 5
  product_factor: 2
report:
  format: structured
ladder:
  level_cap: 4
"""))
        assert config.element_bound == 5
        assert config.product_bound == 10
        assert config.report_format == 'structured'
        assert config.family_defaults()['ladder']['level_cap'] == 4

    def test_path_from_environment(self, config_file, monkeypatch):
        monkeypatch.setenv(CONFIG_ENV, config_file("run:\n  workers: 3\n"))
        assert Config().workers == 3

    def test_dotted_get(self, config_file):
        config = Config(config_file("search:\n  element_bound: 5\n"))
        assert config.get('search.missing', 3) == 3
        assert config.get('search.element_bound.deeper', 'd') == 'd'

    def test_empty_file(self, config_file):
        assert Config(config_file("")).data == {}


class TestErrors:
    """Test rejected configuration."""

    @pytest.mark.parametrize("text", ["a: [1, 2", "- a\n- b\n"])
    def test_unreadable_file(self, config_file, text):
        with pytest.raises(ConfigError):
            Config(config_file(text))

    @pytest.mark.parametrize("text,prop", [
        ("search:\n  element_bound: -1\n", 'element_bound'),
        ("search:\n  element_bound: true\n", 'element_bound'),
        ("search:\n  max_power: 1\n", 'max_power'),
        ("run:\n  workers: many\n", 'workers'),
        ("report:\n  format: xml\n", 'report_format'),
    ])
    def test_ill_typed_values(self, config_file, text, prop):
        config = Config(config_file(text))
        with pytest.raises(ConfigError):
            getattr(config, prop)


class TestSeed:
    """Test the environment override of the sampling seed."""

    def test_environment_wins(self, config_file, monkeypatch):
        monkeypatch.setenv(SEED_ENV, "42")
        assert Config(config_file("run:\n  seed: 7\n")).seed == 42

    def test_negative_seed_wraps(self, empty_config, monkeypatch):
        monkeypatch.setenv(SEED_ENV, "-1")
        assert empty_config.seed == (1 << 64) - 1

    def test_invalid_seed(self, empty_config, monkeypatch):
        monkeypatch.setenv(SEED_ENV, "abc")
        with pytest.raises(ConfigError):
            empty_config.seed
