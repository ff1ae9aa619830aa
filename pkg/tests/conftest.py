"""Pytest configuration and shared fixtures."""

import os

import pytest

from app.api import app as flask_app
from app.families import build, realize
from app.submonoid import SubmonoidContext

SPECS_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'specs')

EX42 = "affine rank=3 gens=[(1,1,0),(1,0,1)]"


@pytest.fixture
def app():
    """Create Flask app for testing."""
    flask_app.config.update({
        "TESTING": True,
    })
    yield flask_app


@pytest.fixture
def client(app):
    """Create Flask test client."""
    return app.test_client()


@pytest.fixture
def spec_path():
    """Path of a bundled spec file."""
    def path(name):
        return os.path.join(SPECS_DIR, name)
    return path


@pytest.fixture
def free3():
    """N^3."""
    return realize(build("free_commutative rank=3"))


@pytest.fixture
def nge2():
    """Every natural number except 1."""
    return realize(build("shifted_numerical threshold=2"))


@pytest.fixture
def ladder11():
    return realize(build("ladder p=1 q=1 level_cap=8"))


@pytest.fixture
def ladder12():
    return realize(build("ladder p=1 q=2 level_cap=8"))


@pytest.fixture
def rationals():
    return realize(build("nonneg_rationals"))


@pytest.fixture
def ex42_ctx():
    """M = <(1,1,0), (1,0,1)> inside N^3."""
    return SubmonoidContext.from_spec(EX42, element_bound=6, product_bound=18)


@pytest.fixture
def config_file(tmp_path):
    """Write a YAML config file and return its path."""
    def write(text):
        path = tmp_path / "config.yaml"
        path.write_text(text)
        return str(path)
    return write
