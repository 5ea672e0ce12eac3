# conftest.py
"""Shared fixtures: small grids and the built-in families the tests use."""

import pytest

from mclaw.config import get_settings
from mclaw.services import grid
from mclaw.services.families import (
    burgers,
    dilation,
    expanding_circle,
    flat,
    linear_advection,
    torus_of_revolution,
    wavy_circle,
)


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch, tmp_path):
    """Results go to a temporary directory; settings are rebuilt per test."""
    monkeypatch.setenv("MCLAW_OUTPUT_DIR", str(tmp_path / "results"))
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def flat_circle():
    return flat(1)


@pytest.fixture
def flat_torus():
    return flat(2)


@pytest.fixture
def growing_circle():
    """Radius 1 + t."""
    return expanding_circle(1.0, 1.0)


@pytest.fixture
def shrinking_torus():
    """g = exp(-2t) I."""
    return dilation(1.0, 1.0)


@pytest.fixture
def wavy():
    return wavy_circle(1.0)


@pytest.fixture
def donut():
    return torus_of_revolution(2.0, 1.0)


@pytest.fixture
def burgers_1d():
    return burgers(1)


@pytest.fixture
def zero_flux_1d():
    return linear_advection(0.0, dim=1)


@pytest.fixture
def circle_64():
    return grid.build(1, 64)
