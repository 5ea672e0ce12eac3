# test_oracle.py
"""Test the characteristics oracle against closed-form and implicit solutions."""

import math

import numpy as np
import pytest

from mclaw.errors import OracleError
from mclaw.models.geometry import ChartPoint
from mclaw.services import grid
from mclaw.services.families import initial_data, linear_advection
from mclaw.services.oracle import characteristics_oracle, characteristics_solution, oracle_cell_averages


def _implicit_burgers(amp: float, r: float, t: float) -> float:
    """Fixed point of u = amp sin(2 pi (r - u t)); a contraction while 2 pi amp t < 1."""
    u = 0.0
    for _ in range(200):
        u = amp * math.sin(2 * math.pi * (r - u * t))
    return u


def test_expanding_circle_closed_form(growing_circle, zero_flux_1d):
    """f = 0 on a circle of radius 1 + t: u(r, t) = u0(r) / (1 + t)."""
    u0 = initial_data("sin(2*pi*r1)", 1)
    for r in (0.1, 0.3, 0.8):
        value = characteristics_oracle(u0, zero_flux_1d, growing_circle, ChartPoint((r,)), 1.0)
        assert value == pytest.approx(math.sin(2 * math.pi * r) / 2.0, rel=1e-9)
    print("✓ oracle reproduces u0 / (1 + t)")


def test_burgers_implicit_solution(flat_circle, burgers_1d):
    """Smooth Burgers data at t = 0.5 matches the implicit formula to 1e-9."""
    u0 = initial_data("0.1*sin(2*pi*r1)", 1)
    points = np.linspace(0.0, 1.0, 9, endpoint=False)[:, None]
    values = characteristics_solution(u0, burgers_1d, flat_circle, points, 0.5)
    expected = [_implicit_burgers(0.1, float(r), 0.5) for r in points[:, 0]]
    assert np.allclose(values, expected, atol=1e-9)
    print("✓ oracle matches the implicit Burgers solution")


def test_linear_translation(flat_circle):
    u0 = initial_data("sin(2*pi*r1)", 1)
    flux = linear_advection(0.3, dim=1)
    value = characteristics_oracle(u0, flux, flat_circle, ChartPoint((0.4,)), 0.5)
    assert value == pytest.approx(math.sin(2 * math.pi * (0.4 - 0.15)), abs=1e-10)


def test_translation_on_the_torus(flat_torus):
    u0 = initial_data("sin(2*pi*r1)*cos(2*pi*r2)", 2)
    flux = linear_advection(0.5, -0.25, dim=2)
    value = characteristics_oracle(u0, flux, flat_torus, ChartPoint((0.3, 0.7)), 0.4)
    expected = math.sin(2 * math.pi * (0.3 - 0.2)) * math.cos(2 * math.pi * (0.7 + 0.1))
    assert value == pytest.approx(expected, abs=1e-10)


def test_zero_time_returns_initial_data(flat_circle, burgers_1d):
    u0 = initial_data("sin(2*pi*r1)", 1)
    assert characteristics_oracle(u0, burgers_1d, flat_circle, ChartPoint((0.1,)), 0.0) == pytest.approx(
        math.sin(0.2 * math.pi)
    )


def test_after_the_shock_raises(flat_circle, burgers_1d):
    """sin(2 pi r) steepens into a shock at t = 1/(2 pi); at t = 0.5 characteristics have crossed at r = 1/2."""
    u0 = initial_data("sin(2*pi*r1)", 1)
    with pytest.raises(OracleError):
        characteristics_oracle(u0, burgers_1d, flat_circle, ChartPoint((0.5,)), 0.5)


def test_cell_averages_of_the_oracle(growing_circle, zero_flux_1d):
    """Cell averages of u0 / (1 + t) are the initial averages over 1 + t."""
    cells = grid.build(1, 16)
    u0 = initial_data("sin(2*pi*r1)", 1)
    averages = oracle_cell_averages(u0, zero_flux_1d, growing_circle, cells, 1.0)
    initial = grid.cell_average(cells, growing_circle, 0.0, u0)
    assert np.allclose(averages, initial / 2.0, atol=1e-10)


def test_stationary_flux_skips_the_foot_point_search(shrinking_torus, zero_flux_1d, burgers_1d):
    """Zero flux on g = exp(-2t) I: u = u0 e^{2t}, cell averages scale the same way."""
    assert zero_flux_1d.stationary and not burgers_1d.stationary
    flux = linear_advection(0.0, 0.0, dim=2)
    assert flux.stationary
    cells = grid.build(2, 4)
    u0 = initial_data("sin(2*pi*r1)*cos(2*pi*r2) + 0.5", 2)
    averages = oracle_cell_averages(u0, flux, shrinking_torus, cells, 0.5)
    initial = grid.cell_average(cells, shrinking_torus, 0.0, u0)
    assert np.allclose(averages, initial * math.e, atol=1e-9)


if __name__ == "__main__":
    from mclaw.services.families import burgers, expanding_circle, flat

    test_expanding_circle_closed_form(expanding_circle(1.0, 1.0), linear_advection(0.0))
    test_burgers_implicit_solution(flat(1), burgers(1))
    print("\n✓ All tests passed!")
