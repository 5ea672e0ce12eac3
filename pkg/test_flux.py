# test_flux.py
"""Test flux families, the x-divergence, the Killing defect and the estimate constants."""

import math

import pytest

from mclaw.errors import ConfigurationError
from mclaw.models.geometry import ChartPoint
from mclaw.services.families import (
    burgers,
    compressible,
    flat,
    killing_rotation,
    linear_advection,
    make_flux,
    shear,
)
from mclaw.services.flux import c_constants_sample, divx_at, killing_defect, u_samples


def test_divx_examples(flat_circle, flat_torus):
    """Constant fields and Burgers have zero x-divergence; sin(2 pi r) u has 2 pi cos(2 pi r) u."""
    assert divx_at(linear_advection(0.3, -1.2, dim=2), flat_torus, ChartPoint((0.2, 0.4)), 1.7) == 0.0
    for u in (-1.0, 0.0, 0.5, 2.0):
        assert divx_at(burgers(1), flat_circle, ChartPoint((0.3,)), u) == 0.0

    f = compressible("sin(2*pi*r1)")
    for r, u in ((0.1, 1.0), (0.4, -2.0), (0.75, 0.5)):
        expected = 2 * math.pi * math.cos(2 * math.pi * r) * u
        assert divx_at(f, flat_circle, ChartPoint((r,)), u) == pytest.approx(expected, abs=1e-12)
    print("✓ div^x examples")


def test_divx_finite_difference_fallback(flat_circle):
    """Without spatial Jacobians the divergence falls back to centered differences."""
    f = compressible("sin(2*pi*r1)")
    bare = type(f)(name="bare", dim=1, components=f.components, du_components=f.du_components)
    p = ChartPoint((0.1,))
    assert divx_at(bare, flat_circle, p, 1.0) == pytest.approx(divx_at(f, flat_circle, p, 1.0), rel=1e-8)


def test_divx_sees_the_volume_form(wavy):
    """Y = 1 on the wavy circle: div^x = d_1 log sqrt(g) = 2 pi cos / (2 + sin)."""
    f = linear_advection(1.0, dim=1)
    r = 0.1
    expected = 2 * math.pi * math.cos(2 * math.pi * r) / (2 + math.sin(2 * math.pi * r))
    assert divx_at(f, wavy, ChartPoint((r,)), 1.0) == pytest.approx(expected, rel=1e-10)


def test_killing_defect_examples(flat_torus, donut):
    """Constant fields and the torus rotation are Killing; the shear is not."""
    assert killing_defect(linear_advection(1.0, 2.0, dim=2), flat_torus, ChartPoint((0.3, 0.1)), 1.0) == 0.0

    f = shear(1.0)
    assert killing_defect(f, flat_torus, ChartPoint((0.4, 0.0)), 1.0) == pytest.approx(math.pi, rel=1e-12)
    assert killing_defect(f, flat_torus, ChartPoint((0.4, 0.25)), 1.0) == pytest.approx(0.0, abs=1e-12)

    rotation = killing_rotation(1.0, dim=2)
    for r in ((0.0, 0.0), (0.3, 0.2), (0.7, 0.55), (0.9, 0.8)):
        assert killing_defect(rotation, donut, ChartPoint(r), 1.0) < 1e-6
    print("✓ Killing defects")


def test_c_constants_flat_burgers(flat_circle):
    """Flat static Burgers: c2 .. c6 vanish and c7 = u_max."""
    c = c_constants_sample(burgers(1), flat_circle, 0.0, 1.5, 32)
    assert (c.c2, c.c3, c.c4, c.c5, c.c6) == (0.0, 0.0, 0.0, 0.0, 0.0)
    assert c.c7 == pytest.approx(1.5)
    assert c.sample_resolution == 32
    print(f"✓ flat Burgers constants: {c}")


def test_c_constants_dilation(shrinking_torus):
    """g = exp(-2t) I, f = 0, t = 0: c2 = 2, c3 = 0, c4 = 2, c5 = 0."""
    c = c_constants_sample(linear_advection(0.0, 0.0, dim=2), shrinking_torus, 0.0, 1.0, 8)
    assert c.c2 == pytest.approx(2.0, rel=1e-12)
    assert c.c3 == 0.0
    assert c.c4 == pytest.approx(2.0, rel=1e-12)
    assert c.c5 == pytest.approx(0.0, abs=1e-9)
    assert c.c7 == 0.0


def test_c_constants_shear(flat_torus):
    """Shear with u_max = 1: c4 = pi up to the sampling of cos(2 pi r2)."""
    c = c_constants_sample(shear(1.0), flat_torus, 0.0, 1.0, 64)
    assert c.c4 == pytest.approx(math.pi, rel=2e-3)
    assert c.c6 == pytest.approx(0.0, abs=1e-12)  # divergence free


def test_u_samples_include_breakpoints():
    """Inflection points of the profile inside [-u_max, u_max] are sampled."""
    f = make_flux("burgers", [], 1, profile="u**3/3 - u")
    assert f.u_breakpoints == (0.0,)
    samples = u_samples(f, 1.0, count=4)
    assert 0.0 in samples
    assert samples.min() == -1.0 and samples.max() == 1.0


def test_make_flux_errors():
    """Unknown families list the available ones; wrong parameter counts are rejected."""
    with pytest.raises(ConfigurationError, match="available: burgers"):
        make_flux("burger", [], 1)
    with pytest.raises(ConfigurationError):
        make_flux("linear_advection", [1.0], 2)
    with pytest.raises(ConfigurationError):
        make_flux("shear", [1.0], 1)


def test_flat_metric_builder():
    m = flat(2)
    assert m.static and m.dim == 2


if __name__ == "__main__":
    from mclaw.services.families import flat as flat_metric, torus_of_revolution

    test_divx_examples(flat_metric(1), flat_metric(2))
    test_killing_defect_examples(flat_metric(2), torus_of_revolution(2.0, 1.0))
    test_c_constants_flat_burgers(flat_metric(1))
    print("\n✓ All tests passed!")
