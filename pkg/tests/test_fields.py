import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from diskeit.errors import ConfigurationError
from diskeit.fields import (AlphaBinding, BumpSpec, ConductivityModel, bind_alpha, constant,
                            grad_log_sigma, log_sigma, notch_family, notch_target, radial_test,
                            sigma_exact, sigma_mod)
from diskeit.inversion import relative_error

point = st.tuples(st.floats(-0.7, 0.7), st.floats(-0.7, 0.7))


@pytest.mark.parametrize("model", [sigma_exact(), sigma_mod(), radial_test(),
                                   notch_target(), notch_family()], ids=lambda m: m.name)
@given(p=point)
def test_gradient_matches_finite_differences(model, p):
    x, y = p
    h = 1e-6
    gx, gy = grad_log_sigma(model, x, y)
    fx = (log_sigma(model, x + h, y) - log_sigma(model, x - h, y)) / (2 * h)
    fy = (log_sigma(model, x, y + h) - log_sigma(model, x, y - h)) / (2 * h)
    scale = 1 + abs(fx) + abs(fy)
    assert gx == pytest.approx(fx, abs=1e-5 * scale)
    assert gy == pytest.approx(fy, abs=1e-5 * scale)


def test_catalog_extrema():
    s = sigma_exact()
    assert s(-0.1, 0.3) == pytest.approx(2.0, abs=1e-6)
    assert s(0.5, 0.2) == pytest.approx(0.5, abs=1e-6)
    assert s(0.0, -0.9) == pytest.approx(1.0, abs=1e-6)
    assert radial_test()(0.0, 0.0) == pytest.approx(2.0)
    assert constant(3.0)(0.2, 0.1) == 3.0 and constant(3.0).is_constant


def test_model_distance_near_published_value(rule):
    assert relative_error(sigma_mod(), sigma_exact(), rule) == pytest.approx(0.29, abs=0.02)


def test_validation():
    with pytest.raises(ConfigurationError):
        BumpSpec(1.0, (0, 0), -1.0)
    with pytest.raises(ConfigurationError):
        BumpSpec(1.0, (0, 0), 1.0, exponent=4)
    with pytest.raises(ConfigurationError):
        BumpSpec(1.0, (0, 0), 1.0, profile="box")
    with pytest.raises(ConfigurationError):
        ConductivityModel(0.0)
    with pytest.raises(ConfigurationError, match="not positive"):
        ConductivityModel(1.0, (BumpSpec(-1.5, (0, 0), 10.0),))
    with pytest.raises(ConfigurationError):
        ConductivityModel(1.0, (), AlphaBinding((0,)))


@given(alpha=st.floats(-0.5, 0.5))
def test_bind_alpha_translates_bound_bumps(alpha):
    fam = notch_family(-0.3, 1500.0)
    m = bind_alpha(fam, alpha)
    assert m.alpha_binding is None
    assert m(alpha, -0.3) == pytest.approx(2.0)
    assert m.bumps[0].center == pytest.approx((alpha, -0.3))


def test_bind_alpha_requires_binding():
    with pytest.raises(ConfigurationError, match="no alpha binding"):
        bind_alpha(sigma_exact(), 0.1)
