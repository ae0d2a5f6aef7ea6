import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from diskeit.errors import ConfigurationError, DataError, FluxError
from diskeit.fields import constant, radial_test, sigma_exact
from diskeit.forward import CauchyData, CurrentPattern, add_noise, fd_oracle, solve_forward
from diskeit.quadrature import BoundaryFunction, build_disk_rule


def radial_trace(amplitude=1.0, sharpness=5.0, n=256):
    """Boundary trace for ``σ = 1 + a e^{-s r²}``, ``j = sin θ``, by shooting."""
    sig = lambda r: 1 + amplitude * np.exp(-sharpness * r * r)  # noqa: E731
    dsig = lambda r: -2 * sharpness * r * amplitude * np.exp(-sharpness * r * r)  # noqa: E731

    def rhs(r, u):
        f, fp = u
        return [fp, -fp / r - dsig(r) / sig(r) * fp + f / r ** 2]

    r0 = 1e-6
    s = solve_ivp(rhs, (r0, 1.0), [r0, 1.0], rtol=1e-12, atol=1e-14)
    f1, fp1 = s.y[:, -1]
    th = 2 * np.pi * np.arange(n) / n
    return f1 / (sig(1.0) * fp1) * np.sin(th)


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_unit_conductivity_trace(small_rule, m):
    sol = solve_forward(constant(1.0), CurrentPattern(m), small_rule)
    assert sol.data.phi_trace.values == pytest.approx(np.sin(m * sol.data.angles) / m, abs=1e-12)
    assert np.all(sol.Y.values == 0)


def test_constant_conductivity_scales_trace(small_rule):
    sol = solve_forward(constant(2.5), CurrentPattern(2), small_rule)
    assert sol.data.phi_trace.values == pytest.approx(np.sin(2 * sol.data.angles) / 5, abs=1e-12)


def test_radial_case_matches_ode(rule):
    sol = solve_forward(radial_test(), CurrentPattern(1), rule)
    assert sol.data.phi_trace.values == pytest.approx(radial_trace(), abs=1e-9)


def test_fd_oracle_converges_at_second_order():
    exact = radial_trace()
    e64 = np.max(np.abs(fd_oracle(radial_test(), CurrentPattern(1), 64).values - exact))
    e128 = np.max(np.abs(fd_oracle(radial_test(), CurrentPattern(1), 128).values - exact))
    assert 3.0 < e64 / e128 < 5.0


def test_agrees_with_fd_oracle(exact_m1):
    ref = fd_oracle(sigma_exact(), CurrentPattern(1), 128).values
    got = exact_m1.data.phi_trace.values
    assert np.linalg.norm(got - ref) / np.linalg.norm(ref) < 2e-2


def test_nystrom_refinement_converges():
    exact = radial_trace()
    errs = [np.max(np.abs(solve_forward(radial_test(), CurrentPattern(1),
                                        build_disk_rule(nr, 4 * nr)).data.phi_trace.values - exact))
            for nr in (8, 12, 16)]
    assert errs[0] > errs[1] > errs[2]


def test_gauge_and_field_consistency(exact_m1):
    assert abs(exact_m1.data.phi_trace.mean()) < 1e-14
    # Φ on the circle from the interior representation equals the trace
    n = exact_m1.data.phi_trace.n
    assert exact_m1.Phi.on_grid(np.array([1.0]), n)[0] == pytest.approx(
        exact_m1.data.phi_trace.values, abs=1e-12)
    # Y at the nodes agrees with Y from the potential gradient
    r = exact_m1.Y.rule
    assert exact_m1.Y.on_grid(r.radii, r.n_angular).ravel() == pytest.approx(exact_m1.Y.values, abs=1e-8)


def test_current_validation():
    with pytest.raises(ConfigurationError):
        CurrentPattern(0)
    with pytest.raises(FluxError):
        CurrentPattern(None, BoundaryFunction(1 + np.sin(np.arange(16)))).current(16)
    with pytest.raises(DataError):
        CauchyData(BoundaryFunction(np.ones(8)), BoundaryFunction(np.zeros(8)),
                   BoundaryFunction(-np.ones(8)))
    with pytest.raises(ConfigurationError):
        fd_oracle(constant(), CurrentPattern(1), 32)


@given(level=st.floats(0.001, 0.2), seed=st.integers(0, 2 ** 31))
def test_noise_properties(small_rule, level, seed):
    data = solve_forward(constant(1.0), CurrentPattern(1), small_rule, 64).data
    a = add_noise(data, level, seed)
    b = add_noise(data, level, seed)
    assert np.array_equal(a.phi_trace.values, b.phi_trace.values)
    rel = np.abs(a.phi_trace.values - data.phi_trace.values)
    assert np.all(rel <= level * np.abs(data.phi_trace.values) + 1e-15)
    assert a.noise_level == level and a.seed == seed
    assert np.array_equal(add_noise(data, 0.0, seed).phi_trace.values, data.phi_trace.values)


def test_negative_noise_rejected(small_rule):
    data = solve_forward(constant(1.0), CurrentPattern(1), small_rule, 32).data
    with pytest.raises(ConfigurationError):
        add_noise(data, -0.1, 0)
