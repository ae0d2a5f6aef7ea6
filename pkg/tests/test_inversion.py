import numpy as np
import pytest

from diskeit.basis import eigen_norm, eigenfunction, eigenvalue
from diskeit.errors import ConfigurationError, FluxError, ReconstructionError
from diskeit.fields import constant, radial_test, sigma_exact, sigma_mod
from diskeit.forward import CauchyData, CurrentPattern, InteriorField, solve_forward
from diskeit.inversion import (InversionConfig, PolarGrid, PolarInterpolant, PotentialField,
                               Termination, TikhonovProblem, apply_K, build_chi, choose_lambda,
                               model_source, project, rasterize_sigma, reconstruct,
                               reconstruct_potential, tikhonov_solve, trace_characteristics)
from diskeit.nullspace import NullModeSpec, invisible_potential, null_field
from diskeit.quadrature import BoundaryFunction


def zero_data(n=64):
    z = BoundaryFunction(np.zeros(n))
    return CauchyData(z, z, BoundaryFunction(np.ones(n)))


@pytest.fixture(scope="module")
def unit_data(rule):
    return solve_forward(constant(1.0), CurrentPattern(1), rule).data


@pytest.fixture(scope="module")
def radial_solution(rule):
    return solve_forward(radial_test(), CurrentPattern(1), rule)


@pytest.fixture(scope="module")
def benchmark_problem(rule, exact_m1):
    chi = build_chi(exact_m1.data, rule)
    return TikhonovProblem(chi, model_source(sigma_mod(), chi))


# --- χ -----------------------------------------------------------------------

def test_chi_vanishes_for_unit_conductivity(rule, unit_data):
    chi = build_chi(unit_data, rule)
    assert np.max(np.abs(chi.chi.values)) < 1e-12
    D = chi.chi_D(rule.radii, rule.n_angular)
    assert D.ravel() == pytest.approx(rule.r * np.sin(rule.theta), abs=1e-12)


def test_chi_of_constant_potential(rule):
    n = 32
    data = CauchyData(BoundaryFunction(np.ones(n)), BoundaryFunction(np.zeros(n)),
                      BoundaryFunction(np.ones(n)))
    chi = build_chi(data, rule)
    assert chi.C == pytest.approx(2 * np.pi)
    assert chi.chi_D(rule.radii, 8) == pytest.approx(1.0)
    assert chi.chi_N(rule.radii, 8) == pytest.approx(1.0)
    assert np.max(np.abs(chi.chi.values)) < 1e-14


def test_chi_equals_K_of_true_source(rule, exact_m1):
    chi = build_chi(exact_m1.data, rule)
    KY = apply_K(exact_m1.Y.values, rule)
    assert rule.norm(chi.chi.values - KY) / rule.norm(KY) < 1e-6
    assert rule.norm(chi.chi.values) > 1e-3


def test_chi_rejects_net_flux(rule):
    n = 16
    data = CauchyData(BoundaryFunction(np.zeros(n)), BoundaryFunction(np.ones(n)),
                      BoundaryFunction(np.ones(n)))
    with pytest.raises(FluxError):
        build_chi(data, rule)


# --- projection --------------------------------------------------------------

def test_project_eigenfunction(rule):
    u = InteriorField(eigenfunction(3, 1, rule.r, rule.theta), rule)
    c = project(u, 10).coeffs
    expect = np.zeros((10, 2))
    expect[2, 0] = 1.0
    assert c == pytest.approx(expect, abs=1e-13)
    assert project(InteriorField(np.zeros(rule.size), rule), 5).tail_ratio == 0.0


def test_project_null_source_and_warnings(rule):
    Y = null_field(NullModeSpec.random(3, np.random.default_rng(1)), rule)
    with pytest.warns(RuntimeWarning, match="radial exactness"):
        c = project(Y, 40)
    assert np.max(np.abs(c.coeffs)) < 1e-12
    assert c.warnings
    with pytest.raises(ConfigurationError):
        project(Y, 0)


# --- Tikhonov ----------------------------------------------------------------

def test_lambda_zero_returns_model(benchmark_problem):
    Y = benchmark_problem.solve(0.0)
    assert np.array_equal(Y.values, benchmark_problem.Y_mod.values)
    with pytest.raises(ConfigurationError):
        benchmark_problem.correction(-1.0)


def test_fixed_point_for_consistent_model(rule, unit_data, radial_solution):
    chi = build_chi(unit_data, rule)
    Y0 = model_source(constant(1.0), chi)
    for lam in (1e-3, 1.0, 1e4):
        assert np.max(np.abs(tikhonov_solve(chi, Y0, lam).values)) < 1e-12
    chi = build_chi(radial_solution.data, rule)
    Y_mod = model_source(radial_test(), chi)
    assert rule.norm(Y_mod.values - radial_solution.Y.values) < 1e-8
    problem = TikhonovProblem(chi, Y_mod)
    for lam in (1e-2, 1.0, 1e2, 1e4):
        assert problem.discrepancy(lam) < 1e-8


def test_large_lambda_limit(benchmark_problem):
    lam = 1e8
    Y = benchmark_problem.solve(lam)
    c = benchmark_problem.E[:5] @ (benchmark_problem.rule.weights * Y.values)
    target = eigenvalue(np.arange(1, 6))[:, None] * benchmark_problem.chi_k[:5]
    assert np.max(np.abs(c - target)) < 1e-3 * np.max(np.abs(target))


def test_solution_evaluator_matches_nodes(benchmark_problem):
    Y = benchmark_problem.solve(30.0)
    r = benchmark_problem.rule
    assert Y.on_grid(r.radii, r.n_angular).ravel() == pytest.approx(Y.values, abs=1e-6)


def test_discrepancy_and_residual_are_monotone(benchmark_problem):
    lams = np.logspace(-4, 8, 20)
    d = np.array([benchmark_problem.discrepancy(l) for l in lams])
    e = np.array([benchmark_problem.residual(l) for l in lams])
    assert np.all(np.diff(d) >= -1e-12 * d.max())
    assert np.all(np.diff(e) <= 1e-12 * e.max())
    assert np.all(e >= 0)


def test_choose_lambda_contract(benchmark_problem):
    d_inf = benchmark_problem.discrepancy(1e12)
    delta = 0.3 * d_inf
    choice = choose_lambda(benchmark_problem, delta)
    assert not choice.saturated
    assert choice.discrepancy == pytest.approx(delta, rel=1e-6)
    sat = choose_lambda(benchmark_problem, 2 * d_inf)
    assert sat.saturated and sat.value == 1e12
    with pytest.raises(ConfigurationError):
        choose_lambda(benchmark_problem, 0.0)


def test_null_space_insensitivity(rule, benchmark_problem):
    N = null_field(NullModeSpec.random(4, np.random.default_rng(11)), rule)
    shifted = TikhonovProblem(benchmark_problem.chi, benchmark_problem.Y_mod + N)
    for lam in (0.1, 10.0, 1e3):
        a = benchmark_problem.residual(lam)
        assert shifted.residual(lam) == pytest.approx(a, rel=1e-10, abs=1e-14)
        assert shifted.correction(lam) == pytest.approx(benchmark_problem.correction(lam), abs=1e-10)


# --- potential and characteristics --------------------------------------------

@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_dirichlet_potential_of_eigenfunction(rule, k):
    chi = build_chi(zero_data(), rule)
    Y = InteriorField(eigenfunction(k, 1, rule.r, rule.theta), rule)
    grid = PolarGrid(16, 32)
    pot = reconstruct_potential(chi, Y, grid)
    r, t = grid.radii[:, None], grid.angles[None, :]
    exact = eigen_norm(k) * (r ** k - r ** (k + 2)) / (4 * (k + 1)) * np.cos(k * t)
    assert pot.values == pytest.approx(exact, abs=1e-6)


def test_unit_conductivity_pipeline(unit_data):
    res = reconstruct(unit_data, constant(1.0), InversionConfig(), truth=constant(1.0))
    g = res.potential.grid
    exact = g.radii[:, None] * np.sin(g.angles)[None, :]
    assert np.max(np.abs(res.potential.values - exact)) < 1e-6
    assert res.lam == 0.0 and res.epsilon0 < 1e-12
    assert res.rel_error == pytest.approx(0.0, abs=1e-12)
    # characteristics are vertical chords carrying σ̃ = 0
    for c in res.curves:
        s0 = np.sin(c.seed_angle)
        if abs(s0) < 1e-9:
            assert c.termination is Termination.GRADIENT_VANISHED and c.empty
            continue
        assert c.termination is Termination.EXITED_DOMAIN
        assert c.direction == (1 if s0 < 0 else -1)
        assert np.max(np.abs(c.xy[:, 0] - np.cos(c.seed_angle))) < 1e-6
        assert c.xy[-1, 1] == pytest.approx(-s0, abs=1e-6)
        assert np.max(np.abs(c.sigma_tilde)) < 1e-12
        assert np.all(np.diff(c.arclength) > 0)


def test_constant_recovery(rule):
    data = solve_forward(constant(2.0), CurrentPattern(2), rule).data
    res = reconstruct(data, constant(2.0), truth=constant(2.0))
    inside = np.isfinite(res.sigma_grid)
    assert np.max(np.abs(res.sigma_grid[inside] - 2.0)) < 1e-6
    assert res.rel_error < 1e-6


def test_radial_log_conductivity_along_characteristics(radial_solution):
    res = reconstruct(radial_solution.data, radial_test(), InversionConfig(delta_factor=0.01))
    model = radial_test()
    worst = 0.0
    for c in res.curves:
        if c.empty:
            continue
        truth = np.log(model(c.xy[:, 0], c.xy[:, 1]))
        worst = max(worst, float(np.max(np.abs(c.sigma_tilde - truth))))
    assert worst < 2e-2


def test_invisible_data_give_no_information(rule):
    spec = NullModeSpec.single()
    grid = PolarGrid(32, 64)
    r, t = grid.radii[:, None] * np.ones(64), np.ones(32)[:, None] * grid.angles
    U, dr, dt = invisible_potential(spec, r, t, rule, gradient=True)
    gx = np.cos(t) * dr - np.sin(t) * dt
    gy = np.sin(t) * dr + np.cos(t) * dt
    pot = PotentialField(grid, U, gx, gy)
    Y = PolarInterpolant(grid, np.zeros_like(U))
    curves = trace_characteristics(pot, Y, BoundaryFunction(np.ones(64)), 16)
    assert all(c.termination is Termination.GRADIENT_VANISHED and c.empty for c in curves)
    with pytest.raises(ReconstructionError):
        rasterize_sigma(curves, BoundaryFunction(np.ones(64)))
    with pytest.raises(ConfigurationError):
        trace_characteristics(pot, Y, BoundaryFunction(np.ones(64)), 4)


def test_benchmark_result_invariants(rule, exact_m1):
    cfg = InversionConfig(delta_factor=0.05)
    res = reconstruct(exact_m1.data, sigma_mod(), cfg, truth=sigma_exact())
    Y_mod = model_source(sigma_mod(), build_chi(exact_m1.data, rule))
    assert rule.norm(res.Y_reg.values - Y_mod.values) <= res.delta * (1 + 1e-6)
    inside = np.isfinite(res.sigma_grid)
    assert np.all(res.sigma_grid[inside] > 0)
    assert res.epsilon0 >= 0
    assert res.rel_error < 0.2883  # better than the prior
