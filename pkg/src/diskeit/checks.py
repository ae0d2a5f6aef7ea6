"""Analytic invariant battery run by ``diskeit selftest``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .basis import eigen_norm, eigenfunction, eigenvalue
from .fields import constant
from .forward import CurrentPattern, potentials_for, solve_forward
from .nullspace import NullModeSpec, closed_form_potential, invisible_potential
from .quadrature import DiskQuadrature, build_disk_rule


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def probes(n: int = 30, r_max: float = 0.9, seed: int = 0):
    rng = np.random.default_rng(seed)
    return r_max * np.sqrt(rng.uniform(0, 1, n)), rng.uniform(0, 2 * np.pi, n)


def eigen_relation_error(k: int, j: int, rule: DiskQuadrature, r, t) -> float:
    """``max |K[u] - u/λ| / max |u/λ|`` over the probes."""
    u = eigenfunction(k, j, rule.r, rule.theta)
    Ku = potentials_for(rule).at_points(u, "kernel", r, t)
    exact = eigenfunction(k, j, r, t) / eigenvalue(k)
    return float(np.max(np.abs(Ku - exact)) / np.max(np.abs(exact)))


def check_eigenvalues() -> CheckResult:
    k = np.arange(1, 11)
    lam = eigenvalue(k)
    table = ", ".join(f"{int(a)}:{int(b)}" for a, b in zip(k, lam))
    return CheckResult("eigenvalue table", bool(np.all(lam == -2 * k * (k + 1))), table)


def check_eigen_relation(rule: DiskQuadrature) -> CheckResult:
    r, t = probes()
    err = max(eigen_relation_error(k, j, rule, r, t) for k in range(1, 11) for j in (1, 2))
    return CheckResult("K u_k = u_k / λ_k, k <= 10", err < 1e-6, f"max rel err {err:.2e}")


def check_invisible_value(rule: DiskQuadrature) -> CheckResult:
    spec = NullModeSpec.single()
    closed = float(closed_form_potential(0.5, 0.0))
    cub = float(invisible_potential(spec, 0.5, 0.0, rule))
    ok = abs(closed - 1 / 48) < 1e-10 and abs(cub - 1 / 48) < 1e-5
    return CheckResult("invisible potential at (0.5, 0)", ok,
                       f"closed {closed:.12f}, cubature {cub:.12f}, 1/48 = {1 / 48:.12f}")


def check_invisible_boundary(rule: DiskQuadrature) -> CheckResult:
    th = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    spec = NullModeSpec(((1, 1, 1.0, 0.0), (2, 1, 0.3, -0.5), (3, 2, -0.2, 0.4)))
    U, dr, _ = invisible_potential(spec, np.ones_like(th), th, rule, gradient=True)
    worst = float(max(np.max(np.abs(U)), np.max(np.abs(dr))))
    return CheckResult("invisible trace and flux", worst < 1e-4, f"max {worst:.2e}")


def check_dirichlet_poisson(rule: DiskQuadrature) -> CheckResult:
    r, t = probes(seed=1)
    ops = potentials_for(rule)
    err = 0.0
    for k in range(1, 6):
        u = eigenfunction(k, 1, rule.r, rule.theta)
        num = ops.at_points(u, "dirichlet", r, t)
        exact = eigen_norm(k) * (r ** k - r ** (k + 2)) / (4 * (k + 1)) * np.cos(k * t)
        err = max(err, float(np.max(np.abs(num - exact))))
    return CheckResult("G_D[u_k] = c_k (r^k - r^{k+2}) / 4(k+1)", err < 1e-6, f"max err {err:.2e}")


def check_forward_constant(rule: DiskQuadrature) -> CheckResult:
    err = 0.0
    for m in (1, 2, 3):
        data = solve_forward(constant(1.0), CurrentPattern(m), rule).data
        err = max(err, float(np.max(np.abs(data.phi_trace.values - np.sin(m * data.angles) / m))))
    return CheckResult("σ = 1 boundary trace sin(mθ)/m", err < 1e-6, f"max err {err:.2e}")


CHECKS: tuple[Callable, ...] = (check_eigenvalues, check_eigen_relation, check_invisible_value,
                                check_invisible_boundary, check_dirichlet_poisson,
                                check_forward_constant)


def run_checks(rule: DiskQuadrature | None = None) -> list[CheckResult]:
    rule = rule or build_disk_rule()
    out = []
    for check in CHECKS:
        try:
            out.append(check() if check is check_eigenvalues else check(rule))
        except Exception as exc:  # a crashing check is a failed check
            out.append(CheckResult(check.__name__, False, f"raised {type(exc).__name__}: {exc}"))
    return out
