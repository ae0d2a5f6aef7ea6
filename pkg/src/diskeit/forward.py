"""Direct problem: boundary data from a known conductivity.

The unknown is ``Y = -∇²Φ = ∇ln σ · ∇Φ``. With only the current known, the
potential is represented through the Neumann Green's function,

    Φ = χ_N + G_N[Y],

and applying ``∇ln σ · ∇`` gives the second-kind equation

    Y = ∇ln σ·∇χ_N + A[Y],    A[Y](x) = ∇ln σ(x) · ∇_x ∫ G_N(x, y) Y(y) dy.

``A`` has a ``|x - y|^-1`` kernel, so the system is iterated once and the
smoother form ``(I - A²) Y = (I + A) f`` is solved by LU. Node-to-node
matrices come from product integration (see :mod:`diskeit.polar`).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .basis import harmonic_on_grid
from .errors import ConfigurationError, DataError, FluxError, SolverError
from .fields import ConductivityModel, grad_log_sigma, sigma_eval
from .polar import VolumePotentials, from_modes, to_modes
from .quadrature import BoundaryFunction, DiskQuadrature, build_disk_rule

FLUX_TOL = 1e-10
ACTIVE_TOL = 1e-15


@dataclass(frozen=True)
class CurrentPattern:
    """Injected current ``j = σ ∂Φ/∂n``: ``sin(mode θ)`` or explicit samples."""

    mode: int | None = 1
    samples: BoundaryFunction | None = None

    def __post_init__(self):
        if self.samples is None and (self.mode is None or self.mode < 1):
            raise ConfigurationError("current pattern needs a mode >= 1 or explicit samples")

    def current(self, n: int) -> BoundaryFunction:
        if self.samples is not None:
            j = self.samples if self.samples.n == n else self.samples.resample(n)
        else:
            j = BoundaryFunction.from_callable(lambda t: np.sin(self.mode * t), n)
        check_flux(j)
        return j


def check_flux(j: BoundaryFunction, tol: float = FLUX_TOL):
    scale = max(1.0, float(np.max(np.abs(j.values))))
    if abs(j.mean()) > tol * scale:
        raise FluxError(f"injected current has net flux (mean {j.mean():.3e})")


@dataclass(frozen=True)
class CauchyData:
    """Boundary triple on one uniform angular grid."""

    phi_trace: BoundaryFunction
    current: BoundaryFunction
    sigma_trace: BoundaryFunction
    noise_level: float = 0.0
    seed: int | None = None

    def __post_init__(self):
        n = self.phi_trace.n
        if self.current.n != n or self.sigma_trace.n != n:
            raise DataError("phi, current and sigma must share one boundary grid")
        if np.any(self.sigma_trace.values <= 0):
            raise DataError("boundary conductivity must be positive")
        if self.noise_level < 0:
            raise DataError("noise level must be >= 0")

    @property
    def angles(self) -> np.ndarray:
        return self.phi_trace.angles

    @property
    def normal_derivative(self) -> BoundaryFunction:
        return BoundaryFunction(self.current.values / self.sigma_trace.values)


@dataclass
class InteriorField:
    """Values at the nodes of a disk rule.

    ``evaluator(radii, n_angles)``, when present, gives the field on any
    tensor polar grid without interpolating the node values.
    """

    values: np.ndarray
    rule: DiskQuadrature
    evaluator: Callable[[np.ndarray, int], np.ndarray] | None = field(default=None, repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.rule.size,):
            raise ValueError(f"field has {self.values.shape} values for a rule of {self.rule.size} nodes")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("interior field has non-finite values")

    def norm(self) -> float:
        return self.rule.norm(self.values)

    def on_grid(self, radii, n_angles: int) -> np.ndarray:
        if self.evaluator is not None:
            return self.evaluator(np.asarray(radii, dtype=float), int(n_angles))
        return interpolate_nodes(self.rule, self.values, radii, n_angles)

    def __add__(self, other: "InteriorField") -> "InteriorField":
        ev = None
        if self.evaluator is not None and other.evaluator is not None:
            a, b = self.evaluator, other.evaluator
            ev = lambda r, n: a(r, n) + b(r, n)  # noqa: E731
        return InteriorField(self.values + other.values, self.rule, ev)


def interpolate_nodes(rule: DiskQuadrature, values, radii, n_angles: int) -> np.ndarray:
    """Fourier-in-angle, polynomial-in-radius interpolation of node values."""
    from .polar import interpolation_matrix
    F = to_modes(rule.grid(values))
    L = interpolation_matrix(rule.radii, np.asarray(radii, dtype=float))
    return from_modes(np.einsum("ij,jn->in", L, F), n_angles)


_POTENTIALS: dict = {}


def potentials_for(rule: DiskQuadrature) -> VolumePotentials:
    key = (rule.radial_order, rule.n_angular)
    if key not in _POTENTIALS:
        _POTENTIALS[key] = VolumePotentials(rule)
    return _POTENTIALS[key]


def _neumann_modes(data_g: BoundaryFunction) -> np.ndarray:
    F = to_modes(data_g.values).copy()
    F[0] = 0.0
    return F


def _inv_n(n):
    return 1.0 / np.maximum(n, 1)


def harmonic_grid(F, radii, n_angles, factor=None, derivative=False):
    """``harmonic_on_grid`` without dropping modes above the grid Nyquist."""
    n_fine = n_angles * max(1, int(np.ceil(2 * (len(F) - 1) / n_angles)))
    out = harmonic_on_grid(F, radii, n_fine, factor=factor, derivative=derivative)
    step = n_fine // n_angles
    if derivative:
        return tuple(a[:, ::step] for a in out)
    return out[:, ::step]


@dataclass
class ForwardSolution:
    Y: InteriorField
    Phi: InteriorField
    data: CauchyData
    model: ConductivityModel
    _g_modes: np.ndarray = field(repr=False)
    _offset: float = 0.0

    def __iter__(self):
        return iter((self.Y, self.Phi, self.data))

    def potential_on_grid(self, radii, n_angles: int, gradient: bool = False):
        """``Φ`` (and its Cartesian gradient) on a tensor polar grid."""
        radii = np.asarray(radii, dtype=float)
        ops = potentials_for(self.Y.rule)
        chi = harmonic_grid(self._g_modes, radii, n_angles, factor=_inv_n, derivative=gradient)
        U = ops.evaluate(self.Y.values, "neumann", radii, n_angles, gradient=gradient)
        if not gradient:
            return chi + U - self._offset
        return chi[0] + U[0] - self._offset, chi[1] + U[1], chi[2] + U[2]

    def Y_on_grid(self, radii, n_angles: int) -> np.ndarray:
        radii = np.asarray(radii, dtype=float)
        _, px, py = self.potential_on_grid(radii, n_angles, gradient=True)
        th = 2.0 * np.pi * np.arange(n_angles) / n_angles
        X = radii[:, None] * np.cos(th)
        Yc = radii[:, None] * np.sin(th)
        gx, gy = grad_log_sigma(self.model, X, Yc)
        return gx * px + gy * py


def solve_forward(model: ConductivityModel, pattern: CurrentPattern,
                  rule: DiskQuadrature | None = None, n_boundary: int = 256) -> ForwardSolution:
    """Solve ``∇·(σ∇Φ) = 0`` with ``σ ∂Φ/∂n = j`` for ``Y``, ``Φ`` and the boundary data."""
    rule = rule or build_disk_rule()
    ops = potentials_for(rule)
    theta_b = 2.0 * np.pi * np.arange(n_boundary) / n_boundary
    j = pattern.current(n_boundary)
    sigma_b = BoundaryFunction(sigma_eval(model, np.cos(theta_b), np.sin(theta_b)))
    g = BoundaryFunction(j.values / sigma_b.values)
    Fg = _neumann_modes(g)

    Y = solve_source(model, Fg, "neumann", rule)

    # boundary trace and gauge
    phi_b_modes = harmonic_grid(Fg, np.array([1.0]), n_boundary, factor=_inv_n)[0]
    U_b = ops.evaluate(Y, "neumann", np.array([1.0]), n_boundary)[0]
    phi_b = phi_b_modes + U_b
    offset = float(np.mean(phi_b))
    phi_b = phi_b - offset

    sol = ForwardSolution(Y=None, Phi=None,
                          data=CauchyData(BoundaryFunction(phi_b), j, sigma_b),
                          model=model, _g_modes=Fg, _offset=offset)
    sol.Y = InteriorField(Y, rule, evaluator=sol.Y_on_grid)
    sol.Phi = InteriorField(sol.potential_on_grid(rule.radii, rule.n_angular).ravel(), rule,
                            evaluator=lambda r, n: sol.potential_on_grid(r, n))
    return sol


def solve_source(model: ConductivityModel, F: np.ndarray, kind: str,
                 rule: DiskQuadrature) -> np.ndarray:
    """Node values of ``Y`` solving ``Y = ∇ln σ·∇(h + G[Y])``.

    ``h`` is the harmonic function with half-spectrum ``F`` (Neumann
    convention ``1/n`` for ``kind="neumann"``, plain for ``"dirichlet"``) and
    ``G`` the matching Green's function.
    """
    ops = potentials_for(rule)
    gx, gy = grad_log_sigma(model, rule.x, rule.y)
    gmag = np.hypot(gx, gy)
    # Y = ∇ln σ·∇Φ vanishes wherever ∇ln σ does; those rows drop out exactly
    active = np.flatnonzero(gmag > ACTIVE_TOL * gmag.max()) if gmag.max() > 0 else np.array([], int)
    Y = np.zeros(rule.size)
    if active.size:
        factor = _inv_n if kind == "neumann" else None
        _, cx, cy = harmonic_grid(F, rule.radii, rule.n_angular, factor=factor, derivative=True)
        f = (gx * cx.ravel() + gy * cy.ravel())[active]
        A = _assemble(ops, rule, gx, gy, active, kind)
        Y[active] = _solve_iterated(A, f)
    return Y


def _assemble(ops: VolumePotentials, rule: DiskQuadrature, gx, gy, active,
              kind: str = "neumann") -> np.ndarray:
    """Dense ``A = ∇ln σ · ∇G`` restricted to the active nodes."""
    _, Ur, Ut = ops.dense(kind, active, active)
    th = rule.theta[active]
    g_r = gx[active] * np.cos(th) + gy[active] * np.sin(th)
    g_t = -gx[active] * np.sin(th) + gy[active] * np.cos(th)
    Ur *= g_r[:, None]
    Ut *= g_t[:, None]
    Ur += Ut
    return Ur


def _solve_iterated(A: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Solve ``(I - A²) Y = f + A f`` by LU."""
    rhs = f + A @ f
    lhs = -(A @ A)
    lhs[np.diag_indices_from(lhs)] += 1.0
    try:
        lu, piv = scipy.linalg.lu_factor(lhs, overwrite_a=True, check_finite=False)
    except (ValueError, np.linalg.LinAlgError) as exc:
        raise SolverError(f"Nystrom system could not be factorized: {exc}") from exc
    diag = np.abs(np.diag(lu))
    if not np.all(np.isfinite(diag)) or diag.min() <= 1e-13 * diag.max():
        raise SolverError("Nystrom system is numerically singular")
    return scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False)


def add_noise(data: CauchyData, level: float, seed: int | None) -> CauchyData:
    """Multiply the potential trace by ``1 + level * u``, ``u ~ U[-1, 1]`` i.i.d."""
    if level < 0:
        raise ConfigurationError("noise level must be >= 0")
    if level == 0:
        return replace(data, noise_level=0.0, seed=seed)
    rng = np.random.default_rng(seed)
    u = rng.uniform(-1.0, 1.0, data.phi_trace.n)
    phi = BoundaryFunction(data.phi_trace.values * (1.0 + level * u))
    return replace(data, phi_trace=phi, noise_level=float(level), seed=seed)


def fd_oracle(model: ConductivityModel, pattern: CurrentPattern, grid_size: int = 128,
              n_boundary: int = 256) -> BoundaryFunction:
    """Boundary potential from a conservative finite-volume scheme on a polar grid.

    Cell-centred radii ``(i + 1/2) h``, ``h = 1/grid_size``, and ``4 grid_size``
    angles; flux ``σ ∂Φ/∂r = j`` imposed on the outer face, zero-mean gauge via
    a bordered system. Independent of the integral-equation solver.
    """
    if grid_size < 64:
        raise ConfigurationError("fd_oracle grid_size must be >= 64")
    nr, nt = grid_size, 4 * grid_size
    h = 1.0 / nr
    dt = 2.0 * np.pi / nt
    r = (np.arange(nr) + 0.5) * h
    rf = np.arange(nr + 1) * h                 # radial faces
    th = np.arange(nt) * dt
    thf = th + 0.5 * dt                        # angular faces (between a and a+1)

    def sig(rr, tt):
        return sigma_eval(model, rr * np.cos(tt), rr * np.sin(tt))

    s_rf = sig(rf[:, None], th[None, :])       # (nr+1, nt)
    s_tf = sig(r[:, None], thf[None, :])       # (nr, nt)
    idx = np.arange(nr * nt).reshape(nr, nt)
    rows, cols, vals = [], [], []

    def add(i, j, v):
        rows.append(i.ravel())
        cols.append(j.ravel())
        vals.append(np.broadcast_to(v, i.shape).ravel())

    # radial fluxes across interior faces i+1/2, i = 0..nr-2 (face index i+1)
    cr = (rf[1:nr, None] * s_rf[1:nr] / h) * dt          # (nr-1, nt)
    a, b = idx[:-1], idx[1:]
    add(a, a, cr); add(a, b, -cr); add(b, b, cr); add(b, a, -cr)
    # angular fluxes
    ct = (h * s_tf / (r[:, None] * dt))
    a = idx
    b = np.roll(idx, -1, axis=1)
    add(a, a, ct); add(a, b, -ct); add(b, b, ct); add(b, a, -ct)
    N = nr * nt
    K = scipy.sparse.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                                shape=(N, N)).tocsr()
    j = pattern.current(nt)
    rhs = np.zeros(N)
    rhs[idx[-1]] = j.values * 1.0 * dt           # outer face r=1
    # border with the mean constraint on the outer ring
    ones = scipy.sparse.csr_matrix((np.ones(nt), (np.zeros(nt, dtype=int), idx[-1])), shape=(1, N))
    Kb = scipy.sparse.bmat([[K, ones.T], [ones, None]], format="csc")
    try:
        sol = scipy.sparse.linalg.spsolve(Kb, np.concatenate([rhs, [0.0]]))
    except Exception as exc:  # pragma: no cover - scipy raises various types
        raise SolverError(f"finite-volume oracle failed: {exc}") from exc
    phi = sol[:N].reshape(nr, nt)
    sig_b = sig(np.ones(1), th)[0]
    trace = phi[-1] + 0.5 * h * j.values / sig_b
    trace -= trace.mean()
    return BoundaryFunction(trace).resample(n_boundary)
