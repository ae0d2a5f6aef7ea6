"""Inverse pipeline: Cauchy data to a regularized conductivity image.

Steps
-----
1. ``build_chi``: harmonic extensions ``χ_D`` (of the potential) and ``χ_N``
   (of the normal derivative); their difference ``χ = χ_N - χ_D`` equals
   ``K[Y]`` for the true source ``Y = ∇ln σ·∇Φ``.
2. ``tikhonov_solve``: minimize ``‖χ - K[Y]‖`` subject to ``‖Y - Y_mod‖ <= δ``.
   With ``λ`` the reciprocal Lagrange multiplier, the minimizer is explicit
   in the eigenbasis of ``K``:

       Y_reg = Y_mod + λ K[χ] - λ Σ_{k<=K_max, j} (Y_mod,k + λ χ_k / λ_k) / (λ + λ_k²) u_k.

3. ``choose_lambda``: bisection on ``log λ`` so that ``‖Y_reg - Y_mod‖ = δ``.
4. ``reconstruct_potential``: ``Φ_reg = χ_D + G_D[Y_reg]`` on a polar grid.
5. ``trace_characteristics``: along ``x' = ∇Φ_reg``, ``ln σ`` changes at
   rate ``Y_reg``; start from the boundary conductivity and integrate inward.
6. ``rasterize_sigma``: scatter ``σ = exp(σ̃)`` onto a Cartesian grid.
"""

from __future__ import annotations

import enum
import logging
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import RectBivariateSpline
from scipy.optimize import brentq
from scipy.spatial import cKDTree

from .basis import eigen_norm, eigenvalue
from .errors import ConfigurationError, DataError, ReconstructionError
from .fields import ConductivityModel, grad_log_sigma
from .forward import (CauchyData, InteriorField, _inv_n, check_flux, harmonic_grid,
                      potentials_for, solve_source)
from .polar import to_modes
from .quadrature import TWO_PI, BoundaryFunction, DiskQuadrature, build_disk_rule

log = logging.getLogger(__name__)

K_MAX = 50
LAMBDA_BRACKET = (1e-8, 1e12)


# --- χ fields ----------------------------------------------------------------

@dataclass(frozen=True)
class ChiFields:
    """Harmonic extensions of the boundary data.

    ``dirichlet_modes`` and ``neumann_modes`` are half-spectra; the harmonic
    function is ``Re Σ c_n F_n s_n r^n e^{inθ}`` with ``s_n = 1`` (Dirichlet)
    or ``1/n`` (Neumann, mode 0 holding ``C / 2π``).
    """

    dirichlet_modes: np.ndarray = field(repr=False)
    neumann_modes: np.ndarray = field(repr=False)
    C: float
    chi: InteriorField = field(repr=False)

    def chi_D(self, radii, n_angles: int, gradient: bool = False):
        return harmonic_grid(self.dirichlet_modes, np.asarray(radii, float), n_angles,
                             derivative=gradient)

    def chi_N(self, radii, n_angles: int, gradient: bool = False):
        return harmonic_grid(self.neumann_modes, np.asarray(radii, float), n_angles,
                             factor=_inv_n, derivative=gradient)

    def chi_on_grid(self, radii, n_angles: int):
        return self.chi_N(radii, n_angles) - self.chi_D(radii, n_angles)

    @property
    def rule(self) -> DiskQuadrature:
        return self.chi.rule


def build_chi(data: CauchyData, rule: DiskQuadrature | None = None) -> ChiFields:
    """``χ_D``, ``χ_N`` and ``χ = χ_N - χ_D`` from Cauchy data.

    ``∂Φ/∂n`` is taken as ``current / sigma_trace``; ``C`` is the boundary
    integral of the potential, so the constant modes of ``χ_D`` and ``χ_N``
    agree.
    """
    rule = rule or build_disk_rule()
    if np.any(data.sigma_trace.values <= 0):
        raise DataError("boundary conductivity must be positive")
    check_flux(data.current)
    Fd = to_modes(data.phi_trace.values)
    Fn = to_modes(data.normal_derivative.values).copy()
    C = data.phi_trace.integral()
    Fn[0] = C / TWO_PI
    partial = ChiFields(Fd, Fn, C, InteriorField(np.zeros(rule.size), rule))
    values = partial.chi_on_grid(rule.radii, rule.n_angular).ravel()
    chi = InteriorField(values, rule, evaluator=partial.chi_on_grid)
    return ChiFields(Fd, Fn, C, chi)


# --- spectral projections ----------------------------------------------------

@dataclass(frozen=True)
class SpectralCoefficients:
    """``coeffs[k-1, j-1] = ∫ f u_k^j`` for ``k <= K_max``."""

    K_max: int
    coeffs: np.ndarray
    warnings: tuple[str, ...] = ()

    @property
    def tail_ratio(self) -> float:
        peak = float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0
        return float(np.max(np.abs(self.coeffs[-1])) / peak) if peak > 0 else 0.0


_EIGEN_CACHE: dict = {}


def eigen_matrix(rule: DiskQuadrature, K_max: int) -> np.ndarray:
    """Eigenfunctions at the nodes, shape ``(K_max, 2, n_nodes)``."""
    key = (rule.radial_order, rule.n_angular, tuple(rule.radii[:2]), K_max)
    if key not in _EIGEN_CACHE:
        k = np.arange(1, K_max + 1)[:, None]
        rad = eigen_norm(k) * rule.r[None, :] ** k
        _EIGEN_CACHE[key] = np.stack([rad * np.cos(k * rule.theta), rad * np.sin(k * rule.theta)], 1)
    return _EIGEN_CACHE[key]


def quadrature_warnings(rule: DiskQuadrature, K_max: int) -> tuple[str, ...]:
    out = []
    if K_max >= rule.n_angular // 2:
        out.append(f"K_max={K_max} reaches the angular Nyquist mode {rule.n_angular // 2}")
    if K_max > rule.radial_order - 1:
        out.append(f"K_max={K_max} exceeds the radial exactness degree of a "
                   f"{rule.radial_order}-point rule")
    return tuple(out)


def project(field_: InteriorField, K_max: int = K_MAX) -> SpectralCoefficients:
    if K_max < 1:
        raise ConfigurationError("K_max must be >= 1")
    rule = field_.rule
    notes = quadrature_warnings(rule, K_max)
    for msg in notes:
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
    coeffs = eigen_matrix(rule, K_max) @ (rule.weights * field_.values)
    return SpectralCoefficients(K_max, coeffs, notes)


def apply_K(values: np.ndarray, rule: DiskQuadrature, radii=None, n_angles=None) -> np.ndarray:
    """``K[f]`` by cubature; node values by default, else a polar grid."""
    U = potentials_for(rule).evaluate(values, "kernel", radii, n_angles)
    return U.ravel() if radii is None else U


# --- Tikhonov ----------------------------------------------------------------

class TikhonovProblem:
    """Precomputed pieces of the explicit Tikhonov solution for one data set."""

    def __init__(self, chi: ChiFields, Y_mod: InteriorField, K_max: int = K_MAX):
        if Y_mod.rule is not chi.rule and Y_mod.rule.shape != chi.rule.shape:
            raise ConfigurationError("χ and Y_mod live on different rules")
        self.chi = chi
        self.Y_mod = Y_mod
        self.K_max = int(K_max)
        self.rule = chi.rule
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            self.chi_k = project(chi.chi, K_max).coeffs
            self.Ymod_k = project(Y_mod, K_max).coeffs
        self.lam_k = eigenvalue(np.arange(1, K_max + 1))[:, None]
        self.E = eigen_matrix(self.rule, K_max)
        self.K_chi = apply_K(chi.chi.values, self.rule)
        self.K_Ymod = apply_K(Y_mod.values, self.rule)

    def _weights(self, lam: float) -> np.ndarray:
        return lam * (self.Ymod_k + lam * self.chi_k / self.lam_k) / (lam + self.lam_k ** 2)

    def correction(self, lam: float) -> np.ndarray:
        """``Y_reg - Y_mod`` at the nodes."""
        if lam < 0:
            raise ConfigurationError("λ must be >= 0")
        if lam == 0:
            return np.zeros(self.rule.size)
        return lam * self.K_chi - np.einsum("kj,kjn->n", self._weights(lam), self.E)

    def solve(self, lam: float) -> InteriorField:
        corr = self.correction(lam)
        values = self.Y_mod.values + corr
        if lam == 0:
            return InteriorField(self.Y_mod.values.copy(), self.rule, self.Y_mod.evaluator)
        w = self._weights(lam)
        rule = self.rule
        chi, Y_mod = self.chi, self.Y_mod

        def evaluator(radii, n_angles):
            radii = np.asarray(radii, dtype=float)
            th = TWO_PI * np.arange(n_angles) / n_angles
            k = np.arange(1, self.K_max + 1)
            rad = eigen_norm(k)[:, None] * radii[None, :] ** k[:, None]      # (K, nr)
            cos = np.cos(np.outer(k, th))
            sin = np.sin(np.outer(k, th))
            spec = np.einsum("kr,kt->rt", w[:, 0, None] * rad, cos) \
                + np.einsum("kr,kt->rt", w[:, 1, None] * rad, sin)
            return (Y_mod.on_grid(radii, n_angles)
                    + lam * apply_K(chi.chi.values, rule, radii, n_angles) - spec)

        return InteriorField(values, rule, evaluator)

    def discrepancy(self, lam: float) -> float:
        return self.rule.norm(self.correction(lam))

    def residual(self, lam: float) -> float:
        """``ε₀(λ) = ‖χ - K[Y_reg(λ)]‖``."""
        K_Y = self.K_Ymod + apply_K(self.correction(lam), self.rule)
        return self.rule.norm(self.chi.chi.values - K_Y)


def tikhonov_solve(chi: ChiFields, Y_mod: InteriorField, lam: float,
                   K_max: int = K_MAX) -> InteriorField:
    return TikhonovProblem(chi, Y_mod, K_max).solve(lam)


@dataclass(frozen=True)
class LambdaChoice:
    value: float
    discrepancy: float
    saturated: bool = False

    def __float__(self) -> float:
        return self.value


def choose_lambda(problem: TikhonovProblem, delta: float,
                  bracket: tuple[float, float] = LAMBDA_BRACKET) -> LambdaChoice:
    """``λ`` with ``‖Y_reg(λ) - Y_mod‖ = delta``.

    ``d(λ)`` is nondecreasing, so a root in ``log λ`` is bracketed whenever
    ``d(lo) <= delta <= d(hi)``. Budgets above ``d(hi)`` return ``hi``
    flagged as saturated.
    """
    if not delta > 0:
        raise ConfigurationError("delta must be > 0")
    lo, hi = np.log(bracket[0]), np.log(bracket[1])
    d_hi = problem.discrepancy(bracket[1])
    if d_hi <= delta:
        return LambdaChoice(bracket[1], d_hi, saturated=True)
    d_lo = problem.discrepancy(bracket[0])
    if d_lo >= delta:
        return LambdaChoice(bracket[0], d_lo)
    t = brentq(lambda s: problem.discrepancy(np.exp(s)) - delta, lo, hi, xtol=1e-12, rtol=1e-14)
    lam = float(np.exp(t))
    return LambdaChoice(lam, problem.discrepancy(lam))


def epsilon0(problem: TikhonovProblem, lam: float) -> float:
    return problem.residual(lam)


# --- potential ----------------------------------------------------------------

@dataclass(frozen=True)
class PolarGrid:
    n_radial: int = 128
    n_angular: int = 256

    def __post_init__(self):
        if self.n_radial < 4 or self.n_angular < 8:
            raise ConfigurationError("polar grid too coarse")

    @property
    def radii(self) -> np.ndarray:
        return (np.arange(self.n_radial) + 0.5) / self.n_radial

    @property
    def angles(self) -> np.ndarray:
        return TWO_PI * np.arange(self.n_angular) / self.n_angular


class PolarInterpolant:
    """Bicubic spline on ``(r, θ)``, periodic in ``θ``, queried in Cartesian."""

    PAD = 3

    def __init__(self, grid: PolarGrid, values: np.ndarray):
        p = self.PAD
        th = grid.angles
        th_pad = np.concatenate([th[-p:] - TWO_PI, th, th[:p] + TWO_PI])
        v_pad = np.concatenate([values[:, -p:], values, values[:, :p]], axis=1)
        self._spline = RectBivariateSpline(grid.radii, th_pad, v_pad,
                                           bbox=[0.0, 1.0, th_pad[0], th_pad[-1]])

    def __call__(self, x, y):
        r = np.hypot(x, y)
        t = np.mod(np.arctan2(y, x), TWO_PI)
        return self._spline.ev(np.minimum(r, 1.0), t)


@dataclass
class PotentialField:
    """``Φ_reg`` with its Cartesian gradient on a polar grid, plus interpolants."""

    grid: PolarGrid
    values: np.ndarray
    gx: np.ndarray
    gy: np.ndarray

    def __post_init__(self):
        self._phi = PolarInterpolant(self.grid, self.values)
        self._gx = PolarInterpolant(self.grid, self.gx)
        self._gy = PolarInterpolant(self.grid, self.gy)

    def value(self, x, y):
        return self._phi(x, y)

    def gradient(self, x, y):
        return self._gx(x, y), self._gy(x, y)


def reconstruct_potential(chi: ChiFields, Y_reg: InteriorField,
                          grid: PolarGrid | None = None) -> PotentialField:
    """``Φ_reg = χ_D + G_D[Y_reg]``; the gradient is differentiated mode by mode."""
    grid = grid or PolarGrid()
    ops = potentials_for(Y_reg.rule)
    U, ux, uy = ops.evaluate(Y_reg.values, "dirichlet", grid.radii, grid.n_angular, gradient=True)
    D, dx, dy = chi.chi_D(grid.radii, grid.n_angular, gradient=True)
    return PotentialField(grid, U + D, ux + dx, uy + dy)


# --- characteristics ---------------------------------------------------------

class Termination(enum.Enum):
    EXITED_DOMAIN = "exited_domain"
    GRADIENT_VANISHED = "gradient_vanished"
    MAX_LENGTH = "max_length"


@dataclass
class CharacteristicCurve:
    seed_angle: float
    xy: np.ndarray            # (n, 2)
    sigma_tilde: np.ndarray   # (n,)
    arclength: np.ndarray     # (n,)
    termination: Termination
    direction: int = 1        # +1 along ∇Φ, -1 against it

    def __len__(self) -> int:
        return len(self.sigma_tilde)

    @property
    def empty(self) -> bool:
        return len(self) == 0


@dataclass(frozen=True)
class TracerSettings:
    step: float = 5e-3
    max_length: float = 10.0
    grad_tol: float = 1e-6
    launch_tol: float = 1e-8
    max_halvings: int = 12
    max_steps: int = 20000


def seed_angles(n_seeds: int) -> np.ndarray:
    return TWO_PI * np.arange(n_seeds) / n_seeds


def trace_characteristics(potential: PotentialField, Y: PolarInterpolant | Callable,
                          sigma_trace: BoundaryFunction, n_seeds: int = 60,
                          settings: TracerSettings | None = None) -> list[CharacteristicCurve]:
    """Integrate ``x' = ±∇Φ``, ``σ̃' = ±Y`` inward from uniform boundary seeds.

    Fixed-step RK4 in the curve parameter, vectorized over seeds. A step
    that would leave the disk is halved; once the step is below
    ``step / 2**max_halvings`` the curve ends on the circle.
    """
    if n_seeds < 8:
        raise ConfigurationError("need at least 8 characteristic seeds")
    st = settings or TracerSettings()
    th = seed_angles(n_seeds)
    x0 = np.stack([np.cos(th), np.sin(th)], axis=1)
    g0 = np.stack(potential.gradient(x0[:, 0], x0[:, 1]), axis=1)
    gnorm = np.linalg.norm(g0, axis=1)
    flux = np.sum(g0 * x0, axis=1)          # outward normal component of ∇Φ
    direction = np.where(flux < 0, 1, -1)
    launch = (gnorm >= st.grad_tol) & (np.abs(flux) > st.launch_tol)

    def rhs(p, d):
        gx, gy = potential.gradient(p[:, 0], p[:, 1])
        return np.stack([gx, gy], 1) * d[:, None], Y(p[:, 0], p[:, 1]) * d

    pts = [[x0[i]] for i in range(n_seeds)]
    sig = [[float(np.log(sigma_trace(th[i])))] for i in range(n_seeds)]
    arc = [[0.0] for _ in range(n_seeds)]
    term: dict[int, Termination] = {}
    for i in np.flatnonzero(~launch):
        pts[i], sig[i], arc[i] = [], [], []
        term[i] = Termination.GRADIENT_VANISHED

    act = np.flatnonzero(launch)
    x = x0[act].copy()
    s = np.array([sig[i][0] for i in act])
    L = np.zeros(len(act))
    h = np.full(len(act), st.step)
    d = direction[act].astype(float)
    steps = 0
    h_min = st.step / 2.0 ** st.max_halvings
    while act.size:
        steps += 1
        k1, m1 = rhs(x, d)
        k2, m2 = rhs(x + 0.5 * h[:, None] * k1, d)
        k3, m3 = rhs(x + 0.5 * h[:, None] * k2, d)
        k4, m4 = rhs(x + h[:, None] * k3, d)
        xn = x + h[:, None] / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        sn = s + h / 6.0 * (m1 + 2 * m2 + 2 * m3 + m4)
        rn = np.hypot(xn[:, 0], xn[:, 1])
        out = rn > 1.0
        done = np.zeros(len(act), bool)
        # leaving the disk: halve, or finish on the circle
        retry = out & (h > h_min)
        h[retry] *= 0.5
        finish = out & ~retry
        for a in np.flatnonzero(finish):
            i = act[a]
            xb = xn[a] / rn[a]
            pts[i].append(xb)
            sig[i].append(sn[a])
            arc[i].append(L[a] + np.linalg.norm(xb - x[a]))
            term[i] = Termination.EXITED_DOMAIN
            done[a] = True
        ok = ~out
        seg = np.linalg.norm(xn[ok] - x[ok], axis=1)
        L[ok] += seg
        x[ok], s[ok] = xn[ok], sn[ok]
        gn = np.hypot(*potential.gradient(x[ok, 0], x[ok, 1])) if ok.any() else np.zeros(0)
        for a, g in zip(np.flatnonzero(ok), gn):
            i = act[a]
            pts[i].append(x[a].copy())
            sig[i].append(s[a])
            arc[i].append(L[a])
            if g < st.grad_tol:
                term[i], done[a] = Termination.GRADIENT_VANISHED, True
            elif L[a] >= st.max_length or steps >= st.max_steps:
                term[i], done[a] = Termination.MAX_LENGTH, True
        keep = ~done
        act, x, s, L, h, d = act[keep], x[keep], s[keep], L[keep], h[keep], d[keep]

    return [CharacteristicCurve(float(th[i]), np.asarray(pts[i], float).reshape(-1, 2),
                                np.asarray(sig[i], float), np.asarray(arc[i], float),
                                term[i], int(direction[i]))
            for i in range(n_seeds)]


# --- rasterization -----------------------------------------------------------

@dataclass(frozen=True)
class RasterSettings:
    grid_size: int = 128
    power: float = 2.0
    neighbors: int = 8
    fallback_radius: float = 0.15
    spacing: float = 0.02


class ScatteredSigma:
    """Inverse-distance-weighted ``σ`` from characteristic samples.

    Points with no sample within ``fallback_radius`` take the boundary
    conductivity at their polar angle and are flagged.
    """

    def __init__(self, xy: np.ndarray, sigma: np.ndarray, sigma_trace: BoundaryFunction,
                 settings: RasterSettings):
        self.xy, self.sigma = xy, sigma
        self.sigma_trace = sigma_trace
        self.st = settings
        self.tree = cKDTree(xy)

    def __call__(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        q = np.stack([x.ravel(), y.ravel()], 1)
        k = min(self.st.neighbors, len(self.sigma))
        dist, idx = self.tree.query(q, k=k)
        dist = dist.reshape(len(q), k)
        idx = idx.reshape(len(q), k)
        with np.errstate(divide="ignore"):
            w = 1.0 / dist ** self.st.power
        exact = np.isinf(w)
        w = np.where(exact.any(1, keepdims=True), exact.astype(float), w)
        val = np.sum(w * self.sigma[idx], 1) / np.sum(w, 1)
        flagged = dist[:, 0] > self.st.fallback_radius
        if flagged.any():
            val[flagged] = self.sigma_trace(np.arctan2(q[flagged, 1], q[flagged, 0]))
        return val.reshape(x.shape), flagged.reshape(x.shape)


def _thin(curve: CharacteristicCurve, spacing: float) -> np.ndarray:
    """Indices of samples roughly ``spacing`` apart in arclength."""
    if spacing <= 0 or len(curve) < 2:
        return np.arange(len(curve))
    marks = np.floor(curve.arclength / spacing)
    keep = np.concatenate([[True], marks[1:] != marks[:-1]])
    return np.flatnonzero(keep)


@dataclass
class SigmaRaster:
    x: np.ndarray              # cell-centre coordinates (1-D)
    sigma: np.ndarray          # (n, n), NaN outside the disk
    flagged: np.ndarray        # (n, n) bool
    interpolant: ScatteredSigma = field(repr=False)
    rel_error: float | None = None


def relative_error(f: Callable, truth: Callable, rule: DiskQuadrature) -> float:
    a = f(rule.x, rule.y)
    b = truth(rule.x, rule.y)
    return rule.norm(a - b) / rule.norm(b)


def rasterize_sigma(curves: list[CharacteristicCurve], sigma_trace: BoundaryFunction,
                    settings: RasterSettings | None = None,
                    truth: ConductivityModel | None = None,
                    rule: DiskQuadrature | None = None) -> SigmaRaster:
    st = settings or RasterSettings()
    parts = [(c.xy[_thin(c, st.spacing)], c.sigma_tilde[_thin(c, st.spacing)])
             for c in curves if not c.empty]
    if not parts:
        raise ReconstructionError("no characteristic left the boundary; the data carry "
                                  "no interior information (invisible source)")
    xy = np.concatenate([p[0] for p in parts])
    sig = np.exp(np.concatenate([p[1] for p in parts]))
    interp = ScatteredSigma(xy, sig, sigma_trace, st)
    n = st.grid_size
    xc = -1.0 + (np.arange(n) + 0.5) * 2.0 / n
    X, Yc = np.meshgrid(xc, xc)
    inside = X ** 2 + Yc ** 2 <= 1.0
    grid = np.full((n, n), np.nan)
    flags = np.zeros((n, n), bool)
    grid[inside], flags[inside] = interp(X[inside], Yc[inside])
    err = None
    if truth is not None:
        rule = rule or build_disk_rule()
        err = relative_error(lambda a, b: interp(a, b)[0], truth, rule)
    return SigmaRaster(xc, grid, flags, interp, err)


# --- pipeline ----------------------------------------------------------------

@dataclass(frozen=True)
class InversionConfig:
    radial_order: int = 32
    angular_order: int = 128
    K_max: int = K_MAX
    delta: float | None = None        # absolute budget; overrides delta_factor
    delta_factor: float = 0.5         # δ = delta_factor * ‖Y_mod‖
    n_seeds: int = 60
    polar_grid: PolarGrid = field(default_factory=PolarGrid)
    tracer: TracerSettings = field(default_factory=TracerSettings)
    raster: RasterSettings = field(default_factory=RasterSettings)

    def rule(self) -> DiskQuadrature:
        return build_disk_rule(self.radial_order, self.angular_order)


@dataclass
class ReconstructionResult:
    raster: SigmaRaster
    lam: float
    epsilon0: float
    delta: float
    curves: list[CharacteristicCurve]
    Y_reg: InteriorField = field(repr=False)
    potential: PotentialField = field(repr=False)
    saturated: bool = False

    @property
    def sigma_grid(self) -> np.ndarray:
        return self.raster.sigma

    @property
    def rel_error(self) -> float | None:
        return self.raster.rel_error


def model_source(model: ConductivityModel, chi: ChiFields) -> InteriorField:
    """``Y_mod = ∇ln σ_mod·∇Φ_mod`` with ``Φ_mod = χ_D + G_D[Y_mod]``.

    The model potential carries the measured boundary potential, so with
    ``Y_reg = Y_mod`` the reconstructed potential is exactly ``Φ_mod``.
    """
    rule = chi.rule
    Y = solve_source(model, chi.dirichlet_modes, "dirichlet", rule)
    ops = potentials_for(rule)

    def evaluator(radii, n_angles):
        radii = np.asarray(radii, dtype=float)
        _, ux, uy = ops.evaluate(Y, "dirichlet", radii, n_angles, gradient=True)
        _, dx, dy = chi.chi_D(radii, n_angles, gradient=True)
        th = TWO_PI * np.arange(n_angles) / n_angles
        gx, gy = grad_log_sigma(model, radii[:, None] * np.cos(th), radii[:, None] * np.sin(th))
        return gx * (ux + dx) + gy * (uy + dy)

    return InteriorField(Y, rule, evaluator)


def reconstruct(data: CauchyData, model: ConductivityModel, config: InversionConfig | None = None,
                truth: ConductivityModel | None = None) -> ReconstructionResult:
    """Run the full pipeline for one current pattern."""
    cfg = config or InversionConfig()
    rule = cfg.rule()
    chi = build_chi(data, rule)
    Y_mod = model_source(model, chi)
    problem = TikhonovProblem(chi, Y_mod, cfg.K_max)
    delta = cfg.delta if cfg.delta is not None else cfg.delta_factor * Y_mod.norm()
    if delta > 0:
        choice = choose_lambda(problem, delta)
    else:
        choice = LambdaChoice(0.0, 0.0)
    lam = choice.value
    Y_reg = problem.solve(lam)
    eps = problem.residual(lam)
    log.info("lambda=%.4g delta=%.4g eps0=%.4g saturated=%s", lam, delta, eps, choice.saturated)
    potential = reconstruct_potential(chi, Y_reg, cfg.polar_grid)
    Y_interp = PolarInterpolant(cfg.polar_grid, Y_reg.on_grid(cfg.polar_grid.radii,
                                                              cfg.polar_grid.n_angular))
    curves = trace_characteristics(potential, Y_interp, data.sigma_trace, cfg.n_seeds, cfg.tracer)
    raster = rasterize_sigma(curves, data.sigma_trace, cfg.raster, truth, rule)
    return ReconstructionResult(raster, lam, eps, delta, curves, Y_reg, potential, choice.saturated)
