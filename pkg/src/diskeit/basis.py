"""Closed-form Green's functions and the eigen-system of K = G_D - G_N on the unit disk.

All evaluators broadcast over numpy arrays of polar coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularEvaluationError
from .polar import from_modes, to_modes
from .quadrature import TWO_PI, BoundaryFunction

INV_4PI = 1.0 / (4.0 * np.pi)


@dataclass(frozen=True)
class PolarPoint:
    r: float
    theta: float

    def __post_init__(self):
        if not 0.0 <= self.r <= 1.0:
            raise DomainError(f"radius {self.r} outside [0, 1]")
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)

    @classmethod
    def from_xy(cls, x: float, y: float) -> "PolarPoint":
        return cls(float(np.hypot(x, y)), float(np.arctan2(y, x)))

    @property
    def xy(self) -> tuple[float, float]:
        return self.r * np.cos(self.theta), self.r * np.sin(self.theta)


@dataclass(frozen=True)
class EigenIndex:
    k: int
    j: int  # 1 = cosine branch, 2 = sine branch

    def __post_init__(self):
        if self.k < 1 or self.j not in (1, 2):
            raise DomainError(f"invalid eigen index (k={self.k}, j={self.j})")


def _dist2(r, t, rho, v):
    c = np.cos(np.asarray(t) - np.asarray(v))
    rr = np.asarray(r) * np.asarray(rho)
    near = np.asarray(r) ** 2 + np.asarray(rho) ** 2 - 2.0 * rr * c
    far = 1.0 + rr * rr - 2.0 * rr * c
    return near, far


def green_dirichlet(r, theta, rho, vartheta):
    """Dirichlet Green's function; zero when either point is on the circle."""
    near, far = _dist2(r, theta, rho, vartheta)
    if np.any(near <= 0.0):
        raise SingularEvaluationError("Dirichlet Green's function at coincident points")
    return -INV_4PI * np.log(near / far)


def green_neumann(r, theta, rho, vartheta):
    """Neumann Green's function with boundary flux -1/2π."""
    near, far = _dist2(r, theta, rho, vartheta)
    if np.any(near <= 0.0):
        raise SingularEvaluationError("Neumann Green's function at coincident points")
    return -INV_4PI * np.log(near * far)


def kernel_K(r, theta, rho, vartheta):
    """``G_D - G_N = log(1 + r²ρ² - 2rρ cos Δ) / 2π``; bounded on the closed disk
    except at ``x = y`` on the circle."""
    _, far = _dist2(r, theta, rho, vartheta)
    return np.log(far) / TWO_PI


def eigenvalue(k):
    k = np.asarray(k)
    if np.any(k < 1):
        raise DomainError("eigenvalue index must be >= 1")
    return -2.0 * k * (k + 1.0)


def eigen_norm(k) -> np.ndarray:
    return np.sqrt((2.0 * np.asarray(k) + 2.0) / np.pi)


def eigenfunction(k: int, j: int, r, theta):
    """``u_k^j = sqrt((2k+2)/π) r^k {cos, sin}(kθ)``, orthonormal on the disk."""
    EigenIndex(k, j)
    trig = np.cos if j == 1 else np.sin
    return eigen_norm(k) * np.asarray(r, dtype=float) ** k * trig(k * np.asarray(theta))


def kernel_series(r, theta, rho, vartheta, k_max: int):
    """Partial sum ``Σ_{k<=k_max} Σ_j u_k^j(x) u_k^j(y) / λ_k``."""
    k = np.arange(1, k_max + 1)
    rr = np.asarray(r, dtype=float) * np.asarray(rho, dtype=float)
    d = np.asarray(theta) - np.asarray(vartheta)
    rr, d = np.broadcast_arrays(rr, d)
    terms = (rr[..., None] ** k) * np.cos(np.multiply.outer(d, k)) * (eigen_norm(k) ** 2 / eigenvalue(k))
    return terms.sum(axis=-1)


def poisson_extend_dirichlet(phi: BoundaryFunction, r, theta):
    """Harmonic extension of boundary samples (Poisson kernel).

    Evaluated mode by mode from the trigonometric interpolant of the samples,
    which is the boundary trapezoid rule without its aliasing error; at
    ``r = 1`` it returns the interpolated boundary value.
    """
    return _harmonic_series(to_modes(phi.values), r, theta, lambda n: np.ones_like(n, dtype=float))


def neumann_extend(g: BoundaryFunction, C: float, r, theta, *, check_flux: bool = True,
                   tol: float = 1e-10):
    """``χ_N = ∫_∂Ω G_N(x, z) g(z) dz + C / 2π`` for Neumann data ``g``.

    With ``check_flux`` the data must have zero angular mean. The mean of g
    contributes nothing to the integral on the unit circle, so the
    representation itself stays valid without the check.
    """
    if check_flux and abs(g.mean()) > tol * max(1.0, float(np.max(np.abs(g.values)))):
        from .errors import FluxError
        raise FluxError(f"Neumann data has nonzero mean {g.mean():.3e}")
    F = to_modes(g.values)
    F = F.copy()
    F[0] = C / TWO_PI
    return _harmonic_series(F, r, theta, lambda n: 1.0 / np.maximum(n, 1))


def _harmonic_series(F, r, theta, factor):
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    n = np.arange(len(F))
    c = np.ones(len(F))
    c[1:-1] = 2.0
    coef = c * F * factor(n)
    rb, tb = np.broadcast_arrays(r, theta)
    out = np.real(np.exp(1j * np.multiply.outer(tb, n)) * (rb[..., None] ** n) @ coef) \
        if rb.ndim else np.real(np.sum(np.exp(1j * tb * n) * rb ** n * coef))
    return out


def harmonic_on_grid(F, radii, n_angles: int, factor=None, derivative: bool = False):
    """Evaluate ``Re Σ c_n F_n s_n r^n e^{inθ}`` on a tensor polar grid.

    Returns values of shape ``(len(radii), n_angles)``; with ``derivative``
    also the Cartesian gradient ``(gx, gy)``.
    """
    radii = np.asarray(radii, dtype=float)
    n = np.arange(len(F))
    s = np.ones(len(F)) if factor is None else factor(n)
    G = (radii[:, None] ** n) * (F * s)
    vals = from_modes(G, n_angles)
    if not derivative:
        return vals
    from .polar import angular_derivative
    Gm1 = radii[:, None] ** np.maximum(n - 1, 0) * (F * s)
    dr = from_modes(n * Gm1, n_angles)
    dt_over_r = from_modes(angular_derivative(Gm1), n_angles)
    th = 2.0 * np.pi * np.arange(n_angles) / n_angles
    c, sn = np.cos(th), np.sin(th)
    gx = c * dr - sn * dt_over_r
    gy = sn * dr + c * dt_over_r
    return vals, gx, gy
