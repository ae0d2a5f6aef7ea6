"""Cubature on the unit disk and trapezoid quadrature on the unit circle.

The disk rule is a tensor product of Gauss-Legendre nodes in the radius
(mapped to (0, 1), polar Jacobian folded into the weights) and the uniform
trapezoid rule in the angle. Node ordering is radial-major: node ``i*M + a``
sits at ``(radii[i], angles[a])``, so a field on the rule reshapes to
``(n_radial, n_angular)`` without copying.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigurationError, EvaluationError

TWO_PI = 2.0 * np.pi


def uniform_angles(n: int) -> np.ndarray:
    return TWO_PI * np.arange(n) / n


@dataclass(frozen=True)
class DiskQuadrature:
    """Gauss-Legendre x trapezoid cubature rule on the unit disk."""

    radii: np.ndarray
    radial_weights: np.ndarray  # dρ weights on (0, 1), Jacobian not included
    n_angular: int

    @property
    def radial_order(self) -> int:
        return len(self.radii)

    @property
    def angular_order(self) -> int:
        return self.n_angular

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.radii), self.n_angular)

    @property
    def size(self) -> int:
        return len(self.radii) * self.n_angular

    @property
    def angles(self) -> np.ndarray:
        return uniform_angles(self.n_angular)

    @property
    def r(self) -> np.ndarray:
        return np.repeat(self.radii, self.n_angular)

    @property
    def theta(self) -> np.ndarray:
        return np.tile(self.angles, len(self.radii))

    @property
    def x(self) -> np.ndarray:
        return self.r * np.cos(self.theta)

    @property
    def y(self) -> np.ndarray:
        return self.r * np.sin(self.theta)

    @property
    def weights(self) -> np.ndarray:
        w = self.radial_weights * self.radii * (TWO_PI / self.n_angular)
        return np.repeat(w, self.n_angular)

    def grid(self, values: np.ndarray) -> np.ndarray:
        """View node values as a ``(n_radial, n_angular)`` array."""
        return np.asarray(values).reshape(self.shape)

    def norm(self, values: np.ndarray) -> float:
        """Discrete L2(disk) norm of a field sampled at the nodes."""
        v = np.asarray(values, dtype=float)
        return float(np.sqrt(np.sum(self.weights * v * v)))

    def inner(self, a: np.ndarray, b: np.ndarray) -> float:
        return float(np.sum(self.weights * np.asarray(a) * np.asarray(b)))


def build_disk_rule(radial_order: int = 32, angular_order: int = 128) -> DiskQuadrature:
    """Tensor cubature rule with ``radial_order * angular_order`` nodes.

    Integrates ``r**(2a) cos(b θ)`` exactly for ``2a + 1 <= 2*radial_order - 1``
    and ``b < angular_order``. No node lies at the origin or on the boundary.
    """
    if radial_order < 2:
        raise ConfigurationError(f"radial_order must be >= 2, got {radial_order}")
    if angular_order < 4:
        raise ConfigurationError(f"angular_order must be >= 4, got {angular_order}")
    if angular_order % 2:
        raise ConfigurationError(f"angular_order must be even, got {angular_order}")
    x, w = np.polynomial.legendre.leggauss(radial_order)
    return DiskQuadrature(radii=0.5 * (x + 1.0), radial_weights=0.5 * w,
                          n_angular=int(angular_order))


def integrate(rule: DiskQuadrature, f: Callable[[np.ndarray, np.ndarray], np.ndarray] | np.ndarray) -> float:
    """Sum ``w_l f(node_l)``; ``f`` is either node values or ``f(r, theta)``."""
    values = np.asarray(f(rule.r, rule.theta) if callable(f) else f, dtype=float)
    values = np.broadcast_to(values, (rule.size,))
    bad = ~np.isfinite(values)
    if bad.any():
        l = int(np.flatnonzero(bad)[0])
        raise EvaluationError(
            f"non-finite integrand at node {l} (r={rule.r[l]:.6g}, theta={rule.theta[l]:.6g})")
    return float(np.dot(rule.weights, values))


@dataclass(frozen=True)
class BoundaryRule:
    """Trapezoid rule on the unit circle, exact for trig degree < n/2."""

    n: int = 256

    def __post_init__(self):
        if self.n < 4 or self.n % 2:
            raise ConfigurationError(f"boundary grid size must be even and >= 4, got {self.n}")

    @property
    def angles(self) -> np.ndarray:
        return uniform_angles(self.n)

    @property
    def weight(self) -> float:
        return TWO_PI / self.n

    def integrate(self, values: np.ndarray) -> float:
        return float(self.weight * np.sum(values))


@dataclass(frozen=True)
class BoundaryFunction:
    """Samples of a function on a uniform grid of the unit circle.

    Values between samples are defined by trigonometric interpolation.
    """

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or len(v) < 4 or len(v) % 2:
            raise ConfigurationError("boundary samples must be a 1-D array of even length >= 4")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, f: Callable[[np.ndarray], np.ndarray], n: int = 256) -> "BoundaryFunction":
        return cls(np.broadcast_to(np.asarray(f(uniform_angles(n)), dtype=float), (n,)).copy())

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def angles(self) -> np.ndarray:
        return uniform_angles(self.n)

    def mean(self) -> float:
        return float(np.mean(self.values))

    def integral(self) -> float:
        return float(TWO_PI * np.mean(self.values))

    def modes(self) -> np.ndarray:
        """Complex half-spectrum ``F`` with ``f(θ) = Re Σ c_n F_n e^{inθ}``."""
        return np.fft.rfft(self.values) / self.n

    def __call__(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        F = self.modes()
        n = np.arange(len(F))
        c = np.full(len(F), 2.0)
        c[0] = 1.0
        c[-1] = 1.0  # Nyquist
        phase = np.exp(1j * np.multiply.outer(theta, n))
        return np.real(phase @ (c * F))

    def resample(self, n: int) -> "BoundaryFunction":
        from .polar import resample_angles
        return BoundaryFunction(resample_angles(self.values, n))
