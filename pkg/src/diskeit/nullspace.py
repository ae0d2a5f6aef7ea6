"""Sources annihilated by K = G_D - G_N and their invisible potentials.

A source ``Y = R(r) cos(kθ)`` is orthogonal to every harmonic ``r^k cos kθ``
exactly when ``∫_0^1 ρ^{k+1} R(ρ) dρ = 0``. The shifted Jacobi polynomials
``G_n(k+2, k+2, ρ)``, ``n >= 1``, are orthogonal to ``G_0 = 1`` under the weight
``ρ^{k+1}``, so any finite combination of

    G_n(k+2, k+2, r) (A cos kθ + B sin kθ),   k, n >= 1

lies in the null space of K. Its Dirichlet potential ``Φ = G_D[Y]`` then has
zero trace and zero normal derivative on the circle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import hyp2f1

from .errors import DomainError
from .forward import InteriorField, potentials_for
from .quadrature import DiskQuadrature, build_disk_rule


@dataclass(frozen=True)
class NullModeSpec:
    """Finite list of ``(k, n, A, B)`` terms."""

    terms: tuple[tuple[int, int, float, float], ...] = ()

    def __post_init__(self):
        terms = tuple((int(k), int(n), float(a), float(b)) for k, n, a, b in self.terms)
        for k, n, _, _ in terms:
            if k < 1 or n < 1:
                raise DomainError(f"null mode needs k, n >= 1, got (k={k}, n={n})")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def single(cls, k: int = 1, n: int = 1, A: float = 1.0, B: float = 0.0) -> "NullModeSpec":
        return cls(((k, n, A, B),))

    @classmethod
    def random(cls, n_terms: int, rng: np.random.Generator, k_max: int = 6, n_max: int = 4):
        ks = rng.integers(1, k_max + 1, n_terms)
        ns = rng.integers(1, n_max + 1, n_terms)
        ab = rng.uniform(-1.0, 1.0, (n_terms, 2))
        return cls(tuple(zip(ks, ns, ab[:, 0], ab[:, 1])))


def jacobi_G(n: int, p: float, q: float, x):
    """Shifted Jacobi polynomial ``G_n(p, q, x) = 2F1(-n, p + n; q; x)``.

    Examples
    --------
    >>> float(jacobi_G(1, 3, 3, 0.75))
    0.0
    """
    if int(n) != n or n < 0:
        raise DomainError(f"Jacobi order must be a nonnegative integer, got {n}")
    n = int(n)
    if float(q).is_integer() and -(n - 1) <= q <= 0:
        raise DomainError(f"G_{n}(p, q, x) undefined for q = {q}")
    x = np.asarray(x, dtype=float)
    if np.any((x < 0.0) | (x > 1.0)):
        raise DomainError("Jacobi argument outside [0, 1]")
    return hyp2f1(-n, p + n, q, x)


def null_source(spec: NullModeSpec, r, theta):
    """Evaluate ``Y`` of a null-mode spec at polar points."""
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    out = np.zeros(np.broadcast(r, theta).shape)
    for k, n, a, b in spec.terms:
        out = out + jacobi_G(n, k + 2, k + 2, r) * (a * np.cos(k * theta) + b * np.sin(k * theta))
    return out


def null_field(spec: NullModeSpec, rule: DiskQuadrature) -> InteriorField:
    return InteriorField(null_source(spec, rule.r, rule.theta), rule)


def closed_form_potential(r, theta):
    """``Φ = r (r - 1)² cos θ / 6`` of the single term ``(k=1, n=1, A=1, B=0)``."""
    r = np.asarray(r, dtype=float)
    return r * (r - 1.0) ** 2 * np.cos(theta) / 6.0


def invisible_potential(spec: NullModeSpec, r, theta, rule: DiskQuadrature | None = None,
                        gradient: bool = False):
    """``Φ = ∫ G_D(x, y) Y(y) dy`` by product-integration cubature.

    With ``gradient`` also returns ``(∂Φ/∂r, (1/r) ∂Φ/∂θ)``. Points may
    coincide with nodes; the radial product rule has no singular self-term.
    """
    rule = rule or build_disk_rule()
    ops = potentials_for(rule)
    Y = null_source(spec, rule.r, rule.theta)
    r = np.asarray(r, dtype=float)
    if np.any((r < 0.0) | (r > 1.0)):
        raise DomainError("evaluation point outside the closed disk")
    return ops.at_points(Y, "dirichlet", r, theta, gradient=gradient)
