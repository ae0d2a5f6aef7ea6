"""Angular Fourier modes and radial product integration on the tensor rule.

Volume potentials on the disk,

    U(x) = ∫ G(x, y) f(y) dy,   G ∈ {G_D, G_N, K = G_D - G_N},

are diagonal in the angular Fourier index. For mode ``n`` the radial kernels
(with ``r<``/``r>`` the smaller/larger of ``r``, ``ρ``) are

    Neumann    (r</r>)^n / 2n + (rρ)^n / 2n        n >= 1,   -log r>   n = 0
    Dirichlet  (r</r>)^n / 2n - (rρ)^n / 2n        n >= 1,   -log r>   n = 0
    K          -(rρ)^n / n                         n >= 1,   0         n = 0

The ``(r</r>)^n`` part has a kink at ``ρ = r``; it is integrated exactly
against the degree ``Nr-1`` polynomial interpolant of the radial profile
(product integration), split at ``ρ = r``. The separable ``(rρ)^n`` part is
summed with the rule's own Gauss weights, so ``G_D - G_N`` reproduces the
discrete K operator exactly and the spectral Tikhonov identities hold to
rounding.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre

KINDS = ("neumann", "dirichlet", "kernel")


def mode_weights(n_angles: int) -> np.ndarray:
    """Multipliers ``c_n`` with ``f(θ) = Re Σ c_n F_n e^{inθ}``."""
    c = np.full(n_angles // 2 + 1, 2.0)
    c[0] = 1.0
    c[-1] = 1.0
    return c


def to_modes(values: np.ndarray) -> np.ndarray:
    """Half-spectrum along the last (angular) axis."""
    values = np.asarray(values, dtype=float)
    return np.fft.rfft(values, axis=-1) / values.shape[-1]


def from_modes(F: np.ndarray, n_angles: int) -> np.ndarray:
    """Synthesize ``n_angles`` uniform samples from a half-spectrum.

    Modes above the target Nyquist are dropped; a source Nyquist that lands
    strictly below the target Nyquist is split evenly (cosine convention).
    """
    F = np.asarray(F)
    m_src = F.shape[-1]
    m_dst = n_angles // 2 + 1
    out = np.zeros(F.shape[:-1] + (m_dst,), dtype=complex)
    k = min(m_src, m_dst)
    out[..., :k] = F[..., :k]
    if m_src < m_dst and m_src > 1:
        out[..., m_src - 1] *= 0.5
    if m_dst < m_src:
        out[..., -1] = out[..., -1].real
        if m_dst > 1:
            out[..., -1] *= 2.0
    return np.fft.irfft(out, n=n_angles, axis=-1) * n_angles


def resample_angles(values: np.ndarray, n_angles: int) -> np.ndarray:
    return from_modes(to_modes(values), n_angles)


def angular_derivative(F: np.ndarray) -> np.ndarray:
    """Modes of ``∂f/∂θ``; the Nyquist mode has no well-defined derivative."""
    n = np.arange(F.shape[-1])
    dF = 1j * n * F
    dF[..., -1] = 0.0
    return dF


def interpolation_matrix(nodes: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Rows evaluate the polynomial interpolant through ``nodes`` at ``t``."""
    deg = len(nodes) - 1
    V = legendre.legvander(2.0 * nodes - 1.0, deg)
    Vt = legendre.legvander(2.0 * np.asarray(t) - 1.0, deg)
    return np.linalg.solve(V.T, Vt.T).T


@lru_cache(maxsize=None)
def _gauss(q: int):
    return legendre.leggauss(q)


def _panel_nodes(a: float, b: float, q: int):
    x, w = _gauss(q)
    h = 0.5 * (b - a)
    return a + h * (x + 1.0), h * w


def _right_subnodes(r: float, n_max: int, q: int):
    """Subnodes on [r, 1] in u = log(ρ/r), graded toward u = 0."""
    U = -np.log(r)
    brk = [0.0]
    h = 0.5 / max(n_max, 1)
    while brk[-1] + h < U:
        brk.append(brk[-1] + h)
        h *= 2.0
    brk.append(U)
    rho_brk = np.log(np.arange(1, 8) / 8.0 / r)
    brk = np.unique(np.concatenate([brk, rho_brk[(rho_brk > 0) & (rho_brk < U)]]))
    us, ws = [], []
    for a, b in zip(brk[:-1], brk[1:]):
        if b - a < 1e-15:
            continue
        u, w = _panel_nodes(a, b, q)
        us.append(u)
        ws.append(w)
    u = np.concatenate(us)
    w = np.concatenate(ws)
    return u, w


def radial_operators(nodes: np.ndarray, weights: np.ndarray, targets: np.ndarray,
                     n_max: int, kind: str):
    """Matrices mapping radial mode profiles at ``nodes`` to potentials.

    Returns ``(P, D)`` of shape ``(n_max + 1, len(targets), len(nodes))``:
    ``P[n] @ f_n`` is the mode-``n`` potential at ``targets`` and ``D[n] @ f_n``
    its radial derivative. Targets must lie in ``(0, 1]``.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kernel kind {kind!r}")
    nodes = np.asarray(nodes, dtype=float)
    weights = np.asarray(weights, dtype=float)
    targets = np.asarray(targets, dtype=float)
    nr = len(nodes)
    n = np.arange(n_max + 1)
    nn = np.maximum(n, 1).astype(float)
    P = np.zeros((n_max + 1, len(targets), nr))
    D = np.zeros_like(P)

    # separable part, ∫ ρ^{n+1} f dρ with the rule's own weights
    Wn = weights * nodes ** (n[:, None] + 1)  # (modes, nr)

    if kind == "kernel":
        for i, r in enumerate(targets):
            P[1:, i, :] = -(r ** n[1:, None] / nn[1:, None]) * Wn[1:]
            D[1:, i, :] = -(r ** (n[1:, None] - 1)) * Wn[1:]
        return P, D

    sign = 1.0 if kind == "neumann" else -1.0
    q_left = (nr + n_max) // 2 + 4
    q_right = max(16, nr // 2 + 8)
    for i, r in enumerate(targets):
        if not 0.0 < r <= 1.0:
            raise ValueError(f"radial target {r} outside (0, 1]")
        # left piece: ∫_0^r (ρ/r)^n ρ f dρ
        t, wt = _panel_nodes(0.0, r, q_left)
        L = interpolation_matrix(nodes, t)
        left = ((t / r) ** n[:, None] * (wt * t)) @ L
        # right piece: ∫_r^1 (r/ρ)^n ρ f dρ, with ρ = r e^u, dρ = ρ du
        if r < 1.0:
            u, wu = _right_subnodes(r, n_max, q_right)
            rho = r * np.exp(u)
            R = interpolation_matrix(nodes, rho)
            right = (np.exp(-np.outer(n, u)) * (wu * rho * rho)) @ R
            right0 = ((wu * rho * rho * np.log(rho)) @ R)
        else:
            right = np.zeros((n_max + 1, nr))
            right0 = np.zeros(nr)
        sep = r ** n[1:, None] * Wn[1:]
        P[1:, i, :] = (left[1:] + right[1:] + sign * sep) / (2.0 * nn[1:, None])
        D[1:, i, :] = (right[1:] - left[1:]) / (2.0 * r) \
            + sign * 0.5 * r ** (n[1:, None] - 1) * Wn[1:]
        # mode 0: kernel -log max(r, ρ)
        P[0, i, :] = -np.log(r) * left[0] - right0
        D[0, i, :] = -left[0] / r
    return P, D


def apply_modes(op: np.ndarray, F: np.ndarray) -> np.ndarray:
    """Apply per-mode radial matrices.

    ``op`` has shape ``(modes, n_targets, nr)``; ``F`` has shape
    ``(..., nr, modes)``. Result has shape ``(..., n_targets, modes)``.
    """
    m = min(op.shape[0], F.shape[-1])
    Fm = np.moveaxis(F[..., :m], -1, -2)[..., None]       # (..., modes, nr, 1)
    out = (op[:m] @ Fm)[..., 0]                          # (..., modes, nt)
    out = np.moveaxis(out, -1, -2)
    if m < F.shape[-1]:
        pad = np.zeros(out.shape[:-1] + (F.shape[-1] - m,), dtype=out.dtype)
        out = np.concatenate([out, pad], axis=-1)
    return out


class VolumePotentials:
    """Volume potentials of fields sampled on a tensor disk rule.

    ``evaluate`` maps node values to the potential (optionally with its
    Cartesian gradient) on any tensor polar grid ``radii x n_angles``.
    Radial operators are cached per radius set.
    """

    def __init__(self, rule):
        self.rule = rule
        self.n_max = rule.n_angular // 2
        self._cache: dict = {}

    def operators(self, kind: str, radii):
        key = (kind, tuple(np.round(np.asarray(radii, dtype=float), 15)))
        if key not in self._cache:
            self._cache[key] = radial_operators(self.rule.radii, self.rule.radial_weights,
                                                np.asarray(radii, dtype=float), self.n_max, kind)
        return self._cache[key]

    def modes(self, values: np.ndarray) -> np.ndarray:
        return to_modes(np.asarray(values, dtype=float).reshape(self.rule.shape))

    def evaluate(self, values, kind: str, radii=None, n_angles=None, gradient: bool = False):
        radii = self.rule.radii if radii is None else np.atleast_1d(np.asarray(radii, dtype=float))
        n_angles = self.rule.n_angular if n_angles is None else int(n_angles)
        P, D = self.operators(kind, radii)
        F = self.modes(values)
        U = from_modes(apply_modes(P, F), n_angles)
        if not gradient:
            return U
        dU = from_modes(apply_modes(D, F), n_angles)
        dT = from_modes(angular_derivative(apply_modes(P, F)), n_angles) / radii[:, None]
        th = 2.0 * np.pi * np.arange(n_angles) / n_angles
        c, s = np.cos(th), np.sin(th)
        return U, c * dU - s * dT, s * dU + c * dT

    def dense(self, kind: str, rows=None, cols=None):
        """Dense node-to-node matrices ``(U, dU/dr, (1/r) dU/dθ)``.

        ``rows``/``cols`` select target/source nodes (default: all), in the
        rule's radial-major numbering.
        """
        rule = self.rule
        M = rule.n_angular
        rows = np.arange(rule.size) if rows is None else np.asarray(rows)
        cols = np.arange(rule.size) if cols is None else np.asarray(cols)
        P, D = self.operators(kind, rule.radii)
        n = np.arange(self.n_max + 1)
        c = mode_weights(M)
        d = 2.0 * np.pi * np.arange(M) / M
        C = c[:, None] * np.cos(np.outer(n, d)) / M
        S = -(c * n)[:, None] * np.sin(np.outer(n, d)) / M
        S[-1] = 0.0
        p, a = np.divmod(rows, M)
        q, b = np.divmod(cols, M)
        shift = (a[:, None] - b[None, :]) % M
        out = []
        for op, trig in ((P, C), (D, C), (P, S)):
            R = np.einsum("npq,nd->pqd", op, trig)
            out.append(R[p[:, None], q[None, :], shift])
        out[2] = out[2] / rule.radii[p][:, None]
        return tuple(out)

    def at_points(self, values, kind: str, r, theta, gradient: bool = False):
        """Potential (and ``(∂/∂r, (1/r)∂/∂θ)``) at scattered polar points.

        Points sharing a radius share one radial operator; ``r = 0`` is
        evaluated at a tiny positive radius.
        """
        r, theta = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(theta, dtype=float))
        shape = r.shape
        r = np.maximum(r.ravel(), 1e-12)
        theta = theta.ravel()
        F = self.modes(values)
        c = mode_weights(self.rule.n_angular)
        n = np.arange(F.shape[-1])
        radii, inv = np.unique(r, return_inverse=True)
        P, D = self.operators(kind, radii)
        Pm = apply_modes(P, F) * c           # (n_radii, modes)
        E = np.exp(1j * np.outer(theta, n))
        E[:, -1] = np.cos(n[-1] * theta)    # Nyquist: cosine convention
        U = np.real(np.sum(Pm[inv] * E, axis=-1)).reshape(shape)
        if not gradient:
            return U
        Dm = apply_modes(D, F) * c
        dU = np.real(np.sum(Dm[inv] * E, axis=-1)).reshape(shape)
        dT = np.real(np.sum(angular_derivative(Pm)[inv] * E, axis=-1)) / r
        return U, dU, dT.reshape(shape)
