"""Analytic conductivity fields: a positive background plus smooth bumps.

A bump contributes ``amplitude * p(sharpness * q**exponent)`` where ``q`` is the
squared distance to its center and ``p(t)`` is ``exp(-t)`` (profile ``"exp"``)
or ``1 / (1 + t)`` (profile ``"rational"``).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigurationError

PROFILES = ("exp", "rational")


@dataclass(frozen=True)
class BumpSpec:
    amplitude: float
    center: tuple[float, float]
    sharpness: float
    exponent: int = 2
    profile: str = "exp"

    def __post_init__(self):
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        if not self.sharpness > 0:
            raise ConfigurationError(f"bump sharpness must be > 0, got {self.sharpness}")
        if self.exponent not in (1, 2, 3):
            raise ConfigurationError(f"bump exponent must be 1, 2 or 3, got {self.exponent}")
        if self.profile not in PROFILES:
            raise ConfigurationError(f"unknown bump profile {self.profile!r}")

    def shifted(self, dx: float, dy: float) -> "BumpSpec":
        return replace(self, center=(self.center[0] + dx, self.center[1] + dy))

    def _profile(self, x, y):
        dx = np.asarray(x, dtype=float) - self.center[0]
        dy = np.asarray(y, dtype=float) - self.center[1]
        q = dx * dx + dy * dy
        t = self.sharpness * q ** self.exponent
        # d t / d q
        dt = self.sharpness * self.exponent * q ** (self.exponent - 1)
        if self.profile == "exp":
            p = np.exp(-t)
            dp = -p
        else:
            p = 1.0 / (1.0 + t)
            dp = -p * p
        return p, dp * dt, dx, dy

    def value(self, x, y):
        return self.amplitude * self._profile(x, y)[0]

    def gradient(self, x, y):
        _, dpdq, dx, dy = self._profile(x, y)
        g = self.amplitude * dpdq * 2.0
        return g * dx, g * dy


@dataclass(frozen=True)
class AlphaBinding:
    """Bumps (by index) translated by ``alpha * direction`` in a sweep."""

    bumps: tuple[int, ...]
    direction: tuple[float, float] = (1.0, 0.0)


@dataclass(frozen=True)
class ConductivityModel:
    background: float = 1.0
    bumps: tuple[BumpSpec, ...] = ()
    alpha_binding: AlphaBinding | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "bumps", tuple(self.bumps))
        if not self.background > 0:
            raise ConfigurationError(f"background conductivity must be > 0, got {self.background}")
        if self.alpha_binding is not None:
            bad = [i for i in self.alpha_binding.bumps if not 0 <= i < len(self.bumps)]
            if bad:
                raise ConfigurationError(f"alpha binding refers to missing bumps {bad}")
        lo = float(np.min(self(*_positivity_grid())))
        if not lo > 0:
            raise ConfigurationError(f"conductivity is not positive on the disk (min {lo:.3g})")

    def __call__(self, x, y):
        return sigma_eval(self, x, y)

    @property
    def is_constant(self) -> bool:
        return not self.bumps


def _positivity_grid(n: int = 201):
    s = np.linspace(-1.0, 1.0, n)
    X, Y = np.meshgrid(s, s)
    inside = X * X + Y * Y <= 1.0
    return X[inside], Y[inside]


def sigma_eval(model: ConductivityModel, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.full(np.broadcast(x, y).shape, float(model.background))
    for b in model.bumps:
        out = out + b.value(x, y)
    return out


def log_sigma(model: ConductivityModel, x, y):
    return np.log(sigma_eval(model, x, y))


def grad_log_sigma(model: ConductivityModel, x, y):
    """Analytic gradient of ``ln σ``; returns ``(gx, gy)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    shape = np.broadcast(x, y).shape
    gx = np.zeros(shape)
    gy = np.zeros(shape)
    for b in model.bumps:
        bx, by = b.gradient(x, y)
        gx = gx + bx
        gy = gy + by
    s = sigma_eval(model, x, y)
    return gx / s, gy / s


def bind_alpha(model: ConductivityModel, alpha: float) -> ConductivityModel:
    """Translate the bound bumps by ``alpha`` along the binding direction."""
    if model.alpha_binding is None:
        raise ConfigurationError(f"model {model.name or '<unnamed>'} has no alpha binding")
    ux, uy = model.alpha_binding.direction
    moved = set(model.alpha_binding.bumps)
    bumps = tuple(b.shifted(alpha * ux, alpha * uy) if i in moved else b
                  for i, b in enumerate(model.bumps))
    return ConductivityModel(model.background, bumps, None, name=f"{model.name}@{alpha:g}")


# --- catalog -----------------------------------------------------------------

A_LOW = 1000.0
B_HIGH = 1500.0


def sigma_exact() -> ConductivityModel:
    """Two low-conductivity regions and one high-conductivity region."""
    return ConductivityModel(1.0, (
        BumpSpec(-0.5, (0.5, 0.2), A_LOW, 2),
        BumpSpec(1.0, (-0.1, 0.3), B_HIGH, 2),
        BumpSpec(-0.5, (-0.5, -0.2), A_LOW, 2),
    ), name="sigma_exact")


def sigma_mod() -> ConductivityModel:
    """Prior: low regions well placed but oversized, high region misplaced."""
    return ConductivityModel(1.0, (
        BumpSpec(-0.7, (0.6, 0.3), A_LOW, 3),
        BumpSpec(1.2, (-0.4, 0.7), B_HIGH, 2),
        BumpSpec(-0.7, (-0.6, -0.3), A_LOW, 3),
    ), name="sigma_mod")


NOTCH_CHORD_Y = -0.3
NOTCH_ALPHA0 = 0.5


def notch_target(alpha0: float = NOTCH_ALPHA0, chord_y: float = NOTCH_CHORD_Y,
                 a: float = 0.001, b: float = 0.001) -> ConductivityModel:
    """``1 + a / (q² + b)`` centred at ``(alpha0, chord_y)``."""
    return ConductivityModel(1.0, (BumpSpec(a / b, (alpha0, chord_y), 1.0 / b, 2, "rational"),),
                             name="notch_target")


def notch_family(chord_y: float = NOTCH_CHORD_Y, c: float = 1500.0) -> ConductivityModel:
    """``1 + exp(-c q²)`` centred at ``(alpha, chord_y)``; bind with ``alpha``."""
    return ConductivityModel(1.0, (BumpSpec(1.0, (0.0, chord_y), c, 2),),
                             AlphaBinding((0,), (1.0, 0.0)), name="notch_family")


def radial_test(amplitude: float = 1.0, sharpness: float = 5.0) -> ConductivityModel:
    """``1 + amplitude * exp(-sharpness r²)``."""
    return ConductivityModel(1.0, (BumpSpec(amplitude, (0.0, 0.0), sharpness, 1),), name="radial")


def constant(value: float = 1.0) -> ConductivityModel:
    return ConductivityModel(float(value), (), name=f"constant({value:g})")


CATALOG = {
    "sigma_exact": sigma_exact,
    "sigma_mod": sigma_mod,
    "notch_target": notch_target,
    "notch_family": notch_family,
    "radial": radial_test,
    "constant": constant,
}
