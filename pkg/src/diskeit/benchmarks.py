"""Benchmark set-ups shared by the scripts, the CLI and the acceptance tests."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .fields import (CATALOG, ConductivityModel, constant, notch_family, notch_target, sigma_exact,
                     sigma_mod)
from .forward import CurrentPattern, add_noise, solve_forward
from .inversion import InversionConfig, ReconstructionResult, reconstruct, relative_error
from .notch import NotchSweep, sweep


def build_model(name: str, cfg: dict | None = None) -> ConductivityModel:
    """Catalog model by name, with parameters taken from a config dict."""
    cfg = cfg or {}
    if name not in CATALOG:
        raise ConfigurationError(f"unknown model {name!r}; choose from {sorted(CATALOG)}")
    if name == "notch_target":
        return notch_target(cfg.get("alpha0", 0.5), cfg.get("chord_y", -0.3),
                            cfg.get("target_a", 0.001), cfg.get("target_b", 0.001))
    if name == "notch_family":
        return notch_family(cfg.get("chord_y", -0.3), cfg.get("family_c", 1500.0))
    if name == "constant":
        return constant(cfg.get("constant_value", 1.0))
    return CATALOG[name]()


def matched_offset(c: float) -> float:
    """``b`` for which ``a/(q² + b)`` with ``a = b`` and ``exp(-c q²)`` carry the
    same excess conductance ``∫ (σ - 1) dA`` over the plane: ``b = 1 / (π c)``."""
    return 1.0 / (np.pi * c)


@dataclass(frozen=True)
class ReconstructionBenchmark:
    """Three-region conductivity recovered from one noisy current pattern."""

    noise: float = 0.02
    seed: int = 42
    n_boundary: int = 256
    inversion: InversionConfig = field(default_factory=lambda: InversionConfig(delta_factor=0.05))

    def model_distance(self) -> float:
        return relative_error(sigma_mod(), sigma_exact(), self.inversion.rule())

    def run(self, m: int) -> tuple[ReconstructionResult, float]:
        t0 = time.perf_counter()
        rule = self.inversion.rule()
        sol = solve_forward(sigma_exact(), CurrentPattern(m), rule, self.n_boundary)
        data = add_noise(sol.data, self.noise, self.seed)
        res = reconstruct(data, sigma_mod(), self.inversion, truth=sigma_exact())
        return res, time.perf_counter() - t0


@dataclass(frozen=True)
class NotchBenchmark:
    """Target bump on a horizontal chord; the model bump slides along it."""

    alpha0: float = 0.5
    chord_y: float = -0.3
    c: float = 1500.0
    b: float | None = None           # None: matched_offset(c)
    pattern: int = 1
    noise: float = 0.0
    seed: int = 7
    alphas: tuple[float, ...] = tuple(np.linspace(0.0, 0.75, 16))
    inversion: InversionConfig = field(default_factory=lambda: InversionConfig(delta_factor=0.01))

    @property
    def offset(self) -> float:
        return matched_offset(self.c) if self.b is None else self.b

    def target(self) -> ConductivityModel:
        return notch_target(self.alpha0, self.chord_y, self.offset, self.offset)

    def family(self) -> ConductivityModel:
        return notch_family(self.chord_y, self.c)

    def run(self, threads: int = 1) -> tuple[NotchSweep, float]:
        t0 = time.perf_counter()
        sol = solve_forward(self.target(), CurrentPattern(self.pattern), self.inversion.rule())
        data = add_noise(sol.data, self.noise, self.seed)
        res = sweep(data, self.family(), np.array(self.alphas), None, self.inversion, threads)
        return res, time.perf_counter() - t0
