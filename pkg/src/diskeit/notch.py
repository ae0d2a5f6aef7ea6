"""Parameter sweeps of the data residual ``ε₀(α)``.

A model family with an :class:`~diskeit.fields.AlphaBinding` is translated by
``α``; for each ``α`` the Tikhonov problem is solved at a fixed model-distance
budget and the residual ``‖χ - K[Y_reg]‖`` recorded. The target sits where the
residual has a sharp minimum.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DiskEITError, SweepError
from .fields import ConductivityModel, bind_alpha
from .forward import CauchyData
from .inversion import (ChiFields, InversionConfig, LambdaChoice, ReconstructionResult,
                        TikhonovProblem, build_chi, choose_lambda, model_source, reconstruct)

log = logging.getLogger(__name__)

MIN_POINTS = 5


@dataclass
class NotchSweep:
    alphas: np.ndarray
    epsilon0: np.ndarray          # NaN where the point failed
    failed: np.ndarray            # bool
    argmin: float
    degenerate: bool = False
    lambdas: np.ndarray | None = None
    reconstruction_at_min: ReconstructionResult | None = None

    @property
    def contrast(self) -> float:
        """``ε₀`` at the grid minimum over the median of the valid points."""
        ok = ~self.failed
        return float(np.min(self.epsilon0[ok]) / np.median(self.epsilon0[ok]))


def _budget(problem: TikhonovProblem, delta: float | None, factor: float) -> float:
    return float(delta) if delta is not None else factor * problem.Y_mod.norm()


def epsilon0_at(data: CauchyData, family: ConductivityModel, alpha: float,
                delta: float | None, config: InversionConfig | None = None,
                chi: ChiFields | None = None) -> tuple[float, LambdaChoice]:
    """Residual ``ε₀`` of the family member at ``alpha``; also returns the ``λ`` choice."""
    cfg = config or InversionConfig()
    chi = chi or build_chi(data, cfg.rule())
    model = bind_alpha(family, alpha)
    problem = TikhonovProblem(chi, model_source(model, chi), cfg.K_max)
    budget = _budget(problem, delta, cfg.delta_factor)
    choice = choose_lambda(problem, budget) if budget > 0 else LambdaChoice(0.0, 0.0)
    return problem.residual(choice.value), choice


def parabolic_argmin(alphas: np.ndarray, eps: np.ndarray) -> tuple[float, bool]:
    """Grid minimum refined by one parabola through its neighbours.

    Returns ``(argmin, degenerate)``; a flat or too-short curve is degenerate
    and returns the grid minimum.
    """
    ok = np.isfinite(eps)
    a, e = alphas[ok], eps[ok]
    i = int(np.argmin(e))
    if len(e) < 3 or np.ptp(e) <= 1e-12 * max(1.0, float(np.max(np.abs(e)))):
        return float(a[i]), True
    if i == 0 or i == len(e) - 1:
        return float(a[i]), False
    x0, x1, x2 = a[i - 1:i + 2]
    y0, y1, y2 = e[i - 1:i + 2]
    den = (x0 - x1) * (x0 - x2) * (x1 - x2)
    A = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / den
    B = (x2 ** 2 * (y0 - y1) + x1 ** 2 * (y2 - y0) + x0 ** 2 * (y1 - y2)) / den
    if A <= 0:
        return float(x1), False
    return float(np.clip(-B / (2 * A), x0, x2)), False


def sweep(data: CauchyData, family: ConductivityModel, alphas, delta: float | None,
          config: InversionConfig | None = None, threads: int = 1,
          reconstruct_at_min: bool = False,
          truth: ConductivityModel | None = None) -> NotchSweep:
    """Evaluate ``ε₀`` over ``alphas`` and locate the notch.

    Points whose forward solve fails are marked and skipped. Grids shorter
    than five points are evaluated but flagged degenerate.
    """
    if family.alpha_binding is None:
        raise ConfigurationError(f"model {family.name or '<unnamed>'} has no alpha binding")
    alphas = np.asarray(alphas, dtype=float).ravel()
    if alphas.size == 0:
        raise ConfigurationError("empty alpha grid")
    if np.any(np.diff(alphas) <= 0):
        raise ConfigurationError("alpha grid must be strictly increasing")
    cfg = config or InversionConfig()
    chi = build_chi(data, cfg.rule())

    def point(alpha):
        try:
            eps, choice = epsilon0_at(data, family, alpha, delta, cfg, chi)
            return eps, choice.value, False
        except DiskEITError as exc:
            log.warning("alpha=%g failed: %s", alpha, exc)
            return np.nan, np.nan, True

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            out = list(pool.map(point, alphas))
    else:
        out = [point(a) for a in alphas]
    eps = np.array([o[0] for o in out])
    lams = np.array([o[1] for o in out])
    failed = np.array([o[2] for o in out])
    if failed.all():
        raise SweepError("every sweep point failed")
    arg, degenerate = parabolic_argmin(alphas, eps)
    if alphas.size < MIN_POINTS:
        degenerate = True
    result = NotchSweep(alphas, eps, failed, arg, degenerate, lams)
    if reconstruct_at_min:
        result.reconstruction_at_min = reconstruct(data, bind_alpha(family, arg), cfg, truth)
    return result
