"""Command-line front end.

Subcommands: ``synth``, ``invert``, ``notch``, ``nullspace-demo``, ``selftest``.
Exit codes: 0 ok, 1 failed self-test or unexpected error, 2 configuration,
3 solver, 4 data, 5 no interior information, 6 every sweep point failed.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .benchmarks import build_model
from .checks import run_checks
from .errors import ConfigurationError, DiskEITError
from .forward import CauchyData, CurrentPattern, add_noise, potentials_for, solve_forward
from .inversion import InversionConfig, PolarGrid, RasterSettings, reconstruct
from .io import RunConfig, load_config, read_cauchy, write_cauchy, write_table
from .notch import sweep
from .nullspace import NullModeSpec, invisible_potential, null_source
from .quadrature import BoundaryFunction, build_disk_rule

log = logging.getLogger("diskeit")


def _rule(cfg: RunConfig):
    return build_disk_rule(cfg["radial_order"], cfg["angular_order"])


def _inversion_config(cfg: RunConfig) -> InversionConfig:
    return InversionConfig(
        radial_order=cfg["radial_order"], angular_order=cfg["angular_order"], K_max=cfg["K_max"],
        delta=cfg["delta"] if cfg["delta"] > 0 else None, delta_factor=cfg["delta_factor"],
        n_seeds=cfg["n_seeds"], polar_grid=PolarGrid(cfg["polar_radial"], cfg["polar_angular"]),
        raster=RasterSettings(grid_size=cfg["grid_size"]))


def parse_null_terms(text: str) -> NullModeSpec:
    terms = []
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        parts = chunk.split(",")
        if len(parts) != 4:
            raise ConfigurationError(f"null term {chunk!r} needs 'k,n,A,B'")
        try:
            terms.append((int(parts[0]), int(parts[1]), float(parts[2]), float(parts[3])))
        except ValueError as exc:
            raise ConfigurationError(f"null term {chunk!r}: {exc}") from exc
    return NullModeSpec(tuple(terms))


def _null_data(cfg: RunConfig) -> CauchyData:
    """Boundary data of an invisible source: trace and flux of ``G_D[Y]`` (both ~0)."""
    n = cfg["n_boundary"]
    th = 2 * np.pi * np.arange(n) / n
    spec = parse_null_terms(cfg["null_terms"])
    U, dr, _ = invisible_potential(spec, np.ones(n), th, _rule(cfg), gradient=True)
    current = dr - dr.mean()
    return CauchyData(BoundaryFunction(U - U.mean()), BoundaryFunction(current),
                      BoundaryFunction(np.ones(n)))


def cmd_synth(cfg: RunConfig, out: Path) -> int:
    if cfg["target"] == "null_mode":
        data = _null_data(cfg)
    else:
        model = build_model(cfg["target"], cfg.as_dict())
        data = solve_forward(model, CurrentPattern(cfg["pattern"]), _rule(cfg), cfg["n_boundary"]).data
    data = add_noise(data, cfg["noise"], cfg["seed"])
    write_cauchy(out / "cauchy.csv", data, cfg.hash, cfg["seed"])
    print(f"wrote {out / 'cauchy.csv'} ({data.phi_trace.n} samples)")
    return 0


def _summary(out: Path, items: dict, cfg: RunConfig):
    write_table(out / "summary.csv", "summary", sorted(items.items()), cfg.hash, cfg["seed"])
    for k, v in sorted(items.items()):
        print(f"{k} = {v}")


def cmd_invert(cfg: RunConfig, data_path: Path, out: Path) -> int:
    data = read_cauchy(data_path)
    model = build_model(cfg["model"], cfg.as_dict())
    truth = build_model(cfg["truth"], cfg.as_dict()) if cfg["truth"] else None
    res = reconstruct(data, model, _inversion_config(cfg), truth)
    r = res.raster
    X, Y = np.meshgrid(r.x, r.x)
    inside = np.isfinite(r.sigma)
    write_table(out / "sigma_grid.csv", "grid",
                zip(X[inside], Y[inside], r.sigma[inside], r.flagged[inside]), cfg.hash, cfg["seed"])
    rows = ((i, s, x, y, st) for i, c in enumerate(res.curves)
            for s, (x, y), st in zip(c.arclength, c.xy, c.sigma_tilde))
    write_table(out / "curves.csv", "curves", rows, cfg.hash, cfg["seed"])
    items = {"lambda": res.lam, "epsilon0": res.epsilon0, "delta": res.delta,
             "saturated": int(res.saturated), "flagged_cells": int(r.flagged[inside].sum()),
             "empty_curves": sum(c.empty for c in res.curves)}
    if res.rel_error is not None:
        items["rel_error"] = res.rel_error
    _summary(out, items, cfg)
    return 0


def cmd_notch(cfg: RunConfig, data_path: Path, out: Path, threads: int) -> int:
    data = read_cauchy(data_path)
    family = build_model(cfg["family"], cfg.as_dict())
    alphas = np.linspace(cfg["alpha_min"], cfg["alpha_max"], cfg["alpha_count"])
    truth = build_model(cfg["truth"], cfg.as_dict()) if cfg["truth"] else None
    res = sweep(data, family, alphas, cfg["delta"] if cfg["delta"] > 0 else None,
                _inversion_config(cfg), threads, cfg["reconstruct"], truth)
    write_table(out / "sweep.csv", "sweep", zip(res.alphas, res.epsilon0, res.failed),
                cfg.hash, cfg["seed"])
    items = {"argmin": res.argmin, "degenerate": int(res.degenerate),
             "failed_points": int(res.failed.sum())}
    if not res.degenerate:
        items["contrast"] = res.contrast
    if res.reconstruction_at_min is not None and res.reconstruction_at_min.rel_error is not None:
        items["rel_error_at_min"] = res.reconstruction_at_min.rel_error
    _summary(out, items, cfg)
    return 0


def cmd_nullspace_demo(cfg: RunConfig, out: Path) -> int:
    spec = parse_null_terms(cfg["null_terms"])
    n = cfg["demo_grid"]
    s = np.linspace(-1, 1, n)
    X, Yc = np.meshgrid(s, s)
    inside = X ** 2 + Yc ** 2 <= 1.0
    x, y = X[inside], Yc[inside]
    r, t = np.hypot(x, y), np.arctan2(y, x)
    src = null_source(spec, r, t)
    phi = invisible_potential(spec, r, t, _rule(cfg))
    write_table(out / "nullspace.csv", "nullspace", zip(x, y, src, phi), cfg.hash, cfg["seed"])
    print(f"wrote {out / 'nullspace.csv'} ({inside.sum()} points)")
    return 0


def cmd_selftest(cfg: RunConfig) -> int:
    results = run_checks(_rule(cfg))
    for r in results:
        print(r.line())
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="diskeit", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=["synth", "invert", "notch", "nullspace-demo", "selftest"])
    p.add_argument("--config", type=Path, help="key = value configuration file")
    p.add_argument("--data", type=Path, help="boundary data CSV (invert, notch)")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="parallel sweep workers (default: available cores)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg = cfg.replace(seed=args.seed)
        if args.threads < 1:
            raise ConfigurationError("--threads must be >= 1")
        if args.command in ("invert", "notch") and args.data is None:
            raise ConfigurationError(f"{args.command} needs --data")
        out = args.out
        out.mkdir(parents=True, exist_ok=True)
        if args.command == "synth":
            return cmd_synth(cfg, out)
        if args.command == "invert":
            return cmd_invert(cfg, args.data, out)
        if args.command == "notch":
            return cmd_notch(cfg, args.data, out, args.threads)
        if args.command == "nullspace-demo":
            return cmd_nullspace_demo(cfg, out)
        return cmd_selftest(cfg)
    except DiskEITError as exc:
        print(f"diskeit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # unexpected
        print(f"diskeit: unexpected {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
