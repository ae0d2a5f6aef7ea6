"""Nyström forward solver against the finite-volume oracle.

Prints the relative L2 gap of the boundary trace for several disk rules.
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

import numpy as np

from diskeit.fields import CATALOG
from diskeit.forward import CurrentPattern, fd_oracle, solve_forward
from diskeit.quadrature import build_disk_rule


@dataclass(frozen=True)
class Config:
    model: str = "sigma_exact"
    m: int = 1
    oracle_grid: int = 256
    rules: tuple[tuple[int, int], ...] = ((16, 64), (24, 96), (32, 128), (40, 160))


def main(cfg: Config):
    model = CATALOG[cfg.model]()
    pattern = CurrentPattern(cfg.m)
    ref = fd_oracle(model, pattern, cfg.oracle_grid).values
    for nr, na in cfg.rules:
        t0 = time.perf_counter()
        phi = solve_forward(model, pattern, build_disk_rule(nr, na)).data.phi_trace.values
        gap = np.linalg.norm(phi - ref) / np.linalg.norm(ref)
        print(f"rule {nr:3d}x{na:<4d} gap {gap:.3e}  [{time.perf_counter() - t0:.2f}s]")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--model", default=Config.model, choices=sorted(CATALOG))
    p.add_argument("--m", type=int, default=Config.m)
    p.add_argument("--oracle-grid", type=int, default=Config.oracle_grid)
    a = p.parse_args()
    main(Config(a.model, a.m, a.oracle_grid))
