"""Flat typed configuration files and versioned CSV tables.

Config files hold ``key = value`` lines; ``#`` starts a comment. Every key
has a declared type and default (:data:`CONFIG_KEYS`). The hash of the
resolved configuration is echoed into every output file.

Every CSV starts with a comment line ``# diskeit-<kind> v<N> config=<hash> seed=<seed>``
followed by the column header. Readers accept only their own version.
"""

from __future__ import annotations

import csv
import hashlib
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, DataError
from .forward import CauchyData
from .quadrature import BoundaryFunction

SCHEMA_VERSION = 1

SCHEMAS = {
    "cauchy": ("theta", "phi", "current", "sigma"),
    "grid": ("x", "y", "sigma", "flagged"),
    "curves": ("curve_id", "s", "x", "y", "sigma_tilde"),
    "sweep": ("alpha", "epsilon0", "failed"),
    "nullspace": ("x", "y", "Y", "Phi"),
    "summary": ("key", "value"),
}

# key: (type, default, help)
CONFIG_KEYS: dict[str, tuple[type, object, str]] = {
    "radial_order": (int, 32, "Gauss-Legendre radial nodes of the disk rule"),
    "angular_order": (int, 128, "uniform angles of the disk rule (even)"),
    "n_boundary": (int, 256, "boundary grid size"),
    "seed": (int, 0, "noise seed"),
    "target": (str, "sigma_exact", "conductivity that generates synthetic data"),
    "model": (str, "sigma_mod", "prior conductivity for the inversion"),
    "truth": (str, "", "ground truth for error reporting (empty: none)"),
    "family": (str, "notch_family", "alpha-bound model family for sweeps"),
    "pattern": (int, 1, "current mode m of j = sin(m θ)"),
    "noise": (float, 0.0, "multiplicative noise level on the potential"),
    "constant_value": (float, 1.0, "value of the 'constant' model"),
    "alpha0": (float, 0.5, "notch target position along the chord"),
    "chord_y": (float, -0.3, "height of the horizontal sweep chord"),
    "target_a": (float, 0.001, "notch target numerator a"),
    "target_b": (float, 0.001, "notch target offset b"),
    "family_c": (float, 1500.0, "notch family sharpness c"),
    "K_max": (int, 50, "spectral terms in the Tikhonov sum"),
    "delta": (float, 0.0, "absolute model-distance budget (<= 0: use delta_factor)"),
    "delta_factor": (float, 0.5, "budget as a fraction of ||Y_mod||"),
    "n_seeds": (int, 60, "characteristic curves"),
    "grid_size": (int, 128, "Cartesian raster cells per side"),
    "polar_radial": (int, 128, "radial points of the potential grid"),
    "polar_angular": (int, 256, "angular points of the potential grid"),
    "alpha_min": (float, 0.0, "first sweep parameter"),
    "alpha_max": (float, 0.75, "last sweep parameter"),
    "alpha_count": (int, 16, "sweep points"),
    "reconstruct": (bool, False, "run the full reconstruction at the sweep minimum"),
    "null_terms": (str, "1,1,1,0", "null modes 'k,n,A,B;k,n,A,B'"),
    "demo_grid": (int, 41, "points per side of the null-space demo grid"),
}


def _parse_value(key: str, raw: str):
    typ = CONFIG_KEYS[key][0]
    raw = raw.strip()
    try:
        if typ is bool:
            low = raw.lower()
            if low not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(raw)
            return low in ("true", "1", "yes")
        return typ(raw)
    except ValueError as exc:
        raise ConfigurationError(f"config key {key!r}: cannot parse {raw!r} as {typ.__name__}") from exc


@dataclass(frozen=True)
class RunConfig:
    values: tuple[tuple[str, object], ...]

    def __getitem__(self, key: str):
        return dict(self.values)[key]

    def as_dict(self) -> dict:
        return dict(self.values)

    def canonical(self) -> str:
        return "\n".join(f"{k}={v!r}" for k, v in sorted(self.values))

    @property
    def hash(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:12]

    def replace(self, **updates) -> "RunConfig":
        d = self.as_dict()
        for k, v in updates.items():
            if k not in CONFIG_KEYS:
                raise ConfigurationError(f"unknown config key {k!r}")
            d[k] = CONFIG_KEYS[k][0](v)
        return RunConfig(tuple(sorted(d.items())))


def default_config() -> RunConfig:
    return RunConfig(tuple(sorted((k, v[1]) for k, v in CONFIG_KEYS.items())))


def parse_config(text: str) -> RunConfig:
    d = default_config().as_dict()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"config line {lineno}: expected 'key = value'")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigurationError(f"config line {lineno}: unknown key {key!r}")
        d[key] = _parse_value(key, raw)
    return RunConfig(tuple(sorted(d.items())))


def load_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return default_config()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


# --- CSV ---------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_table(path: str | Path, kind: str, rows, config_hash: str = "", seed=None):
    """Write a versioned CSV; ``rows`` is an iterable of sequences."""
    cols = SCHEMAS[kind]
    buf = io.StringIO()
    buf.write(f"# diskeit-{kind} v{SCHEMA_VERSION} config={config_hash or '-'} seed={seed}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        if len(row) != len(cols):
            raise ValueError(f"{kind} row has {len(row)} fields, expected {len(cols)}")
        w.writerow([_fmt(v) for v in row])
    Path(path).write_text(buf.getvalue())


def read_table(path: str | Path, kind: str) -> tuple[dict, list[list[str]]]:
    """Return ``(meta, rows)``; raises :class:`DataError` on schema mismatch."""
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not lines or not lines[0].startswith("#"):
        raise DataError(f"{path}: missing version line")
    parts = lines[0][1:].split()
    if len(parts) < 2 or parts[0] != f"diskeit-{kind}":
        raise DataError(f"{path}: not a {kind} table")
    if parts[1] != f"v{SCHEMA_VERSION}":
        raise DataError(f"{path}: schema {parts[1]} not supported (expected v{SCHEMA_VERSION})")
    meta = dict(p.split("=", 1) for p in parts[2:] if "=" in p)
    reader = csv.reader(lines[1:])
    try:
        header = next(reader)
    except StopIteration:
        raise DataError(f"{path}: missing header") from None
    if tuple(header) != SCHEMAS[kind]:
        raise DataError(f"{path}: columns {header} do not match {list(SCHEMAS[kind])}")
    rows = [r for r in reader if r]
    for r in rows:
        if len(r) != len(header):
            raise DataError(f"{path}: ragged row {r}")
    return meta, rows


def write_cauchy(path, data: CauchyData, config_hash: str = "", seed=None):
    rows = zip(data.angles, data.phi_trace.values, data.current.values, data.sigma_trace.values)
    write_table(path, "cauchy", rows, config_hash, seed)


def read_cauchy(path) -> CauchyData:
    meta, rows = read_table(path, "cauchy")
    try:
        arr = np.array(rows, dtype=float)
    except ValueError as exc:
        raise DataError(f"{path}: non-numeric entry ({exc})") from exc
    if arr.ndim != 2 or len(arr) < 4 or len(arr) % 2:
        raise DataError(f"{path}: need an even number (>= 4) of boundary samples")
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{path}: non-finite entries")
    n = len(arr)
    if np.max(np.abs(arr[:, 0] - 2 * np.pi * np.arange(n) / n)) > 1e-9:
        raise DataError(f"{path}: theta column is not a uniform grid from 0")
    seed = meta.get("seed")
    try:
        return CauchyData(BoundaryFunction(arr[:, 1]), BoundaryFunction(arr[:, 2]),
                          BoundaryFunction(arr[:, 3]),
                          seed=int(seed) if seed not in (None, "None") else None)
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from exc
