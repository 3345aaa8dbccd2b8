"""Declarative run configuration (YAML or JSON file plus flag overrides)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Optional

import yaml

from . import boundary as bd
from .errors import ConfigError
from .geometry import INFINITY, Location, SphereDomain, classify, is_infinity

MODES = ("interior", "exterior")
FORMATS = ("csv", "json", "table")
_INFINITY_TOKENS = ("infinity", "inf", "∞")


@dataclass
class RunConfig:
    boundary: dict
    points: list
    radius: float = 1.0
    mode: str = "interior"
    n_walks: int = 100_000
    nq: int = 100
    seed: int = 0
    workers: int = 1
    output_format: str = "csv"
    oracle_check: bool = False
    boundary_fn: Optional[bd.BoundaryFunction] = field(default=None, repr=False, compare=False)

    def domain(self) -> SphereDomain:
        return SphereDomain(self.radius)


def parse_point(raw: Any, name: str = "points"):
    if isinstance(raw, str):
        if raw.strip().lower() in _INFINITY_TOKENS:
            return INFINITY
        parts = raw.replace(";", ",").split(",")
    else:
        parts = raw
    try:
        vals = [float(v) for v in parts]
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: cannot read {raw!r} as a point (x,y,z) or 'infinity'") from None
    if len(vals) != 3 or not all(math.isfinite(v) for v in vals):
        raise ConfigError(f"{name}: expected three finite coordinates, got {raw!r}")
    return tuple(vals)


def _as_int(value, name, minimum=1):
    try:
        ivalue = int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: expected an integer, got {value!r}") from None
    if ivalue != value and not (isinstance(value, str) or float(value) == ivalue):
        raise ConfigError(f"{name}: expected an integer, got {value!r}")
    if ivalue < minimum:
        raise ConfigError(f"{name}: must be >= {minimum}, got {ivalue}")
    return ivalue


def _as_count(value, name):
    # accept 1e5 / "1e5" for walk counts
    try:
        f = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: expected an integer, got {value!r}") from None
    if not f.is_integer():
        raise ConfigError(f"{name}: expected an integer, got {value!r}")
    return _as_int(int(f), name)


def load_file(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config: cannot parse {path}: {exc}") from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("config: top level must be a mapping")
    return data


def build_config(data: dict, overrides: Optional[dict] = None) -> RunConfig:
    """Validate ``data`` (flag ``overrides`` win) into a :class:`RunConfig`."""
    merged = dict(data)
    for k, v in (overrides or {}).items():
        if v is not None:
            merged[k] = v
    known = {f.name for f in fields(RunConfig)} - {"boundary_fn"}
    unknown = sorted(set(merged) - known)
    if unknown:
        raise ConfigError(f"{unknown[0]}: unknown config key")
    for key in ("boundary", "points"):
        if key not in merged:
            raise ConfigError(f"{key}: required")

    try:
        radius = float(merged.get("radius", 1.0))
    except (TypeError, ValueError):
        raise ConfigError(f"radius: expected a number, got {merged.get('radius')!r}") from None
    if not (math.isfinite(radius) and radius > 0):
        raise ConfigError(f"radius: must be positive, got {radius}")
    mode = merged.get("mode", "interior")
    if mode not in MODES:
        raise ConfigError(f"mode: expected one of {MODES}, got {mode!r}")
    fmt = merged.get("output_format", "csv")
    if fmt not in FORMATS:
        raise ConfigError(f"output_format: expected one of {FORMATS}, got {fmt!r}")
    oracle_check = merged.get("oracle_check", False)
    if not isinstance(oracle_check, bool):
        raise ConfigError(f"oracle_check: expected true/false, got {oracle_check!r}")

    bspec = merged["boundary"]
    try:
        bf = bd.from_spec(bspec, radius=radius)
    except ConfigError as exc:
        msg = str(exc)
        raise ConfigError(msg if msg.startswith("boundary") else f"boundary: {msg}") from None

    raw_points = merged["points"]
    if isinstance(raw_points, (str, bytes)) or not isinstance(raw_points, (list, tuple)) or not raw_points:
        raise ConfigError("points: expected a non-empty list")
    dom = SphereDomain(radius)
    points = []
    for i, raw in enumerate(raw_points):
        p = parse_point(raw, f"points[{i}]")
        if mode == "interior":
            if is_infinity(p) or classify(p, dom) is not Location.INSIDE:
                raise ConfigError(f"points[{i}]: interior mode needs |p| < R, got {raw!r}")
        elif not is_infinity(p) and classify(p, dom) is not Location.OUTSIDE:
            raise ConfigError(f"points[{i}]: exterior mode needs |x| > R or 'infinity', got {raw!r}")
        points.append(p)

    seed = _as_int(merged.get("seed", 0), "seed", minimum=0)
    if seed >= 2**64:
        raise ConfigError("seed: must fit in 64 bits")
    return RunConfig(
        boundary=bspec,
        points=points,
        radius=radius,
        mode=mode,
        n_walks=_as_count(merged.get("n_walks", 100_000), "n_walks"),
        nq=_as_int(merged.get("nq", 100), "nq"),
        seed=seed,
        workers=_as_int(merged.get("workers", 1), "workers"),
        output_format=fmt,
        oracle_check=oracle_check,
        boundary_fn=bf,
    )
