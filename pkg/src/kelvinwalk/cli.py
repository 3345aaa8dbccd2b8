"""Command-line front end.

    kelvinwalk run CONFIG [overrides]
    kelvinwalk sweep CONFIG --n-list 5000,10000,50000 [overrides]
    kelvinwalk reproduce 4.2A* [--max-n 100000]

Exit codes: 0 success, 2 configuration error, 3 internal invariant violation.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .config import FORMATS, MODES, RunConfig, build_config, load_file, parse_point
from .engine import WalkConfig, WalkSamples, sample_walks, to_exterior
from .errors import ConfigError, InvariantError
from .geometry import invert, is_infinity, reconstruct_exterior_value
from .oracle import interior_reference
from .report import Report, render
from .tables import TABLE_IDS, reproduce

log = logging.getLogger("kelvinwalk")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INVARIANT = 3


def _columns(cfg: RunConfig, sweep: bool = False):
    cols = ["n_walks"] if sweep else []
    cols += ["point_x", "point_y", "point_z"]
    if cfg.mode == "exterior":
        cols += ["xi_x", "xi_y", "xi_z"]
    cols += ["mean", "stderr", "mean_steps", "truncated"]
    if cfg.mode == "exterior":
        cols += ["u", "u_stderr"]
    if cfg.oracle_check:
        cols += ["oracle", "abs_dev"]
    if sweep:
        cols += ["stderr_slope"]
    return cols


def _image(cfg: RunConfig, p):
    """Interior start point for ``p`` (its inversion in exterior mode)."""
    if cfg.mode == "interior":
        return np.asarray(p, dtype=float)
    if is_infinity(p):
        return np.zeros(3)
    return invert(p, cfg.radius)


def _oracle(cfg: RunConfig, p, xi) -> float:
    ref = interior_reference(cfg.boundary_fn, xi).value
    if cfg.mode == "exterior":
        return reconstruct_exterior_value(ref, p, cfg.radius)
    return ref


def _row(cfg: RunConfig, p, xi, samples: WalkSamples, n: int, oracle: Optional[float]):
    est = samples.head(n).summary()
    coords = (float("inf"),) * 3 if is_infinity(p) else tuple(float(c) for c in p)
    row = {"n_walks": n, "point_x": coords[0], "point_y": coords[1], "point_z": coords[2],
           "mean": est.mean, "stderr": est.stderr, "mean_steps": est.mean_steps,
           "truncated": est.truncated}
    target = est.mean
    if cfg.mode == "exterior":
        ext = to_exterior(est, p, cfg.radius)
        row.update(xi_x=float(xi[0]), xi_y=float(xi[1]), xi_z=float(xi[2]), u=ext.mean, u_stderr=ext.stderr)
        target = ext.mean
    if oracle is not None:
        row.update(oracle=oracle, abs_dev=abs(target - oracle))
    return row


def _walk_cfg(cfg: RunConfig, n: int) -> WalkConfig:
    return WalkConfig(nq=cfg.nq, n_walks=n, master_seed=cfg.seed)


def run(cfg: RunConfig, *, backend: Optional[str] = None) -> Report:
    """One row per configured point."""
    rep = Report(title=f"{cfg.mode} solve: {cfg.boundary_fn.descriptor}", columns=_columns(cfg),
                 meta={"radius": cfg.radius, "nq": cfg.nq, "n_walks": cfg.n_walks, "seed": cfg.seed})
    for p in cfg.points:
        xi = _image(cfg, p)
        samples = sample_walks(xi, cfg.boundary_fn, _walk_cfg(cfg, cfg.n_walks),
                               workers=cfg.workers, backend=backend)
        oracle = _oracle(cfg, p, xi) if cfg.oracle_check else None
        row = _row(cfg, p, xi, samples, cfg.n_walks, oracle)
        row.pop("n_walks")
        rep.add(**row)
    return rep


def stderr_slope(ns, errs) -> float:
    """Least-squares slope of log(stderr) against log(N); about -1/2 when healthy."""
    pts = [(math.log(n), math.log(e)) for n, e in zip(ns, errs) if n > 1 and e > 0]
    if len(pts) < 2:
        return float("nan")
    x, y = np.array(pts).T
    return float(np.polyfit(x, y, 1)[0])


def sweep(cfg: RunConfig, n_list: Sequence[int], *, backend: Optional[str] = None,
          dump_dir: Optional[Path] = None) -> Report:
    """Estimates for each N in ``n_list``, all from one run of ``max(n_list)`` walks.

    Walk ``i`` always uses stream ``i``, so the N-walk estimate is exactly the
    one a separate N-walk run would give.
    """
    n_list = [int(n) for n in n_list]
    if not n_list:
        raise ConfigError("n_list: must not be empty")
    if any(n < 1 for n in n_list) or any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ConfigError("n_list: must be positive and strictly ascending")
    n_max = n_list[-1]
    rep = Report(title=f"{cfg.mode} sweep: {cfg.boundary_fn.descriptor}", columns=_columns(cfg, sweep=True),
                 meta={"radius": cfg.radius, "nq": cfg.nq, "seed": cfg.seed})
    for k, p in enumerate(cfg.points):
        xi = _image(cfg, p)
        samples = sample_walks(xi, cfg.boundary_fn, _walk_cfg(cfg, n_max), workers=cfg.workers, backend=backend)
        if dump_dir is not None:
            dump_dir.mkdir(parents=True, exist_ok=True)
            np.savez(dump_dir / f"point{k}.npz", values=samples.values, steps=samples.steps,
                     exits=samples.exits)
        oracle = _oracle(cfg, p, xi) if cfg.oracle_check else None
        rows = [_row(cfg, p, xi, samples, n, oracle) for n in n_list]
        slope = stderr_slope([r["n_walks"] for r in rows], [r["stderr"] for r in rows])
        for r in rows:
            r["stderr_slope"] = slope
            rep.add(**r)
    return rep


def _parse_csv_ints(text: str, name: str):
    try:
        return [int(float(t)) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"{name}: expected comma-separated integers, got {text!r}") from None


def _parse_csv_floats(text: str, name: str):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"{name}: expected comma-separated numbers, got {text!r}") from None


def _add_overrides(p: argparse.ArgumentParser):
    p.add_argument("config", help="YAML/JSON run configuration")
    p.add_argument("--n-walks", dest="n_walks", type=float, help="trajectories per point")
    p.add_argument("--nq", type=int, help="quantification number (step 1/nq)")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--workers", type=int, help="worker threads (never changes results)")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--radius", type=float)
    p.add_argument("--point", action="append", dest="points", metavar="X,Y,Z",
                   help="evaluation point (repeatable; 'infinity' in exterior mode)")
    p.add_argument("--oracle-check", dest="oracle_check", action="store_true", default=None)
    p.add_argument("--format", dest="output_format", choices=FORMATS)
    p.add_argument("--output", "-o", type=Path, help="write here instead of stdout")
    p.add_argument("--backend", choices=("numba", "numpy"), help="walk kernel backend")


def _load(args) -> RunConfig:
    data = load_file(args.config)
    overrides = {k: getattr(args, k) for k in
                 ("n_walks", "nq", "seed", "workers", "mode", "radius", "points", "oracle_check",
                  "output_format")}
    if overrides["points"]:
        overrides["points"] = [parse_point(s, "--point") for s in overrides["points"]]
        overrides["points"] = ["infinity" if is_infinity(p) else list(p) for p in overrides["points"]]
    return build_config(data, overrides)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kelvinwalk", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="estimate the solution at the configured points")
    _add_overrides(p_run)

    p_sweep = sub.add_parser("sweep", help="convergence study over several walk counts")
    _add_overrides(p_sweep)
    p_sweep.add_argument("--n-list", required=True, help="ascending walk counts, e.g. 5000,10000,1e5")
    p_sweep.add_argument("--dump-walks", type=Path, help="save per-walk values (npz) here")

    p_rep = sub.add_parser("reproduce", help="recompute a published table")
    p_rep.add_argument("table", help=f"one of {', '.join(TABLE_IDS)}")
    p_rep.add_argument("--max-n", type=float, help="skip rows with more walks than this")
    p_rep.add_argument("--nq", type=int)
    p_rep.add_argument("--seed", type=int, default=0)
    p_rep.add_argument("--workers", type=int, default=1)
    p_rep.add_argument("--example1-values", default="2,1,2",
                       help="band values (south cap, band, north cap) for Example 1")
    p_rep.add_argument("--format", dest="output_format", choices=FORMATS, default="table")
    p_rep.add_argument("--output", "-o", type=Path)
    p_rep.add_argument("--backend", choices=("numba", "numpy"))
    return parser


def _emit(text: str, output: Optional[Path]):
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "reproduce":
            values = _parse_csv_floats(args.example1_values, "--example1-values")
            max_n = None if args.max_n is None else int(args.max_n)
            rep = reproduce(args.table, max_n=max_n, nq=args.nq, seed=args.seed, workers=args.workers,
                            example1_values=values, backend=args.backend)
            _emit(render(rep, args.output_format), args.output)
            return EXIT_OK
        cfg = _load(args)
        if args.command == "run":
            rep = run(cfg, backend=args.backend)
        else:
            rep = sweep(cfg, _parse_csv_ints(args.n_list, "--n-list"), backend=args.backend,
                        dump_dir=args.dump_walks)
        _emit(render(rep, cfg.output_format), args.output)
        return EXIT_OK
    except ConfigError as exc:
        print(f"kelvinwalk: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvariantError as exc:
        print(f"kelvinwalk: internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
