"""Monte Carlo solution of the Dirichlet problem in and outside a sphere.

Interior values are sample means of boundary data at the exit points of
discretised Brownian paths. Exterior values go through inversion: solve at
the image point inside the sphere, then rescale by ``R/|x|``.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

import numpy as np

from . import kernels
from ._accel import resolve_backend
from .boundary import BoundaryFunction
from .errors import DomainError, InvariantError
from .geometry import (
    Location,
    SphereDomain,
    as_point,
    classify,
    invert,
    is_infinity,
    norm,
    reconstruct_exterior_value,
)
from .rng import Stream

log = logging.getLogger(__name__)

_CHUNK = {"numba": 4096, "numpy": 65536}


@dataclass(frozen=True)
class WalkConfig:
    """Walk discretisation and sample size.

    ``nq`` sets the per-coordinate step ``1/nq`` (time step ``1/nq**2``);
    ``max_steps`` defaults to ``100 * nq**2``.
    """

    nq: int = 100
    n_walks: int = 100_000
    master_seed: int = 0
    max_steps: Optional[int] = None

    def __post_init__(self):
        if int(self.nq) != self.nq or self.nq < 1:
            raise ValueError(f"nq must be a positive integer, got {self.nq!r}")
        if int(self.n_walks) != self.n_walks or self.n_walks < 1:
            raise ValueError(f"n_walks must be a positive integer, got {self.n_walks!r}")
        if not 0 <= int(self.master_seed) < 2**64:
            raise ValueError("master_seed must fit in an unsigned 64-bit integer")
        object.__setattr__(self, "nq", int(self.nq))
        object.__setattr__(self, "n_walks", int(self.n_walks))
        object.__setattr__(self, "master_seed", int(self.master_seed))
        if self.max_steps is None:
            object.__setattr__(self, "max_steps", 100 * self.nq**2)
        elif self.max_steps < self.nq**2:
            raise ValueError(f"max_steps must be at least nq**2 = {self.nq**2}")


@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float
    n_walks: int
    mean_steps: float
    truncated: int = 0


class Trajectory(NamedTuple):
    value: float
    steps: int
    truncated: bool
    exit: np.ndarray


@dataclass
class WalkSamples:
    """Per-walk output of one batch, indexed by walk number."""

    values: np.ndarray
    steps: np.ndarray
    truncated: np.ndarray
    exits: np.ndarray

    def summary(self) -> Estimate:
        return summarize(self.values, self.steps, self.truncated)

    def head(self, n: int) -> "WalkSamples":
        return WalkSamples(self.values[:n], self.steps[:n], self.truncated[:n], self.exits[:n])


def summarize(values, steps, truncated) -> Estimate:
    """Sample mean and standard error, computed about the first sample.

    Shifting by ``values[0]`` makes constant data come out exact.
    """
    values = np.asarray(values, dtype=np.float64)
    n = values.size
    if n == 0:
        raise ValueError("no samples")
    shift = values[0]
    dev = values - shift
    dmean = dev.sum() / n
    mean = float(shift + dmean)
    if n > 1:
        var = float(np.sum((dev - dmean) ** 2)) / (n - 1)
        stderr = math.sqrt(var / n)
    else:
        stderr = 0.0
    return Estimate(
        mean=mean,
        stderr=stderr,
        n_walks=n,
        mean_steps=float(np.mean(steps)),
        truncated=int(np.count_nonzero(truncated)),
    )


def wiener_step(p, draws, nq: int) -> np.ndarray:
    """Advance ``p`` by ``draws / nq`` (one step of length ``1/nq**2`` in time)."""
    return np.asarray(p, dtype=np.float64) + np.asarray(draws, dtype=np.float64) / nq


def exit_point(prev, nxt, radius: float) -> np.ndarray:
    """Point where the step ``prev -> nxt`` leaves the sphere.

    Of the two line/sphere intersections, returns the one nearest ``nxt``,
    rescaled to norm exactly ``radius``.
    """
    p = as_point(prev)
    q = as_point(nxt)
    x, y, z, t, status = kernels.exit_segment(p[0], p[1], p[2], q[0], q[1], q[2], float(radius))
    if status == kernels.DEGENERATE:
        raise InvariantError("exit_point: zero-length step")
    if status == kernels.NO_CROSSING:
        raise InvariantError("exit_point: segment does not cross the sphere (discriminant <= 0)")
    if not -1e-12 <= t <= 1.0 + 1e-12:
        log.warning("exit_point: nearest-root choice t=%r lies outside the step", t)
    return np.array([x, y, z])


def run_trajectory(start, bf: BoundaryFunction, cfg: WalkConfig, stream: Stream) -> Trajectory:
    """One walk in plain Python, drawing from ``stream``.

    Slow; this is the readable reference for the batch kernels, which
    reproduce it walk for walk.
    """
    dom = SphereDomain(bf.radius)
    p = as_point(start)
    if classify(p, dom) is not Location.INSIDE:
        raise DomainError("walk must start strictly inside the sphere")
    k = 0
    while True:
        k += 1
        q = wiener_step(p, stream.draws(3), cfg.nq)
        loc = classify(q, dom)
        if loc is Location.ON_SURFACE:
            eta = q * (dom.radius / norm(q))
            return Trajectory(bf(eta), k, False, eta)
        if loc is Location.OUTSIDE:
            eta = exit_point(p, q, dom.radius)
            return Trajectory(bf(eta), k, False, eta)
        p = q
        if k >= cfg.max_steps:
            r = norm(p)
            eta = p * (dom.radius / r) if r > 0 else np.array([0.0, 0.0, dom.radius])
            return Trajectory(bf(eta), k, True, eta)


def sample_walks(
    xi,
    bf: BoundaryFunction,
    cfg: WalkConfig,
    *,
    workers: int = 1,
    backend: Optional[str] = None,
    first: int = 0,
) -> WalkSamples:
    """Run walks ``first .. first + cfg.n_walks - 1`` from ``xi``.

    Walk ``i`` always draws from stream ``(cfg.master_seed, i)``, so the
    output does not depend on ``workers``.
    """
    backend = resolve_backend(backend)
    dom = SphereDomain(bf.radius)
    xi = as_point(xi)
    if classify(xi, dom) is not Location.INSIDE:
        raise DomainError(f"start point must be strictly inside the sphere, got |xi|={norm(xi)!r}")
    n = cfg.n_walks
    exits = np.empty((n, 3))
    steps = np.empty(n, dtype=np.int64)
    truncated = np.empty(n, dtype=np.bool_)
    status = np.empty(n, dtype=np.int8)
    size = _CHUNK[backend]
    chunks = [(lo, min(lo + size, n)) for lo in range(0, n, size)]

    def work(chunk):
        lo, hi = chunk
        e, s, t, st = kernels.walk_batch(
            backend, xi, dom.radius, cfg.nq, cfg.master_seed, first + lo, hi - lo, cfg.max_steps
        )
        exits[lo:hi] = e
        steps[lo:hi] = s
        truncated[lo:hi] = t
        status[lo:hi] = st

    workers = max(1, int(workers))
    if workers == 1 or len(chunks) == 1:
        for c in chunks:
            work(c)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(work, chunks))
    if np.any(status != kernels.OK):
        raise InvariantError(f"{int(np.count_nonzero(status))} walks produced a degenerate exit segment")
    values = bf.evaluate_many(exits)
    return WalkSamples(values=values, steps=steps, truncated=truncated, exits=exits)


def solve_interior(
    xi,
    bf: BoundaryFunction,
    cfg: WalkConfig,
    *,
    workers: int = 1,
    backend: Optional[str] = None,
) -> Estimate:
    """Estimate the harmonic extension of ``bf`` at the interior point ``xi``."""
    return sample_walks(xi, bf, cfg, workers=workers, backend=backend).summary()


def solve_exterior(
    x,
    bf: BoundaryFunction,
    cfg: WalkConfig,
    *,
    workers: int = 1,
    backend: Optional[str] = None,
) -> Estimate:
    """Estimate the decaying exterior solution at ``x`` (or ``INFINITY``)."""
    if is_infinity(x):
        return Estimate(mean=0.0, stderr=0.0, n_walks=0, mean_steps=0.0, truncated=0)
    dom = SphereDomain(bf.radius)
    x = dom.exterior_point(x)
    xi = invert(x, dom.radius)
    est = solve_interior(xi, bf, cfg, workers=workers, backend=backend)
    return to_exterior(est, x, dom.radius)


def to_exterior(est: Estimate, x, radius: float) -> Estimate:
    """Map an interior estimate at ``invert(x)`` to the exterior point ``x``.

    The map is linear, so the standard error scales with the mean.
    """
    return replace(
        est,
        mean=reconstruct_exterior_value(est.mean, x, radius),
        stderr=reconstruct_exterior_value(est.stderr, x, radius),
    )
