"""Batch walkers: simulate walks ``first .. first+n-1`` from a common start.

Each walk takes Gaussian steps of size ``1/nq`` per coordinate until it
leaves the ball; the exit point is where the last segment meets the sphere.
Both backends fill the same output arrays from the same random bits:

* ``walk_batch_numba`` loops walk by walk in compiled code (releases the GIL);
* ``walk_batch_numpy`` advances every live walk one step at a time with
  array operations.
"""
import math

import numpy as np

from ._accel import njit
from .geometry import SURFACE_RTOL
from .rng import normal, normal_np, stream_key, stream_keys_np

# exit_segment status codes
OK = 0
DEGENERATE = 1
NO_CROSSING = 2


@njit(cache=True, nogil=True)
def exit_segment(px, py, pz, qx, qy, qz, radius):
    """Sphere crossing of the segment from ``p`` (inside) to ``q`` (outside).

    Solves ``A t^2 + 2 B t + C = 0`` on the line ``p + t (q - p)``, keeps
    the intersection closest to ``q`` and rescales it to norm ``radius``.
    Returns ``(x, y, z, t, status)``.
    """
    dx = qx - px
    dy = qy - py
    dz = qz - pz
    a = dx * dx + dy * dy + dz * dz
    b = dx * px + dy * py + dz * pz
    c = px * px + py * py + pz * pz - radius * radius
    if a == 0.0:
        return px, py, pz, 0.0, DEGENERATE
    disc = b * b - a * c
    if disc <= 0.0:
        return px, py, pz, 0.0, NO_CROSSING
    sq = math.sqrt(disc)
    # cancellation-free pair of roots
    if b >= 0.0:
        h = -(b + sq)
    else:
        h = sq - b
    t1 = h / a
    t2 = c / h
    x1 = px + t1 * dx
    y1 = py + t1 * dy
    z1 = pz + t1 * dz
    x2 = px + t2 * dx
    y2 = py + t2 * dy
    z2 = pz + t2 * dz
    d1 = (qx - x1) ** 2 + (qy - y1) ** 2 + (qz - z1) ** 2
    d2 = (qx - x2) ** 2 + (qy - y2) ** 2 + (qz - z2) ** 2
    if d1 <= d2:
        x, y, z, t = x1, y1, z1, t1
    else:
        x, y, z, t = x2, y2, z2, t2
    s = radius / math.sqrt(x * x + y * y + z * z)
    return x * s, y * s, z * s, t, OK


@njit(cache=True, nogil=True)
def walk_batch_numba(start, radius, nq, seed, first, n, max_steps, exits, steps, truncated, status):
    r2 = radius * radius
    tol = SURFACE_RTOL * r2
    fnq = float(nq)
    for w in range(n):
        key = stream_key(seed, np.uint64(first + w))
        px = start[0]
        py = start[1]
        pz = start[2]
        ctr = np.uint64(0)
        k = 0
        while True:
            k += 1
            g0, ctr = normal(key, ctr)
            g1, ctr = normal(key, ctr)
            g2, ctr = normal(key, ctr)
            qx = px + g0 / fnq
            qy = py + g1 / fnq
            qz = pz + g2 / fnq
            d = qx * qx + qy * qy + qz * qz
            if abs(d - r2) <= tol:
                s = radius / math.sqrt(d)
                exits[w, 0] = qx * s
                exits[w, 1] = qy * s
                exits[w, 2] = qz * s
                break
            if d > r2:
                ex, ey, ez, _, st = exit_segment(px, py, pz, qx, qy, qz, radius)
                exits[w, 0] = ex
                exits[w, 1] = ey
                exits[w, 2] = ez
                status[w] = st
                break
            px = qx
            py = qy
            pz = qz
            if k >= max_steps:
                if d > 0.0:
                    s = radius / math.sqrt(d)
                    exits[w, 0] = px * s
                    exits[w, 1] = py * s
                    exits[w, 2] = pz * s
                else:
                    exits[w, 0] = 0.0
                    exits[w, 1] = 0.0
                    exits[w, 2] = radius
                truncated[w] = True
                break
        steps[w] = k


def _exit_segment_np(px, py, pz, qx, qy, qz, radius):
    dx = qx - px
    dy = qy - py
    dz = qz - pz
    a = dx * dx + dy * dy + dz * dz
    b = dx * px + dy * py + dz * pz
    c = px * px + py * py + pz * pz - radius * radius
    disc = b * b - a * c
    status = np.where(a == 0.0, DEGENERATE, np.where(disc <= 0.0, NO_CROSSING, OK))
    bad = status != OK
    if bad.any():
        # keep the arithmetic below finite; these rows are reported, not used
        a = np.where(bad, 1.0, a)
        b = np.where(bad, 0.0, b)
        c = np.where(bad, -1.0, c)
        disc = np.where(bad, 1.0, disc)
    sq = np.sqrt(disc)
    h = np.where(b >= 0.0, -(b + sq), sq - b)
    t1 = h / a
    t2 = c / h
    x1 = px + t1 * dx
    y1 = py + t1 * dy
    z1 = pz + t1 * dz
    x2 = px + t2 * dx
    y2 = py + t2 * dy
    z2 = pz + t2 * dz
    d1 = (qx - x1) ** 2 + (qy - y1) ** 2 + (qz - z1) ** 2
    d2 = (qx - x2) ** 2 + (qy - y2) ** 2 + (qz - z2) ** 2
    first = d1 <= d2
    x = np.where(first, x1, x2)
    y = np.where(first, y1, y2)
    z = np.where(first, z1, z2)
    s = radius / np.sqrt(x * x + y * y + z * z)
    return x * s, y * s, z * s, status


def walk_batch_numpy(start, radius, nq, seed, first, n, max_steps, exits, steps, truncated, status):
    r2 = radius * radius
    tol = SURFACE_RTOL * r2
    fnq = float(nq)
    live = np.arange(n)
    keys = stream_keys_np(seed, np.arange(first, first + n, dtype=np.uint64))
    px = np.full(n, float(start[0]))
    py = np.full(n, float(start[1]))
    pz = np.full(n, float(start[2]))
    ctr = np.zeros(n, dtype=np.uint64)
    k = 0
    while live.size:
        k += 1
        g0 = normal_np(keys, ctr)
        g1 = normal_np(keys, ctr)
        g2 = normal_np(keys, ctr)
        qx = px + g0 / fnq
        qy = py + g1 / fnq
        qz = pz + g2 / fnq
        d = qx * qx + qy * qy + qz * qz
        on = np.abs(d - r2) <= tol
        out = ~on & (d > r2)
        if on.any():
            s = radius / np.sqrt(d[on])
            exits[live[on]] = np.column_stack((qx[on] * s, qy[on] * s, qz[on] * s))
        if out.any():
            ex, ey, ez, st = _exit_segment_np(px[out], py[out], pz[out], qx[out], qy[out], qz[out], radius)
            exits[live[out]] = np.column_stack((ex, ey, ez))
            status[live[out]] = st
        inside = ~(on | out)
        steps[live[~inside]] = k
        if k >= max_steps and inside.any():
            rows = live[inside]
            di = d[inside]
            s = np.where(di > 0.0, radius / np.sqrt(np.where(di > 0.0, di, 1.0)), 0.0)
            proj = np.column_stack((qx[inside] * s, qy[inside] * s, qz[inside] * s))
            proj[di == 0.0] = (0.0, 0.0, radius)
            exits[rows] = proj
            truncated[rows] = True
            steps[rows] = k
            break
        live = live[inside]
        keys = keys[inside]
        ctr = ctr[inside]
        px = qx[inside]
        py = qy[inside]
        pz = qz[inside]


def walk_batch(backend, start, radius, nq, seed, first, n, max_steps):
    """Run walks ``first .. first+n-1``; returns ``(exits, steps, truncated, status)``."""
    exits = np.empty((n, 3))
    steps = np.zeros(n, dtype=np.int64)
    truncated = np.zeros(n, dtype=np.bool_)
    status = np.zeros(n, dtype=np.int8)
    start = np.ascontiguousarray(start, dtype=np.float64)
    fn = walk_batch_numba if backend == "numba" else walk_batch_numpy
    fn(start, float(radius), int(nq), np.uint64(seed), int(first), int(n), int(max_steps),
       exits, steps, truncated, status)
    return exits, steps, truncated, status
