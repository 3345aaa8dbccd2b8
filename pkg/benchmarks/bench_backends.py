"""Time the numba and numpy walk kernels on the same walks and check they agree.

    python benchmarks/bench_backends.py [--n-walks 4000] [--nq 100] [--repeat 3]
"""
import argparse
import time

import numpy as np

from kelvinwalk import WalkConfig, example2, sample_walks
from kelvinwalk._accel import USE_NUMBA


def timed(backend, cfg, start, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = sample_walks(start, example2(), cfg, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-walks", type=int, default=4000)
    ap.add_argument("--nq", type=int, default=100)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--start", default="0,0,0")
    args = ap.parse_args(argv)

    start = np.array([float(v) for v in args.start.split(",")])
    cfg = WalkConfig(nq=args.nq, n_walks=args.n_walks, master_seed=0)
    results = {}
    backends = ["numba", "numpy"] if USE_NUMBA else ["numpy"]
    if USE_NUMBA:
        sample_walks(start, example2(), WalkConfig(nq=4, n_walks=2), backend="numba")  # compile
    for b in backends:
        secs, out = timed(b, cfg, start, args.repeat)
        n_steps = int(out.steps.sum())
        results[b] = out
        print(f"{b:>6}: {secs:8.3f} s  {n_steps / secs / 1e6:7.2f} Msteps/s  {1e9 * secs / n_steps:7.1f} ns/step"
              f"  mean={out.summary().mean:.6f}")
    if len(results) == 2:
        a, b = results["numba"], results["numpy"]
        same_steps = np.array_equal(a.steps, b.steps)
        exit_gap = float(np.max(np.abs(a.exits - b.exits)))
        same_vals = float(np.mean(a.values == b.values))
        print(f"agreement: steps identical={same_steps}  max exit gap={exit_gap:.2e}  "
              f"equal values={100 * same_vals:.3f}%")


if __name__ == "__main__":
    main()
