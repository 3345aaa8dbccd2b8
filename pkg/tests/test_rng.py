import numpy as np
import pytest
from scipy import stats

from kelvinwalk import rng


def test_numba_and_numpy_normals_agree_bitwise():
    keys = rng.stream_keys_np(12345, np.arange(2000))
    counters = np.zeros(2000, dtype=np.uint64)
    cols = [rng.normal_np(keys, counters) for _ in range(20)]
    vec = np.stack(cols, axis=1)
    for i in range(0, 2000, 97):
        s = rng.Stream(12345, i)
        scalar = np.array([s.normal() for _ in range(20)])
        np.testing.assert_array_equal(scalar, vec[i])
        assert s.counter == counters[i]


def test_stream_keys_match_scalar():
    idx = np.arange(50, dtype=np.uint64)
    keys = rng.stream_keys_np(7, idx)
    for i in (0, 1, 49):
        assert rng.Stream(7, i).key == keys[i]


def test_streams_are_distinct_and_reproducible():
    a = rng.Stream(0, 0).draws(8)
    b = rng.Stream(0, 1).draws(8)
    c = rng.Stream(1, 0).draws(8)
    assert not np.array_equal(a, b) and not np.array_equal(a, c)
    np.testing.assert_array_equal(a, rng.Stream(0, 0).draws(8))


def test_normal_distribution():
    keys = rng.stream_keys_np(99, np.arange(200_000))
    z = rng.normal_np(keys, np.zeros(200_000, dtype=np.uint64))
    assert abs(z.mean()) < 0.01
    assert abs(z.var() - 1) < 0.015
    assert stats.kstest(z, "norm").pvalue > 1e-3
    # the tail path must fire and land beyond the base strip
    assert np.any(np.abs(z) > rng.ZIG_R)


def test_uniform_open_interval():
    keys = rng.stream_keys_np(3, np.arange(100_000))
    u = rng.uniform_np(keys, np.zeros(100_000, dtype=np.uint64))
    assert u.min() > 0 and u.max() < 1
    assert stats.kstest(u, "uniform").pvalue > 1e-3


def test_consecutive_draws_uncorrelated():
    keys = rng.stream_keys_np(5, np.arange(100_000))
    ctr = np.zeros(100_000, dtype=np.uint64)
    x, y = rng.normal_np(keys, ctr), rng.normal_np(keys, ctr)
    assert abs(np.corrcoef(x, y)[0, 1]) < 0.015


def test_ziggurat_tables_consistent():
    # equal-area layers: x_i * (f(x_{i+1}) - f(x_i)) is constant
    x = rng.ZIG_X
    f = np.exp(-0.5 * x**2)
    areas = x[1:-1] * (f[2:] - f[1:-1])
    np.testing.assert_allclose(areas, areas[0], rtol=1e-8)
    assert x[-1] == 0.0
