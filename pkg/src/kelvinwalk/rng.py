"""Counter-based Gaussian streams, one per trajectory.

Every walk ``i`` under a master seed owns the key ``stream_key(seed, i)``.
Its ``c``-th raw 64-bit word is ``mix64(key + (c + 1) * GOLDEN)``, a pure
function of ``(key, c)``: nothing is shared between walks, so any
partition of walk indices over workers reproduces the same numbers.

Normals are drawn with a 128-layer ziggurat (Marsaglia & Tsang, in
Doornik's formulation). The fast path uses one word per normal; rejections
consume further words from the same walk's counter.
"""
import math

import numpy as np

from ._accel import njit

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_LAYER_MASK = np.uint64(127)
_ONE = np.uint64(1)
_TWO53 = 1.0 / 9007199254740992.0
_TWO52 = 1.0 / 4503599627370496.0

ZIG_R = 3.442619855899
_ZIG_V = 9.91256303526217e-3


def _ziggurat_tables(n=128, r=ZIG_R, v=_ZIG_V):
    x = np.zeros(n + 1)
    f = math.exp(-0.5 * r * r)
    x[0] = v / f
    x[1] = r
    for i in range(2, n):
        x[i] = math.sqrt(-2.0 * math.log(v / x[i - 1] + f))
        f = math.exp(-0.5 * x[i] * x[i])
    x[n] = 0.0
    ratio = x[1:] / x[:-1]
    return x, ratio


ZIG_X, ZIG_RATIO = _ziggurat_tables()


@njit(cache=True, nogil=True)
def mix64(z):
    """SplitMix64 finaliser (a bijection of uint64)."""
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit(cache=True, nogil=True)
def stream_key(seed, index):
    return mix64(mix64(seed ^ mix64((index + _ONE) * GOLDEN)) + GOLDEN)


@njit(cache=True, nogil=True)
def raw(key, counter):
    return mix64(key + (counter + _ONE) * GOLDEN)


@njit(cache=True, nogil=True)
def uniform(key, counter):
    """Uniform on the open interval (0, 1)."""
    return (float(np.int64(raw(key, counter) >> _S11)) + 0.5) * _TWO53


@njit(cache=True, nogil=True, inline="always")
def normal(key, counter):
    """Standard normal variate starting at ``counter``.

    Returns ``(z, next_counter)``.
    """
    while True:
        bits = raw(key, counter)
        counter += _ONE
        i = np.int64(bits & _LAYER_MASK)
        u = float(np.int64(bits >> _S11)) * _TWO52 - 1.0
        if abs(u) < ZIG_RATIO[i]:
            return u * ZIG_X[i], counter
        if i == 0:
            while True:
                x = math.log(uniform(key, counter)) / ZIG_R
                y = math.log(uniform(key, counter + _ONE))
                counter += _ONE + _ONE
                if -2.0 * y >= x * x:
                    if u < 0.0:
                        return x - ZIG_R, counter
                    return ZIG_R - x, counter
        x = u * ZIG_X[i]
        f0 = math.exp(-0.5 * (ZIG_X[i] * ZIG_X[i] - x * x))
        f1 = math.exp(-0.5 * (ZIG_X[i + 1] * ZIG_X[i + 1] - x * x))
        w = uniform(key, counter)
        counter += _ONE
        if f1 + w * (f0 - f1) < 1.0:
            return x, counter


# Vectorised twins for the numpy backend: same words, same arithmetic.

def mix64_np(z):
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> _S30)) * _M1
        z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def stream_keys_np(seed, indices):
    seed = np.uint64(seed)
    idx = np.asarray(indices, dtype=np.uint64)
    with np.errstate(over="ignore"):
        inner = mix64_np((idx + _ONE) * GOLDEN)
        return mix64_np(mix64_np(seed ^ inner) + GOLDEN)


def raw_np(keys, counters):
    with np.errstate(over="ignore"):
        return mix64_np(keys + (counters + _ONE) * GOLDEN)


def uniform_np(keys, counters):
    return ((raw_np(keys, counters) >> _S11).astype(np.float64) + 0.5) * _TWO53


def normal_np(keys, counters):
    """One normal per stream; advances ``counters`` in place."""
    z = np.empty(len(keys))
    todo = np.arange(len(keys))
    while todo.size:
        c = counters[todo]
        bits = raw_np(keys[todo], c)
        counters[todo] = c + _ONE
        layer = (bits & _LAYER_MASK).astype(np.intp)
        u = (bits >> _S11).astype(np.float64) * _TWO52 - 1.0
        fast = np.abs(u) < ZIG_RATIO[layer]
        z[todo[fast]] = u[fast] * ZIG_X[layer[fast]]
        slow = ~fast
        todo = _reject_round(keys, counters, z, todo[slow], layer[slow], u[slow])
    return z


def _reject_round(keys, counters, z, todo, layer, u):
    """Resolve tail/wedge draws for ``todo``; return the rows that restart."""
    tail = layer == 0
    if tail.any():
        rows = todo[tail]
        sign = u[tail] < 0.0
        pending = np.ones(rows.size, dtype=bool)
        while pending.any():
            r = rows[pending]
            c = counters[r]
            x = np.log(uniform_np(keys[r], c)) / ZIG_R
            y = np.log(uniform_np(keys[r], c + _ONE))
            counters[r] = c + _ONE + _ONE
            acc = -2.0 * y >= x * x
            s = sign[pending]
            z[r[acc]] = np.where(s[acc], x[acc] - ZIG_R, ZIG_R - x[acc])
            idx = np.flatnonzero(pending)
            pending[idx[acc]] = False
    wedge = ~tail
    if not wedge.any():
        return todo[:0]
    rows = todo[wedge]
    i = layer[wedge]
    x = u[wedge] * ZIG_X[i]
    f0 = np.exp(-0.5 * (ZIG_X[i] * ZIG_X[i] - x * x))
    f1 = np.exp(-0.5 * (ZIG_X[i + 1] * ZIG_X[i + 1] - x * x))
    w = uniform_np(keys[rows], counters[rows])
    counters[rows] += _ONE
    acc = f1 + w * (f0 - f1) < 1.0
    z[rows[acc]] = x[acc]
    return rows[~acc]


class Stream:
    """Gaussian stream of one trajectory, addressed by ``(seed, index)``.

    Stateful: successive ``normal()`` calls walk the stream's counter.
    """

    def __init__(self, seed, index):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self.index = int(index)
        with np.errstate(over="ignore"):
            self.key = np.uint64(stream_key(np.uint64(self.seed), np.uint64(self.index)))
        self.counter = np.uint64(0)

    def normal(self):
        with np.errstate(over="ignore"):
            z, counter = normal(self.key, np.uint64(self.counter))
        self.counter = np.uint64(counter)
        return float(z)

    def draws(self, n=3):
        return np.array([self.normal() for _ in range(n)])

    def __repr__(self):
        return f"Stream(seed={self.seed}, index={self.index}, counter={int(self.counter)})"
