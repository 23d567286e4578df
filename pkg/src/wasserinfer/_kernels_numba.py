"""numba-jitted loop implementations of the hot kernels.

Semantics match ``_kernels_numpy`` exactly; see that module for the contracts.
First call per process triggers compilation (cached on disk afterwards).
"""

import numpy as np
from numba import njit

from . import _special

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)

_ndtri_scalar = njit(cache=True, nogil=True)(_special.ndtri)
_ndtr_scalar = njit(cache=True, nogil=True)(_special.ndtr)


@njit(cache=True, nogil=True)
def two_sample_cost(x, y, p):
    n = x.shape[0]
    m = y.shape[0]
    inv = 1.0 / (n * m)
    i = 0
    j = 0
    prev = 0
    acc = 0.0
    while i < n and j < m:
        nx = (i + 1) * m
        ny = (j + 1) * n
        cur = nx if nx < ny else ny
        w = (cur - prev) * inv
        d = abs(x[i] - y[j])
        if p == 2.0:
            acc += w * d * d
        elif p == 1.0:
            acc += w * d
        else:
            acc += w * d ** p
        if nx == cur:
            i += 1
        if ny == cur:
            j += 1
        prev = cur
    return acc


@njit(cache=True, nogil=True)
def transport_displacement(x, y, p):
    n = x.shape[0]
    m = y.shape[0]
    d = np.zeros(n, dtype=np.float64)
    acc = 0.0
    for j in range(2, n + 1):
        q = y[((j - 1) * m + n - 1) // n - 1]
        a = abs(x[j - 1] - q)
        b = abs(x[j - 2] - q)
        if p == 2.0:
            acc += a * a - b * b
        elif p == 1.0:
            acc += a - b
        else:
            acc += a ** p - b ** p
        d[j - 1] = acc
    return d


@njit(cache=True, nogil=True)
def _mix64(z):
    z = z ^ (z >> np.uint64(30))
    z = z * _MIX_A
    z = z ^ (z >> np.uint64(27))
    z = z * _MIX_B
    return z ^ (z >> np.uint64(31))


@njit(cache=True, nogil=True)
def stream_uniforms(key, start, count):
    out = np.empty(count, dtype=np.float64)
    k = np.uint64(key)
    for i in range(count):
        z = _mix64(k + np.uint64(start + i + 1) * _GOLDEN)
        out[i] = (np.float64(z >> np.uint64(11)) + 0.5) * 2.0 ** -53
    return out


@njit(cache=True, nogil=True)
def ndtr_vec(x):
    out = np.empty(x.shape[0], dtype=np.float64)
    for i in range(x.shape[0]):
        out[i] = _ndtr_scalar(x[i])
    return out


@njit(cache=True, nogil=True)
def ndtri_vec(t):
    out = np.empty(t.shape[0], dtype=np.float64)
    for i in range(t.shape[0]):
        out[i] = _ndtri_scalar(t[i])
    return out


@njit(cache=True, nogil=True)
def stream_normals(key, start, count):
    out = np.empty(count, dtype=np.float64)
    k = np.uint64(key)
    for i in range(count):
        z = _mix64(k + np.uint64(start + i + 1) * _GOLDEN)
        u = (np.float64(z >> np.uint64(11)) + 0.5) * 2.0 ** -53
        out[i] = _ndtri_scalar(u)
    return out
