"""Vectorized numpy implementations of the hot kernels.

Selected when ``WASSER_INFER_BACKEND=numpy`` (or when numba is unavailable).
Must stay semantically identical to ``_kernels_numba``; the cross-backend
tests hold the two lanes against each other.
"""

import numpy as np
from scipy.special import erfc as _erfc

_P_LOW = 0.02425
_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)
_SQRT2 = np.sqrt(2.0)

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)


def _abs_pow(d: np.ndarray, p: float) -> np.ndarray:
    if p == 2.0:
        return d * d
    if p == 1.0:
        return d
    return d ** p


def merged_steps(x: np.ndarray, y: np.ndarray):
    """Common refinement of the two empirical quantile grids.

    Breakpoints i/n and j/m are compared as the integers i*m and j*n over the
    denominator n*m, so grid collisions (e.g. n=2, m=4) are classified exactly.
    Returns (interval widths, x step index, y step index) per merged interval.
    """
    n = x.shape[0]
    m = y.shape[0]
    bx = np.arange(1, n + 1, dtype=np.int64) * m
    by = np.arange(1, m + 1, dtype=np.int64) * n
    cuts = np.union1d(bx, by)
    widths = np.diff(cuts, prepend=np.int64(0)) / float(n * m)
    ix = np.searchsorted(bx, cuts, side="left")
    iy = np.searchsorted(by, cuts, side="left")
    return widths, ix, iy


def two_sample_cost(x: np.ndarray, y: np.ndarray, p: float) -> float:
    """Exact integral of |F_n^{-1} - G_m^{-1}|^p over (0,1) for sorted samples."""
    widths, ix, iy = merged_steps(x, y)
    return float(np.dot(widths, _abs_pow(np.abs(x[ix] - y[iy]), p)))


def transport_displacement(x: np.ndarray, y: np.ndarray, p: float) -> np.ndarray:
    """Cumulative displacement-cost increments of x against y's quantile grid.

    Element i-1 (1-based i) is the sum over j=2..i of
    |x_(j) - q_j|^p - |x_(j-1) - q_j|^p with q_j the y-quantile at (j-1)/n,
    evaluated through the exact integer index ceil((j-1)*m/n).
    """
    n = x.shape[0]
    m = y.shape[0]
    j = np.arange(1, n, dtype=np.int64)
    q = y[(j * m + n - 1) // n - 1]
    inc = _abs_pow(np.abs(x[1:] - q), p) - _abs_pow(np.abs(x[:-1] - q), p)
    d = np.empty(n, dtype=np.float64)
    d[0] = 0.0
    np.cumsum(inc, out=d[1:])
    return d


def _mix64(z: np.ndarray) -> np.ndarray:
    # splitmix64 finalizer on uint64 arrays (wrapping arithmetic).
    z = z ^ (z >> np.uint64(30))
    z = z * _MIX_A
    z = z ^ (z >> np.uint64(27))
    z = z * _MIX_B
    return z ^ (z >> np.uint64(31))


def stream_uniforms(key: int, start: int, count: int) -> np.ndarray:
    """Counter-based uniforms in (0,1): value i is mix64(key + (i+1)*GOLDEN)."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = _mix64(np.uint64(key) + idx * _GOLDEN)
    return ((z >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53


def ndtr_vec(x: np.ndarray) -> np.ndarray:
    """Standard normal CDF, elementwise."""
    x = np.asarray(x, dtype=np.float64)
    return 0.5 * _erfc(-x / _SQRT2)


def ndtri_vec(t: np.ndarray) -> np.ndarray:
    """Inverse standard normal CDF, elementwise; Acklam + one Halley step."""
    t = np.asarray(t, dtype=np.float64)
    s = np.where(t > 0.5, 1.0 - t, t)
    sign = np.where(t > 0.5, -1.0, 1.0)
    x = np.empty_like(s)

    tail = s < _P_LOW
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.sqrt(-2.0 * np.log(np.where(tail, s, 0.5)))
    x_tail = (
        ((((-7.784894002430293e-03 * q - 3.223964580411365e-01) * q
           - 2.400758277161838e+00) * q - 2.549732539343734e+00) * q
         + 4.374664141464968e+00) * q + 2.938163982698783e+00
    ) / (
        (((7.784695709041462e-03 * q + 3.224671290700398e-01) * q
          + 2.445134137142996e+00) * q + 3.754408661907416e+00) * q + 1.0
    )
    qc = s - 0.5
    r = qc * qc
    x_mid = qc * (
        ((((-3.969683028665376e+01 * r + 2.209460984245205e+02) * r
           - 2.759285104469687e+02) * r + 1.383577518672690e+02) * r
         - 3.066479806614716e+01) * r + 2.506628277459239e+00
    ) / (
        ((((-5.447609879822406e+01 * r + 1.615858368580409e+02) * r
           - 1.556989798598866e+02) * r + 6.680131188771972e+01) * r
         - 1.328068155288572e+01) * r + 1.0
    )
    np.copyto(x, np.where(tail, x_tail, x_mid))

    pdf = np.exp(-0.5 * x * x) * _INV_SQRT_2PI
    with np.errstate(divide="ignore", invalid="ignore"):
        err = 0.5 * _erfc(-x / _SQRT2) - s
        u = err / pdf
        refined = x - u / (1.0 + 0.5 * x * u)
    x = np.where((pdf > 0.0) & np.isfinite(refined), refined, x)

    out = sign * x
    return np.where((t > 0.0) & (t < 1.0), out, np.nan)


def stream_normals(key: int, start: int, count: int) -> np.ndarray:
    """Standard normal draws from the counter-based stream."""
    return ndtri_vec(stream_uniforms(key, start, count))
