"""Asymptotic inference on the empirical transport cost.

The influence function behind the CLT is

    c_p(t) = integral from Q_f(1/2) to Q_f(t) of h_p'(s - Q_g(F(s))) ds,
    h_p'(v) = p * sgn(v) * |v|^(p-1),

whose centered L2 norm is the asymptotic variance.  For empirical marginals
the transport map Q_g(F(s)) is a step function, so c_p telescopes into exact
finite sums; the plug-in variance estimator accumulates the same increments as
running prefix sums in O(n), and ``variance_oracle_integral`` recomputes the
piecewise-constant c_p per piece from its definition as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .distributions import (
    QuantileFunction,
    SortedSample,
    _quantile_ranks,
    normal_quantile,
    quantile_fn_of,
)
from .errors import DomainError, SampleTooSmall
from .transport import _gauss_expect, wasserstein_pp_two_sample

# ---------------------------------------------------------------------------
# results


@dataclass(frozen=True)
class VarianceEstimate:
    """Plug-in estimate of the asymptotic variance of W_p^p(F_n, G_m)."""

    sigma2_1: float
    sigma2_2: float
    sigma2_combined: float
    d1: np.ndarray
    d2: np.ndarray


@dataclass(frozen=True)
class OneSampleVariance:
    """Same construction against an analytic target quantile."""

    sigma2: float
    d: np.ndarray


@dataclass(frozen=True)
class SimilarityVerdict:
    """Confidence interval and (optionally) the one-sided similarity decision."""

    statistic: float
    alpha: float
    ci_low: float
    ci_high: float
    ci_low_clipped: float
    sigma2_combined: float
    p: float
    n: int
    m: int
    delta0: float | None = None
    threshold: float | None = None
    reject_null: bool | None = None
    outside_theory: bool = False

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "alpha": self.alpha,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "ci_low_clipped": self.ci_low_clipped,
            "sigma2_combined": self.sigma2_combined,
            "p": self.p,
            "n": self.n,
            "m": self.m,
            "delta0": self.delta0,
            "threshold": self.threshold,
            "reject_null": self.reject_null,
            "outside_theory": self.outside_theory,
        }


# ---------------------------------------------------------------------------
# c_p evaluation


def _hp_prime(v: np.ndarray, p: float) -> np.ndarray:
    return p * np.sign(v) * np.abs(v) ** (p - 1.0)


def _abs_pow(v: np.ndarray, p: float):
    if p == 2.0:
        return v * v
    if p == 1.0:
        return v
    return v ** p


def _cp_step_f(t: float, x: np.ndarray, gq: QuantileFunction, p: float) -> float:
    """c_p(t) for an empirical first marginal: exact telescoped sum."""
    n = x.shape[0]
    i = int(_quantile_ranks(np.asarray([t], dtype=np.float64), n)[0])
    i0 = (n + 1) // 2  # rank of the empirical median anchor Q(1/2)
    if i == i0:
        return 0.0
    jlo, jhi = (i0 + 1, i) if i > i0 else (i + 1, i0)
    js = np.arange(jlo, jhi + 1, dtype=np.int64)
    if gq.kind == "empirical":
        yv = gq.sample.values
        m = yv.shape[0]
        q = yv[((js - 1) * m + n - 1) // n - 1]
    else:
        q = np.asarray(gq.eval((js - 1.0) / n), dtype=np.float64)
    total = float(
        np.sum(_abs_pow(np.abs(x[js - 1] - q), p) - _abs_pow(np.abs(x[js - 2] - q), p))
    )
    return total if i > i0 else -total


def _cdf_of(fq: QuantileFunction):
    if fq.kind == "gaussian":
        return fq.dist.cdf

    def numeric_cdf(s):
        s_arr = np.atleast_1d(np.asarray(s, dtype=np.float64))
        out = np.empty_like(s_arr)
        for idx, sv in enumerate(s_arr):
            lo, hi = 1e-12, 1.0 - 1e-12
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                if fq.eval(mid) < sv:
                    lo = mid
                else:
                    hi = mid
            out[idx] = 0.5 * (lo + hi)
        return out if np.ndim(s) else float(out[0])

    return numeric_cdf


def _cp_smooth_f(t: float, fq: QuantileFunction, gq: QuantileFunction, p: float) -> float:
    """c_p(t) for an analytic first marginal."""
    a = float(fq.eval(0.5))
    b = float(fq.eval(t))
    if a == b:
        return 0.0
    sign = 1.0 if b > a else -1.0
    lo, hi = (a, b) if a < b else (b, a)
    u_lo, u_hi = (0.5, t) if b > a else (t, 0.5)

    if gq.kind == "empirical":
        # The transport map is a step function of s: integrate each step exactly.
        yv = gq.sample.values
        m = yv.shape[0]
        j_first = int(math.floor(u_lo * m)) + 1
        j_last = int(_quantile_ranks(np.asarray([u_hi]), m)[0])
        bounds = [lo]
        bounds.extend(float(fq.eval(j / m)) for j in range(j_first, j_last))
        bounds.append(hi)
        total = 0.0
        for k in range(len(bounds) - 1):
            q = yv[j_first + k - 1]
            total += abs(bounds[k + 1] - q) ** p - abs(bounds[k] - q) ** p
        return sign * total

    cdf = _cdf_of(fq)

    def psi(s):
        return s - np.asarray(gq.eval(cdf(s)), dtype=np.float64)

    # Bracket sign changes of s - Q_g(F(s)) on a scan grid, then bisect.
    grid = np.linspace(lo, hi, 129)
    vals = psi(grid)
    roots = []
    for k in range(len(grid) - 1):
        va, vb = vals[k], vals[k + 1]
        if va == 0.0:
            roots.append(float(grid[k]))
        elif va * vb < 0.0:
            ga, gb = float(grid[k]), float(grid[k + 1])
            for _ in range(60):
                mid = 0.5 * (ga + gb)
                if float(psi(np.asarray([mid]))[0]) * va < 0.0:
                    gb = mid
                else:
                    ga = mid
            roots.append(0.5 * (ga + gb))

    nodes, weights = np.polynomial.legendre.leggauss(24)
    cuts = [lo] + sorted(r for r in roots if lo < r < hi) + [hi]
    total = 0.0
    for ca, cb in zip(cuts[:-1], cuts[1:]):
        panels = max(1, int(np.ceil((cb - ca) / max((hi - lo) / 16.0, 1e-300))))
        edges = np.linspace(ca, cb, panels + 1)
        for ea, eb in zip(edges[:-1], edges[1:]):
            half = 0.5 * (eb - ea)
            s = 0.5 * (eb + ea) + half * nodes
            total += half * float(np.dot(weights, _hp_prime(psi(s), p)))
    return sign * total


def cp_empirical(t: float, f, g, p: float) -> float:
    """Influence-function value c_p(t; F, G) for any mix of quantile kinds."""
    p = float(p)
    if not (0.0 < t < 1.0):
        raise DomainError(f"t must lie in (0, 1), got {t}")
    if not p > 1.0:
        raise DomainError(f"c_p needs p > 1, got {p}")
    fq = quantile_fn_of(f)
    gq = quantile_fn_of(g)
    if fq.kind == "empirical":
        return _cp_step_f(t, fq.sample.values, gq, p)
    return _cp_smooth_f(t, fq, gq, p)


# ---------------------------------------------------------------------------
# closed forms for the two Gaussian benchmark models


@dataclass(frozen=True)
class CpClosedForm:
    """Analytic c_p for N(0,1) vs N(mu,1) ('location') or N(mu,lam) ('scale_location')."""

    model: str
    p: float
    mu: float
    lam: float = 1.0

    @staticmethod
    def location(mu: float, p: float) -> "CpClosedForm":
        return CpClosedForm(model="location", p=float(p), mu=float(mu))

    @staticmethod
    def scale_location(mu: float, lam: float, p: float) -> "CpClosedForm":
        if lam == 1.0:
            raise DomainError("lam == 1 is the location model")
        return CpClosedForm(model="scale_location", p=float(p), mu=float(mu), lam=float(lam))

    def _z(self, t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
        return kernels.ndtri_vec(t_arr)

    def cp_fg(self, t):
        z = self._z(t)
        if self.model == "location":
            out = -self.p * np.sign(self.mu) * abs(self.mu) ** (self.p - 1.0) * z
        else:
            c = 1.0 - self.lam
            out = (np.abs(c * z - self.mu) ** self.p - abs(self.mu) ** self.p) / c
        return float(out[0]) if np.ndim(t) == 0 else out

    def cp_gf(self, t):
        z = self._z(t)
        if self.model == "location":
            out = self.p * np.sign(self.mu) * abs(self.mu) ** (self.p - 1.0) * z
        else:
            c = self.lam - 1.0
            out = self.lam / c * (np.abs(c * z + self.mu) ** self.p - abs(self.mu) ** self.p)
        return float(out[0]) if np.ndim(t) == 0 else out

    def _centered_l2(self, fn, kink: float) -> float:
        mean = _gauss_expect(fn, kinks=(kink,), order=32)
        second = _gauss_expect(lambda z: np.asarray(fn(z)) ** 2, kinks=(kink,), order=32)
        return second - mean * mean

    def sigma2_fg(self) -> float:
        if self.model == "location":
            return self.p ** 2 * abs(self.mu) ** (2.0 * (self.p - 1.0))
        c = 1.0 - self.lam
        return self._centered_l2(
            lambda z: (np.abs(c * z - self.mu) ** self.p - abs(self.mu) ** self.p) / c,
            kink=self.mu / c,
        )

    def sigma2_gf(self) -> float:
        if self.model == "location":
            return self.p ** 2 * abs(self.mu) ** (2.0 * (self.p - 1.0))
        c = self.lam - 1.0
        return self._centered_l2(
            lambda z: self.lam / c * (np.abs(c * z + self.mu) ** self.p - abs(self.mu) ** self.p),
            kink=-self.mu / c,
        )

    def combined_variance(self, n: int, m: int) -> float:
        return m / (n + m) * self.sigma2_fg() + n / (n + m) * self.sigma2_gf()


# ---------------------------------------------------------------------------
# variance estimation


def estimate_variance(x: SortedSample, y: SortedSample, p: float) -> VarianceEstimate:
    """Plug-in asymptotic-variance estimate from the displacement prefix sums."""
    p = float(p)
    if not p >= 1.0:
        raise DomainError(f"cost exponent p must be >= 1, got {p}")
    n, m = x.n, y.n
    if n < 2 or m < 2:
        raise SampleTooSmall(f"variance estimation needs n, m >= 2, got n={n}, m={m}")
    d1 = kernels.transport_displacement(x.values, y.values, p)
    d2 = kernels.transport_displacement(y.values, x.values, p)
    s1 = float(np.var(d1))
    s2 = float(np.var(d2))
    combined = m / (n + m) * s1 + n / (n + m) * s2
    return VarianceEstimate(sigma2_1=s1, sigma2_2=s2, sigma2_combined=combined, d1=d1, d2=d2)


def estimate_variance_one_sample(x: SortedSample, g, p: float) -> OneSampleVariance:
    """Variance estimate against an analytic target: the same sums with Q_g((j-1)/n)."""
    p = float(p)
    if not p >= 1.0:
        raise DomainError(f"cost exponent p must be >= 1, got {p}")
    n = x.n
    if n < 2:
        raise SampleTooSmall(f"variance estimation needs n >= 2, got n={n}")
    gq = quantile_fn_of(g)
    q = np.asarray(gq.eval(np.arange(1, n, dtype=np.float64) / n), dtype=np.float64)
    xv = x.values
    inc = _abs_pow(np.abs(xv[1:] - q), p) - _abs_pow(np.abs(xv[:-1] - q), p)
    d = np.empty(n, dtype=np.float64)
    d[0] = 0.0
    np.cumsum(inc, out=d[1:])
    return OneSampleVariance(sigma2=float(np.var(d)), d=d)


def variance_oracle_integral(x: SortedSample, y: SortedSample, p: float) -> float:
    """Centered L2 norm of the piecewise-constant c_p, each piece summed afresh.

    Exists solely as an independent O(n^2) oracle for ``estimate_variance``:
    the two must agree to float accuracy because c_p is constant on each
    ((i-1)/n, i/n] and differs from the displacement prefix sum by the
    constant anchor term, which centering removes.
    """
    p = float(p)
    if not p >= 1.0:
        raise DomainError(f"cost exponent p must be >= 1, got {p}")
    n, m = x.n, y.n
    if n < 2 or m < 2:
        raise SampleTooSmall(f"need n, m >= 2, got n={n}, m={m}")
    gq = quantile_fn_of(y)
    c = np.array(
        [_cp_step_f((i - 0.5) / n, x.values, gq, p) for i in range(1, n + 1)],
        dtype=np.float64,
    )
    return float(np.mean(c * c) - np.mean(c) ** 2)


# ---------------------------------------------------------------------------
# interval and test


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    return alpha


def confidence_interval(
    x: SortedSample, y: SortedSample, p: float, alpha: float
) -> SimilarityVerdict:
    """Two-sided interval for W_p^p(F, G) centered at the empirical cost."""
    alpha = _check_alpha(alpha)
    stat = wasserstein_pp_two_sample(x, y, p).cost_p
    ve = estimate_variance(x, y, p)
    n, m = x.n, y.n
    halfwidth = math.sqrt((n + m) / (n * m)) * math.sqrt(ve.sigma2_combined) \
        * normal_quantile(1.0 - alpha / 2.0)
    lo = stat - halfwidth
    return SimilarityVerdict(
        statistic=stat, alpha=alpha, ci_low=lo, ci_high=stat + halfwidth,
        ci_low_clipped=max(0.0, lo), sigma2_combined=ve.sigma2_combined,
        p=float(p), n=n, m=m, outside_theory=(float(p) == 1.0),
    )


def similarity_test(
    x: SortedSample, y: SortedSample, p: float, delta0: float, alpha: float
) -> SimilarityVerdict:
    """One-sided test of H0: W_p >= delta0 against H1: W_p < delta0.

    Rejecting certifies the two distributions are within delta0 of each other;
    the returned verdict also carries the two-sided interval at the same alpha.
    """
    alpha = _check_alpha(alpha)
    delta0 = float(delta0)
    if not delta0 > 0.0:
        raise DomainError(f"delta0 must be positive, got {delta0}")
    p = float(p)
    base = confidence_interval(x, y, p, alpha)
    n, m = x.n, y.n
    margin = math.sqrt((n + m) / (n * m)) * math.sqrt(base.sigma2_combined) \
        * normal_quantile(1.0 - alpha)
    threshold = delta0 ** p - margin
    return SimilarityVerdict(
        statistic=base.statistic, alpha=alpha, ci_low=base.ci_low, ci_high=base.ci_high,
        ci_low_clipped=base.ci_low_clipped, sigma2_combined=base.sigma2_combined,
        p=p, n=n, m=m, delta0=delta0, threshold=threshold,
        reject_null=bool(base.statistic < threshold), outside_theory=(p == 1.0),
    )
