"""Exact and quadrature-based p-th power transport cost in one dimension.

Two empirical marginals: the integrand |F_n^{-1} - G_m^{-1}|^p is piecewise
constant on the merged grid {i/n} u {j/m}, so the cost is a finite sum and the
sweep computes it exactly (breakpoints compared as integers, never floats).
One empirical sample against an analytic quantile: fixed-order Gauss-Legendre.
For Gaussian targets the integration runs in z = Phi^{-1}(t) space, where the
integrand is smooth against the normal weight; the raw t-space scheme cannot
hold its accuracy near t = 0, 1 where the quantile diverges.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .distributions import (
    GaussianDist,
    QuantileFunction,
    SortedSample,
    quantile_fn_of,
)
from .errors import DomainError, NumericalError

_ZMAX = 10.0
_PANEL = 0.75
# geometric panel grading into |.|^p kinks, where derivatives blow up for non-integer p
_GRADE_RATIO = 0.3
_GRADE_LEVELS = 10


@dataclass(frozen=True)
class TransportResult:
    """W_p^p value plus how it was obtained; m == 0 means an analytic second marginal."""

    cost_p: float
    p: float
    n: int
    m: int
    method: str  # exact_two_sample | quadrature_one_sample | closed_form_gaussian
    outside_theory: bool = False  # p == 1 sits outside the CLT hypotheses

    def to_dict(self) -> dict:
        return {
            "cost_p": self.cost_p,
            "p": self.p,
            "n": self.n,
            "m": self.m,
            "method": self.method,
            "outside_theory": self.outside_theory,
        }


def _check_p(p: float) -> float:
    p = float(p)
    if not p >= 1.0:
        raise DomainError(f"cost exponent p must be >= 1, got {p}")
    return p


@lru_cache(maxsize=32)
def _leggauss(order: int):
    if order < 2:
        raise DomainError(f"quadrature order must be >= 2, got {order}")
    return np.polynomial.legendre.leggauss(order)


def wasserstein_pp_two_sample(x: SortedSample, y: SortedSample, p: float) -> TransportResult:
    """Exact W_p^p between two empirical distributions."""
    p = _check_p(p)
    cost = kernels.two_sample_cost(x.values, y.values, p)
    return TransportResult(
        cost_p=float(cost), p=p, n=x.n, m=y.n,
        method="exact_two_sample", outside_theory=(p == 1.0),
    )


def _abs_pow(d: np.ndarray, p: float) -> np.ndarray:
    if p == 2.0:
        return d * d
    if p == 1.0:
        return d
    return d ** p


def _panels(lo: float, hi: float, kink: float | None) -> list[tuple[float, float]]:
    # Subdivide [lo, hi] at the kink (if interior), chunk to <= _PANEL wide, and
    # grade the chunks touching the kink geometrically into it.
    cuts = [lo]
    if kink is not None and lo < kink < hi:
        cuts.append(float(kink))
    cuts.append(hi)
    out = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        k = max(1, int(np.ceil((b - a) / _PANEL)))
        edges = list(np.linspace(a, b, k + 1))
        if kink is not None and a == kink:
            w = edges[1] - a
            edges[1:1] = [a + w * _GRADE_RATIO ** i for i in range(_GRADE_LEVELS, 0, -1)]
        if kink is not None and b == kink:
            w = b - edges[-2]
            edges[-1:-1] = [b - w * _GRADE_RATIO ** i for i in range(1, _GRADE_LEVELS + 1)]
        out.extend(zip(edges[:-1], edges[1:]))
    return out


def _gauss_expect(fn, kinks=(), order: int = 24) -> float:
    """Integral of fn(z) against the standard normal density, split at the kinks."""
    nodes, weights = _leggauss(order)
    cuts = [-_ZMAX]
    for k in sorted(kinks):
        if -_ZMAX < k < _ZMAX:
            cuts.append(float(k))
    cuts.append(_ZMAX)
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        for lo, hi in _panels(a, b, None):
            half = 0.5 * (hi - lo)
            z = 0.5 * (hi + lo) + half * nodes
            f = np.asarray(fn(z), dtype=np.float64) * np.exp(-0.5 * z * z)
            total += half * float(np.dot(weights, f))
    return float(total / np.sqrt(2.0 * np.pi))


def _gauss_abs_moment(a: float, b: float, p: float, order: int) -> float:
    """Integral of |a + b*z|^p against the standard normal density."""
    if b == 0.0:
        return abs(a) ** p
    return _gauss_expect(lambda z: _abs_pow(np.abs(a + b * z), p), kinks=(-a / b,), order=order)


def gaussian_wasserstein_pp(
    f: GaussianDist, g: GaussianDist, p: float, quad_order: int = 16
) -> float:
    """W_p^p between two Gaussians: closed form where available, quadrature otherwise."""
    p = _check_p(p)
    dmu = float(f.mu - g.mu)
    dsig = float(f.sigma - g.sigma)
    if dsig == 0.0:
        return abs(dmu) ** p
    if p == 2.0:
        return dmu * dmu + dsig * dsig
    _leggauss(quad_order)  # validate the order eagerly
    return _gauss_abs_moment(dmu, dsig, p, quad_order)


def _one_sample_gaussian(x: np.ndarray, dist: GaussianDist, p: float, order: int) -> float:
    # Integrate sum_i |x_i - mu - sigma*z|^p phi(z) dz between z-cuts Phi^{-1}(i/n).
    n = x.shape[0]
    nodes, weights = _leggauss(order)
    if n > 1:
        interior = kernels.ndtri_vec(np.arange(1, n, dtype=np.float64) / n)
    else:
        interior = np.empty(0)
    cuts = np.concatenate(([-_ZMAX], np.clip(interior, -_ZMAX, _ZMAX), [_ZMAX]))
    total = 0.0
    for i in range(n):
        kink = (x[i] - dist.mu) / dist.sigma
        for lo, hi in _panels(cuts[i], cuts[i + 1], kink):
            half = 0.5 * (hi - lo)
            if half <= 0.0:
                continue
            z = 0.5 * (hi + lo) + half * nodes
            f = _abs_pow(np.abs(x[i] - dist.mu - dist.sigma * z), p) * np.exp(-0.5 * z * z)
            total += half * float(np.dot(weights, f))
    return float(total / np.sqrt(2.0 * np.pi))


def _one_sample_custom(x: np.ndarray, g: QuantileFunction, p: float, order: int) -> float:
    # Literal per-subinterval Gauss-Legendre in t on ((i-1)/n, i/n).
    n = x.shape[0]
    nodes, weights = _leggauss(order)
    offsets = (nodes + 1.0) / 2.0  # in (0,1)
    i = np.arange(n, dtype=np.float64)[:, None]
    t = (i + offsets[None, :]) / n
    gv = np.asarray(g.eval(t.ravel()), dtype=np.float64).reshape(n, order)
    if not np.isfinite(gv).all():
        raise NumericalError("target quantile returned non-finite values on quadrature nodes")
    f = _abs_pow(np.abs(x[:, None] - gv), p)
    return float(np.dot(f, weights).sum() / (2.0 * n))


def wasserstein_pp_one_sample(
    x: SortedSample, g, p: float, quad_order: int = 16
) -> TransportResult:
    """W_p^p between an empirical sample and an analytic quantile function."""
    p = _check_p(p)
    qf = quantile_fn_of(g)
    if qf.kind == "empirical":
        # A step-function target admits the exact answer; quadrature would only lose.
        return wasserstein_pp_two_sample(x, qf.sample, p)
    if qf.kind == "gaussian":
        cost = _one_sample_gaussian(x.values, qf.dist, p, quad_order)
    else:
        cost = _one_sample_custom(x.values, qf, p, quad_order)
    if not np.isfinite(cost):
        raise NumericalError("one-sample transport cost is not finite")
    return TransportResult(
        cost_p=float(cost), p=p, n=x.n, m=0,
        method="quadrature_one_sample", outside_theory=(p == 1.0),
    )


def gaussian_pair_result(
    f: GaussianDist, g: GaussianDist, p: float, quad_order: int = 16
) -> TransportResult:
    """gaussian_wasserstein_pp wrapped with metadata."""
    cost = gaussian_wasserstein_pp(f, g, p, quad_order)
    return TransportResult(
        cost_p=float(cost), p=float(p), n=0, m=0,
        method="closed_form_gaussian", outside_theory=(p == 1.0),
    )
