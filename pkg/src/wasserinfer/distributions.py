"""Empirical and Gaussian one-dimensional distributions behind a common quantile interface.

The empirical quantile is the left-continuous generalized inverse
inf{x : F_n(x) >= t}, i.e. the order statistic of rank ceil(t*n).  At grid
points t = j/n the value is exactly the j-th order statistic; a few-ulp snap
absorbs the floating-point noise of t*n so grid evaluations never land on the
wrong step.
"""

from __future__ import annotations

import csv
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from . import _special, kernels
from .errors import DomainError, EmptySample, MissingColumn, NonFiniteValue, ParseError

ArrayLike = Union[float, np.ndarray]


# ---------------------------------------------------------------------------
# samples


@dataclass(frozen=True)
class SortedSample:
    """An ascending, finite real sample; the carrier of every empirical distribution."""

    values: np.ndarray

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def __post_init__(self):
        v = self.values
        if v.ndim != 1 or v.shape[0] == 0:
            raise EmptySample("a sample needs at least one observation")
        if not np.isfinite(v).all():
            raise NonFiniteValue("sample contains NaN or infinite entries")
        if np.any(np.diff(v) < 0):
            raise DomainError("SortedSample values must be non-decreasing")


def sorted_sample_from(raw) -> SortedSample:
    """Sort a raw collection of reals into a SortedSample (ties preserved)."""
    arr = np.asarray(raw, dtype=np.float64)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    if arr.size == 0:
        raise EmptySample("cannot build a sample from zero observations")
    if not np.isfinite(arr).all():
        raise NonFiniteValue("sample contains NaN or infinite entries")
    out = np.sort(arr)
    out.setflags(write=False)
    return SortedSample(out)


def _quantile_ranks(t: np.ndarray, n: int) -> np.ndarray:
    """1-based ranks ceil(t*n), snapping away <=4-ulp overshoot above integers."""
    kf = t * n
    fl = np.floor(kf)
    frac = kf - fl
    snap = frac <= 4.0 * np.finfo(np.float64).eps * np.maximum(kf, 1.0)
    ranks = np.where(snap, fl, fl + 1.0)
    return np.clip(ranks, 1, n).astype(np.int64)


def empirical_quantile(s: SortedSample, t: float) -> float:
    """Left-continuous empirical quantile at t in (0, 1]."""
    if not (0.0 < t <= 1.0):
        raise DomainError(f"quantile level must lie in (0, 1], got {t}")
    rank = _quantile_ranks(np.asarray([t], dtype=np.float64), s.n)[0]
    return float(s.values[rank - 1])


# ---------------------------------------------------------------------------
# the Gaussian family and its special functions


def normal_cdf(x: float) -> float:
    """Standard normal CDF (absolute error well under 1e-12)."""
    if not math.isfinite(x):
        raise DomainError(f"normal_cdf needs a finite argument, got {x}")
    return _special.ndtr(x)


def normal_quantile(t: float) -> float:
    """Inverse standard normal CDF on (0, 1); absolute error below 1e-9."""
    if not (0.0 < t < 1.0):
        raise DomainError(f"quantile level must lie in (0, 1), got {t}")
    return _special.ndtri(t)


@dataclass(frozen=True)
class GaussianDist:
    """Normal distribution with location mu and scale sigma > 0."""

    mu: float
    sigma: float

    def __post_init__(self):
        if not (self.sigma > 0.0) or not math.isfinite(self.sigma) or not math.isfinite(self.mu):
            raise DomainError(f"need finite mu and sigma > 0, got mu={self.mu}, sigma={self.sigma}")

    def quantile(self, t: ArrayLike) -> ArrayLike:
        if np.isscalar(t):
            return self.mu + self.sigma * normal_quantile(float(t))
        return self.mu + self.sigma * kernels.ndtri_vec(np.asarray(t, dtype=np.float64))

    def cdf(self, x: ArrayLike) -> ArrayLike:
        if np.isscalar(x):
            return _special.ndtr((float(x) - self.mu) / self.sigma)
        z = (np.asarray(x, dtype=np.float64) - self.mu) / self.sigma
        return kernels.ndtr_vec(z)

    def pdf(self, x: ArrayLike) -> ArrayLike:
        z = (np.asarray(x, dtype=np.float64) - self.mu) / self.sigma
        return np.exp(-0.5 * z * z) / (self.sigma * math.sqrt(2.0 * math.pi))


# ---------------------------------------------------------------------------
# quantile functions


class QuantileFunction(ABC):
    """Evaluable non-decreasing map (0,1) -> R."""

    kind: str

    @abstractmethod
    def eval(self, t: ArrayLike) -> ArrayLike:
        """Quantile at level(s) t; accepts scalars or arrays."""


class EmpiricalQuantile(QuantileFunction):
    kind = "empirical"

    def __init__(self, sample: SortedSample):
        self.sample = sample

    def eval(self, t: ArrayLike) -> ArrayLike:
        arr = np.asarray(t, dtype=np.float64)
        ranks = _quantile_ranks(np.atleast_1d(arr), self.sample.n)
        out = self.sample.values[ranks - 1]
        return float(out[0]) if arr.ndim == 0 else out


class GaussianQuantile(QuantileFunction):
    kind = "gaussian"

    def __init__(self, dist: GaussianDist):
        self.dist = dist

    def eval(self, t: ArrayLike) -> ArrayLike:
        return self.dist.quantile(t)


class CustomQuantile(QuantileFunction):
    """Wrap any non-decreasing callable; it should broadcast over arrays."""

    kind = "custom"

    def __init__(self, fn: Callable[[ArrayLike], ArrayLike]):
        self.fn = fn

    def eval(self, t: ArrayLike) -> ArrayLike:
        arr = np.asarray(t, dtype=np.float64)
        out = np.asarray(self.fn(arr), dtype=np.float64)
        if out.shape != arr.shape:
            out = np.broadcast_to(out, arr.shape).copy()
        return float(out) if arr.ndim == 0 else out


def quantile_fn_of(obj) -> QuantileFunction:
    """Coerce a SortedSample / GaussianDist / callable into a QuantileFunction."""
    if isinstance(obj, QuantileFunction):
        return obj
    if isinstance(obj, SortedSample):
        return EmpiricalQuantile(obj)
    if isinstance(obj, GaussianDist):
        return GaussianQuantile(obj)
    if callable(obj):
        return CustomQuantile(obj)
    raise TypeError(f"cannot interpret {type(obj).__name__} as a quantile function")


# ---------------------------------------------------------------------------
# file input


_MISSING = {"", "?", "na", "nan"}


def load_sample(path: str, column: str | None = None) -> SortedSample:
    """Read a sample from disk.

    Plain text: one real per line (blank lines skipped).  With ``column``, the
    file is parsed as a headered CSV and the named numeric column is read;
    missing-value cells are rejected, not dropped, because a sample has no row
    semantics to fall back on.
    """
    if column is None:
        values = []
        with open(path, "r", encoding="utf-8-sig") as fh:
            for lineno, line in enumerate(fh, start=1):
                text = line.strip()
                if not text:
                    continue
                try:
                    values.append(float(text))
                except ValueError:
                    raise ParseError(f"{path}:{lineno}: not a number: {text!r}") from None
        return sorted_sample_from(values)

    with open(path, "r", encoding="utf-8-sig", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or column not in reader.fieldnames:
            raise MissingColumn(f"{path}: no column named {column!r}")
        values = []
        for lineno, row in enumerate(reader, start=2):
            cell = (row[column] or "").strip()
            if cell.lower() in _MISSING:
                raise ParseError(f"{path}:{lineno}: missing value in column {column!r}")
            try:
                values.append(float(cell))
            except ValueError:
                raise ParseError(f"{path}:{lineno}: not a number: {cell!r}") from None
    return sorted_sample_from(values)
