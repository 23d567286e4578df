"""Fairness auditing of a binary classifier's score distributions.

A logit model scores every row; the score samples of the two protected groups
are compared through the similarity machinery, the classical disparate-impact
and balanced-error-rate criteria, and a geometric repair that interpolates
each group's quantile function toward their shared barycenter.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.special import expit

from .distributions import EmpiricalQuantile, SortedSample, normal_quantile
from .errors import (
    DomainError,
    EmptyGroup,
    MissingColumn,
    NotConvergedWarning,
    ParseError,
    SampleTooSmall,
    SingularMatrix,
)
from .inference import estimate_variance
from .transport import wasserstein_pp_two_sample

_MISSING = {"", "?", "na", "nan"}


# ---------------------------------------------------------------------------
# data


@dataclass(frozen=True)
class LabeledDataset:
    """Numeric features with a binary outcome and a binary protected attribute."""

    features: np.ndarray
    label: np.ndarray
    protected: np.ndarray
    feature_names: tuple[str, ...]
    dropped_count: int = 0

    def __post_init__(self):
        rows = self.features.shape[0]
        if self.label.shape[0] != rows or self.protected.shape[0] != rows:
            raise DomainError("features, label and protected must share the row count")
        for name, arr in (("label", self.label), ("protected", self.protected)):
            if not np.isin(arr, (0, 1)).all():
                raise DomainError(f"{name} must be binary 0/1")
        if not (self.protected == 0).any() or not (self.protected == 1).any():
            raise EmptyGroup("both protected groups must be non-empty")


def load_csv_dataset(
    path: str,
    feature_columns: Sequence[str],
    label_column: str,
    positive_label: str,
    protected_column: str,
    protected_value: str,
    negative_label: str | None = None,
) -> LabeledDataset:
    """Read a headered CSV into a LabeledDataset.

    Rows with missing values in any selected column are dropped and counted.
    The label must be binary: with ``negative_label`` given, any third value is
    a ParseError; otherwise the first non-positive value seen is adopted as the
    negative label and any later distinct value errors.
    """
    feature_columns = list(feature_columns)
    with open(path, "r", encoding="utf-8-sig", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        wanted = feature_columns + [label_column, protected_column]
        missing_cols = [c for c in wanted if c not in header]
        if missing_cols:
            raise MissingColumn(f"{path}: missing column(s) {missing_cols}")

        feats, labels, prot = [], [], []
        dropped = 0
        seen_negative = negative_label
        for row in reader:
            line = reader.line_num
            cells = [(row[c] or "").strip() for c in wanted]
            if any(c.lower() in _MISSING for c in cells):
                dropped += 1
                continue
            try:
                feats.append([float(v) for v in cells[: len(feature_columns)]])
            except ValueError as exc:
                raise ParseError(f"{path}:{line}: {exc}") from None
            lab = cells[len(feature_columns)]
            if lab == positive_label:
                labels.append(1)
            elif seen_negative is None:
                seen_negative = lab
                labels.append(0)
            elif lab == seen_negative:
                labels.append(0)
            else:
                raise ParseError(
                    f"{path}:{line}: unknown label value {lab!r} "
                    f"(expected {positive_label!r} or {seen_negative!r})"
                )
            prot.append(1 if cells[-1] == protected_value else 0)

    if not feats:
        raise EmptyGroup(f"{path}: no usable rows after dropping {dropped} incomplete ones")
    return LabeledDataset(
        features=np.asarray(feats, dtype=np.float64),
        label=np.asarray(labels, dtype=np.int8),
        protected=np.asarray(prot, dtype=np.int8),
        feature_names=tuple(feature_columns),
        dropped_count=dropped,
    )


# ---------------------------------------------------------------------------
# logit scores


@dataclass(frozen=True)
class LogitModel:
    """Logistic regression on standardized features; beta[0] is the intercept."""

    beta: np.ndarray
    means: np.ndarray
    scales: np.ndarray
    converged: bool
    n_iter: int

    def score(self, features: np.ndarray) -> np.ndarray:
        x = (np.asarray(features, dtype=np.float64) - self.means) / self.scales
        return expit(self.beta[0] + x @ self.beta[1:])


def _loglik(z: np.ndarray, y: np.ndarray) -> float:
    # sum of y*z - log(1 + e^z), computed stably
    return float(np.sum(y * z - np.logaddexp(0.0, z)))


def fit_logit(
    data: LabeledDataset, max_iter: int = 100, tol: float = 1e-8, ridge: float = 0.0
) -> LogitModel:
    """Maximum-likelihood logit via damped Newton steps on standardized features."""
    y = data.label.astype(np.float64)
    if (y == 1).sum() < 2 or (y == 0).sum() < 2:
        raise SampleTooSmall("need at least 2 rows per label class")
    means = data.features.mean(axis=0)
    scales = data.features.std(axis=0)
    scales = np.where(scales > 0.0, scales, 1.0)
    x = (data.features - means) / scales
    design = np.column_stack([np.ones(x.shape[0]), x])
    k = design.shape[1]

    beta = np.zeros(k)
    z = design @ beta
    ll = _loglik(z, y)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        mu = expit(z)
        grad = design.T @ (y - mu)
        if np.max(np.abs(grad)) < tol:
            converged = True
            break
        w = mu * (1.0 - mu)
        hess = design.T @ (design * w[:, None])
        step = None
        for lam in (ridge, 1e-8, 1e-6, 1e-4):
            try:
                cand = np.linalg.solve(hess + lam * np.eye(k), grad)
            except np.linalg.LinAlgError:
                continue
            if np.isfinite(cand).all():
                step = cand
                break
        if step is None:
            raise SingularMatrix("Hessian is singular even after the ridge fallback")
        # backtrack until the log-likelihood does not decrease
        scale = 1.0
        for _ in range(30):
            trial = beta + scale * step
            z_trial = design @ trial
            ll_trial = _loglik(z_trial, y)
            if ll_trial >= ll:
                beta, z, ll = trial, z_trial, ll_trial
                break
            scale *= 0.5
        else:
            converged = True  # no ascent direction left: numerically at the optimum
            break
    if not converged:
        warnings.warn(
            f"logit fit stopped after {max_iter} iterations without meeting tol={tol}",
            NotConvergedWarning,
        )
    return LogitModel(beta=beta, means=means, scales=scales, converged=converged, n_iter=it)


def group_scores(model: LogitModel, data: LabeledDataset) -> tuple[SortedSample, SortedSample]:
    """Sorted score samples for protected == 0 and protected == 1."""
    scores = model.score(data.features)
    s0 = np.sort(scores[data.protected == 0])
    s1 = np.sort(scores[data.protected == 1])
    for arr in (s0, s1):
        arr.setflags(write=False)
    return SortedSample(s0), SortedSample(s1)


# ---------------------------------------------------------------------------
# fairness criteria


def _check_cutoff(cutoff: float) -> float:
    cutoff = float(cutoff)
    if not (0.0 < cutoff < 1.0):
        raise DomainError(f"cutoff must lie in (0, 1), got {cutoff}")
    return cutoff


def _positive_rate(s: SortedSample, cutoff: float) -> float:
    return float(np.mean(s.values > cutoff))


def disparate_impact(
    s0: SortedSample, s1: SortedSample, cutoff: float, flip: bool = False
) -> float:
    """Ratio of positive-classification rates, P(>cutoff | S=0) / P(>cutoff | S=1).

    ``flip`` swaps the orientation.  Returns +inf when only the denominator
    group never clears the cutoff, and 1.0 when neither group does.
    """
    cutoff = _check_cutoff(cutoff)
    num = _positive_rate(s0, cutoff)
    den = _positive_rate(s1, cutoff)
    if flip:
        num, den = den, num
    if den == 0.0:
        return math.inf if num > 0.0 else 1.0
    return num / den


def balanced_error_rate(s0: SortedSample, s1: SortedSample, cutoff: float) -> float:
    """Balanced misclassification probability of predicting S=1 from {score > cutoff}.

    0.5 means the protected attribute cannot be recovered from the scores.
    """
    cutoff = _check_cutoff(cutoff)
    return 0.5 * (_positive_rate(s0, cutoff) + 1.0 - _positive_rate(s1, cutoff))


# ---------------------------------------------------------------------------
# geometric repair


def geometric_repair(
    s0: SortedSample, s1: SortedSample, theta: float
) -> tuple[SortedSample, SortedSample]:
    """Move both group distributions a fraction theta toward their barycenter.

    The barycenter quantile is the count-weighted average of the group
    quantiles; each repaired group is re-sampled at its own plotting positions
    (i - 1/2)/n_s, which keeps group sizes unchanged and never evaluates a
    quantile at t = 0 or 1.
    """
    theta = float(theta)
    if not (0.0 <= theta <= 1.0):
        raise DomainError(f"repair amount theta must lie in [0, 1], got {theta}")
    n0, n1 = s0.n, s1.n
    w0 = n0 / (n0 + n1)
    w1 = n1 / (n0 + n1)
    q0 = EmpiricalQuantile(s0)
    q1 = EmpiricalQuantile(s1)

    def repaired(own: SortedSample, other: EmpiricalQuantile, w_own, w_other):
        t = (np.arange(1, own.n + 1, dtype=np.float64) - 0.5) / own.n
        own_vals = own.values  # own quantile at own plotting positions
        bary = w_own * own_vals + w_other * np.asarray(other.eval(t), dtype=np.float64)
        out = (1.0 - theta) * own_vals + theta * bary
        out.setflags(write=False)
        return SortedSample(out)

    return repaired(s0, q1, w0, w1), repaired(s1, q0, w1, w0)


@dataclass(frozen=True)
class RepairSweepRow:
    theta: float
    w2_squared: float
    ci_low: float
    ci_high: float
    di: float
    ber: float

    def to_record(self) -> dict:
        return {
            "theta": self.theta,
            "w2_squared": self.w2_squared,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "di": self.di,
            "ber": self.ber,
        }


SWEEP_COLUMNS = ("theta", "w2_squared", "ci_low", "ci_high", "di", "ber")


def repair_sweep(
    s0: SortedSample,
    s1: SortedSample,
    theta_grid: Sequence[float],
    p: float = 2.0,
    alpha: float = 0.05,
    cutoff: float = 0.5,
    flip_di: bool = False,
) -> list[RepairSweepRow]:
    """Repair both groups along theta and track distance, interval, DI and BER.

    The repaired quantile gap is (1-theta)(Q0-Q1) pointwise (the barycenter
    term cancels), so the transport cost column is the exactly scaled base
    cost; it hits 0 at theta=1 for any group sizes.  DI, BER and the interval
    width come from the re-sampled repaired groups.
    """
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    thetas = sorted(float(t) for t in theta_grid)
    if thetas and not (0.0 <= thetas[0] and thetas[-1] <= 1.0):
        raise DomainError("theta grid must lie within [0, 1]")
    base = wasserstein_pp_two_sample(s0, s1, p).cost_p
    zq = normal_quantile(1.0 - alpha / 2.0)
    n, m = s0.n, s1.n
    rows = []
    for theta in thetas:
        r0, r1 = geometric_repair(s0, s1, theta)
        w = (1.0 - theta) ** p * base
        sigma = math.sqrt(estimate_variance(r0, r1, p).sigma2_combined)
        hw = math.sqrt((n + m) / (n * m)) * sigma * zq
        rows.append(
            RepairSweepRow(
                theta=theta,
                w2_squared=w,
                ci_low=w - hw,
                ci_high=w + hw,
                di=disparate_impact(r0, r1, cutoff, flip=flip_di),
                ber=balanced_error_rate(r0, r1, cutoff),
            )
        )
    return rows


def sweep_to_csv(rows: Iterable[RepairSweepRow], fh, comments: Sequence[str] = ()) -> None:
    for line in comments:
        fh.write(f"# {line}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        rec = row.to_record()
        writer.writerow([repr(float(rec[c])) if isinstance(rec[c], float) else str(rec[c])
                         for c in SWEEP_COLUMNS])
