import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wasserinfer import (
    CpClosedForm,
    DomainError,
    GaussianDist,
    SampleTooSmall,
    confidence_interval,
    cp_empirical,
    estimate_variance,
    estimate_variance_one_sample,
    normal_quantile,
    similarity_test,
    sorted_sample_from,
    variance_oracle_integral,
)
from wasserinfer.distributions import GaussianQuantile
from wasserinfer.montecarlo import UniformStream, draw_sample

X12 = sorted_sample_from([1.0, 2.0])
Y00 = sorted_sample_from([0.0, 0.0])


# ---------------------------------------------------------------------------
# c_p


def test_cp_location_values():
    f, g = GaussianDist(0, 1), GaussianDist(1, 1)
    assert cp_empirical(0.5, f, g, 2.0) == 0.0
    got = cp_empirical(0.975, f, g, 2.0)
    assert abs(got - (-2.0 * normal_quantile(0.975))) < 1e-9
    assert abs(got - (-3.919927969080108)) < 1e-6


def test_cp_identical_continuous_marginals():
    # the transport map is the identity, so the integrand h_p'(0) vanishes
    g = GaussianDist(0.3, 1.4)
    for t in (0.1, 0.5, 0.9):
        assert abs(cp_empirical(t, g, g, 2.0)) < 1e-12


@pytest.mark.parametrize("p", [2.0, 3.0])
def test_cp_closed_form_location(p):
    cf = CpClosedForm.location(1.0, p)
    f, g = GaussianDist(0, 1), GaussianDist(1, 1)
    for t in np.linspace(0.05, 0.95, 19):
        assert abs(cp_empirical(t, f, g, p) - cf.cp_fg(t)) < 1e-8
        assert abs(cp_empirical(t, g, f, p) - cf.cp_gf(t)) < 1e-8


@pytest.mark.parametrize("p", [2.0, 3.0])
def test_cp_closed_form_scale_location(p):
    cf = CpClosedForm.scale_location(1.0, 2.0, p)
    f, g = GaussianDist(0, 1), GaussianDist(1, 2)
    for t in (0.1, 0.3, 0.5, 0.7, 0.9):
        assert abs(cp_empirical(t, f, g, p) - cf.cp_fg(t)) < 1e-7
        assert abs(cp_empirical(t, g, f, p) - cf.cp_gf(t)) < 1e-7


def test_cp_empirical_against_analytic_target():
    # empirical first marginal with an analytic second: still an exact sum
    x = draw_sample(GaussianDist(0, 1), 40000, UniformStream(3))
    gq = GaussianQuantile(GaussianDist(1, 1))
    cf = CpClosedForm.location(1.0, 2.0)
    for t in (0.2, 0.5, 0.8):
        assert abs(cp_empirical(t, x, gq, 2.0) - cf.cp_fg(t)) < 0.05


def test_cp_mixed_analytic_f_empirical_g():
    y = draw_sample(GaussianDist(1, 1), 40000, UniformStream(4))
    f = GaussianDist(0, 1)
    cf = CpClosedForm.location(1.0, 2.0)
    for t in (0.2, 0.5, 0.8):
        assert abs(cp_empirical(t, f, y, 2.0) - cf.cp_fg(t)) < 0.05


def test_cp_domain_errors():
    f = GaussianDist(0, 1)
    with pytest.raises(DomainError):
        cp_empirical(0.0, f, f, 2.0)
    with pytest.raises(DomainError):
        cp_empirical(1.0, f, f, 2.0)
    with pytest.raises(DomainError):
        cp_empirical(0.5, f, f, 1.0)


def test_closed_form_variances():
    for p in (1.0, 2.0, 3.0):
        cf = CpClosedForm.location(1.0, p)
        assert abs(cf.sigma2_fg() - p * p) < 1e-12
        assert abs(cf.combined_variance(100, 100) - p * p) < 1e-12
    sl = CpClosedForm.scale_location(1.0, 2.0, 2.0)
    assert sl.sigma2_fg() > 0.0 and sl.sigma2_gf() > 0.0


# ---------------------------------------------------------------------------
# variance estimator


def test_estimate_variance_hand_example():
    ve = estimate_variance(X12, Y00, 2.0)
    assert ve.d1.tolist() == [0.0, 3.0]
    assert ve.sigma2_1 == 2.25
    assert ve.d2.tolist() == [0.0, 0.0]
    assert ve.sigma2_2 == 0.0
    assert ve.sigma2_combined == 1.125


def test_identical_samples_symmetric_sigmas(rng):
    s = sorted_sample_from(rng.normal(size=37))
    ve = estimate_variance(s, s, 2.0)
    assert ve.sigma2_1 == ve.sigma2_2


def test_exchange_symmetry_exact(rng):
    x = sorted_sample_from(rng.normal(size=23))
    y = sorted_sample_from(rng.normal(0.5, 1.3, size=41))
    a = estimate_variance(x, y, 2.5)
    b = estimate_variance(y, x, 2.5)
    assert a.sigma2_1 == b.sigma2_2 and a.sigma2_2 == b.sigma2_1


def test_translation_invariance(rng):
    x = rng.normal(size=30)
    y = rng.normal(size=30)
    for p in (1.5, 2.0, 3.0):
        a = estimate_variance(sorted_sample_from(x), sorted_sample_from(y), p)
        b = estimate_variance(sorted_sample_from(x + 7.5), sorted_sample_from(y + 7.5), p)
        assert abs(a.sigma2_1 - b.sigma2_1) < 1e-10 * max(1.0, a.sigma2_1)
        assert abs(a.sigma2_2 - b.sigma2_2) < 1e-10 * max(1.0, a.sigma2_2)


def test_scaling_homogeneity(rng):
    x = rng.normal(size=45)
    y = rng.normal(size=28)
    c = 2.6
    for p in (1.0, 2.0, 3.0):
        a = estimate_variance(sorted_sample_from(x), sorted_sample_from(y), p)
        b = estimate_variance(sorted_sample_from(c * x), sorted_sample_from(c * y), p)
        assert abs(b.sigma2_combined - c ** (2 * p) * a.sigma2_combined) \
            <= 1e-8 * max(1.0, b.sigma2_combined)


def test_size_and_p_validation():
    with pytest.raises(SampleTooSmall):
        estimate_variance(sorted_sample_from([1.0]), Y00, 2.0)
    with pytest.raises(SampleTooSmall):
        estimate_variance(X12, sorted_sample_from([0.0]), 2.0)
    with pytest.raises(DomainError):
        estimate_variance(X12, Y00, 0.9)


def test_consistency_toward_closed_form():
    # location model, mu=1: combined variance tends to p^2
    errs = {p: [] for p in (1.0, 2.0, 3.0)}
    for n in (1000, 10000, 100000):
        root = UniformStream(31)
        x = draw_sample(GaussianDist(0, 1), n, root.substream(0))
        y = draw_sample(GaussianDist(1, 1), n, root.substream(1))
        for p in errs:
            ve = estimate_variance(x, y, p)
            errs[p].append(abs(ve.sigma2_combined - p * p))
    for p, seq in errs.items():
        assert seq[2] < seq[0], f"p={p}: no shrinkage: {seq}"
        assert seq[2] < 0.05 * p * p


def test_one_sample_variance_against_location_closed_form():
    x = draw_sample(GaussianDist(0, 1), 100000, UniformStream(9))
    for p in (1.0, 2.0, 3.0):
        got = estimate_variance_one_sample(x, GaussianDist(1, 1), p).sigma2
        assert abs(got - p * p) < 0.15 * p * p


# ---------------------------------------------------------------------------
# the oracle identity


def test_oracle_hand_example():
    assert abs(variance_oracle_integral(X12, Y00, 2.0) - 2.25) < 1e-15


def test_oracle_dirac_first_marginal():
    dirac = sorted_sample_from([4.0, 4.0, 4.0])
    assert variance_oracle_integral(dirac, Y00, 2.0) == 0.0


@settings(deadline=None, max_examples=60)
@given(
    n=st.integers(2, 200),
    m=st.integers(2, 200),
    p=st.sampled_from([1.5, 2.0, 3.0]),
    seed=st.integers(0, 2**32 - 1),
)
def test_oracle_identity_property(n, m, p, seed):
    gen = np.random.default_rng(seed)
    x = sorted_sample_from(gen.normal(size=n))
    y = sorted_sample_from(gen.normal(0.8, 1.1, size=m))
    assert abs(estimate_variance(x, y, p).sigma2_1 - variance_oracle_integral(x, y, p)) < 1e-10


# ---------------------------------------------------------------------------
# confidence interval


def test_ci_dirac_degenerate():
    d = sorted_sample_from([2.0, 2.0])
    e = sorted_sample_from([5.0, 5.0])
    v = confidence_interval(d, e, 2.0, 0.05)
    assert v.ci_low == v.ci_high == v.statistic == 9.0


def test_ci_hand_example():
    v = confidence_interval(X12, Y00, 2.0, 0.05)
    assert v.statistic == 2.5
    expected_hw = math.sqrt(4 / 4) * math.sqrt(1.125) * normal_quantile(0.975)
    assert abs((v.ci_high - v.ci_low) / 2 - expected_hw) < 1e-12
    assert abs(expected_hw - 2.0788) < 5e-4
    assert v.ci_low_clipped == v.ci_low > 0
    assert v.reject_null is None and v.threshold is None


def test_ci_negative_lower_bound_reported_and_clipped():
    x = sorted_sample_from([0.0, 1.0])
    y = sorted_sample_from([0.05, 1.05])
    v = confidence_interval(x, y, 2.0, 0.05)
    assert v.ci_low < 0.0
    assert v.ci_low_clipped == 0.0
    assert v.ci_high > v.statistic > 0.0


def test_ci_covers_statistic(rng):
    x = sorted_sample_from(rng.normal(size=60))
    y = sorted_sample_from(rng.normal(1, 1, size=45))
    v = confidence_interval(x, y, 2.0, 0.1)
    assert v.ci_low <= v.statistic <= v.ci_high


def test_ci_coverage_small_monte_carlo():
    root = UniformStream(77)
    cover = 0
    reps = 300
    for r in range(reps):
        x = draw_sample(GaussianDist(0, 1), 1000, root.substream(2 * r))
        y = draw_sample(GaussianDist(1, 1), 1000, root.substream(2 * r + 1))
        v = confidence_interval(x, y, 2.0, 0.05)
        cover += v.ci_low <= 1.0 <= v.ci_high
    assert 0.91 <= cover / reps <= 0.99


# ---------------------------------------------------------------------------
# similarity test


def test_similarity_trivial_rejection():
    s = sorted_sample_from([0.0, 0.5, 1.0])
    v = similarity_test(s, s, 2.0, delta0=0.6, alpha=0.05)
    margin = v.delta0 ** 2 - v.threshold
    # zero statistic rejects whenever delta0^p clears the margin
    assert v.statistic == 0.0
    assert v.delta0 ** 2 > margin
    assert v.reject_null is True


def test_similarity_hand_example_no_rejection():
    v = similarity_test(X12, Y00, 2.0, delta0=1.0, alpha=0.05)
    assert v.statistic == 2.5 and v.reject_null is False
    assert v.delta0 == 1.0


def test_similarity_validation():
    with pytest.raises(DomainError):
        similarity_test(X12, Y00, 2.0, delta0=0.0, alpha=0.05)
    with pytest.raises(DomainError):
        similarity_test(X12, Y00, 2.0, delta0=1.0, alpha=1.5)
    with pytest.raises(DomainError):
        confidence_interval(X12, Y00, 2.0, alpha=0.0)


def test_p1_outside_theory_flag():
    v = similarity_test(X12, Y00, 1.0, delta0=1.0, alpha=0.05)
    assert v.outside_theory
    assert not similarity_test(X12, Y00, 2.0, delta0=1.0, alpha=0.05).outside_theory


def test_test_ci_coherence(rng):
    # rejection at level alpha implies delta0^p clears the lower bound of the
    # 1-2alpha interval (one-sided consistency)
    hits = 0
    for k in range(30):
        gen = np.random.default_rng(k)
        x = sorted_sample_from(gen.normal(size=150))
        y = sorted_sample_from(gen.normal(0.3, 1, size=150))
        v = similarity_test(x, y, 2.0, delta0=1.0, alpha=0.05)
        if v.reject_null:
            hits += 1
            ci = confidence_interval(x, y, 2.0, alpha=0.10)
            assert v.delta0 ** v.p > ci.ci_low
    assert hits > 0
