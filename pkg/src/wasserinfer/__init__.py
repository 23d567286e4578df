"""Statistical inference on the one-dimensional p-Wasserstein transport cost.

Exact empirical transport costs, a plug-in estimator of the asymptotic
variance, CLT-based confidence intervals, a one-sided similarity test, a
seeded Monte Carlo harness for calibration tables, and a fairness audit with
geometric repair toward the Wasserstein barycenter.
"""

from .backends import ACTIVE_BACKEND
from .distributions import (
    CustomQuantile,
    EmpiricalQuantile,
    GaussianDist,
    GaussianQuantile,
    QuantileFunction,
    SortedSample,
    empirical_quantile,
    load_sample,
    normal_cdf,
    normal_quantile,
    sorted_sample_from,
)
from .errors import (
    DomainError,
    EmptyGroup,
    EmptySample,
    MissingColumn,
    NonFiniteValue,
    NotConvergedWarning,
    NumericalError,
    ParseError,
    SampleTooSmall,
    SingularMatrix,
    WasserInferError,
)
from .fairness import (
    LabeledDataset,
    LogitModel,
    RepairSweepRow,
    balanced_error_rate,
    disparate_impact,
    fit_logit,
    geometric_repair,
    group_scores,
    load_csv_dataset,
    repair_sweep,
)
from .inference import (
    CpClosedForm,
    OneSampleVariance,
    SimilarityVerdict,
    VarianceEstimate,
    confidence_interval,
    cp_empirical,
    estimate_variance,
    estimate_variance_one_sample,
    similarity_test,
    variance_oracle_integral,
)
from .montecarlo import (
    ExperimentConfig,
    ExperimentRow,
    LocationModel,
    ScaleLocationModel,
    UniformStream,
    draw_sample,
    run_table1,
    run_table2,
    run_table3,
    table3_delta0,
)
from .transport import (
    TransportResult,
    gaussian_wasserstein_pp,
    wasserstein_pp_one_sample,
    wasserstein_pp_two_sample,
)

__version__ = "0.1.0"

__all__ = [
    "ACTIVE_BACKEND",
    "CpClosedForm",
    "CustomQuantile",
    "DomainError",
    "EmpiricalQuantile",
    "EmptyGroup",
    "EmptySample",
    "ExperimentConfig",
    "ExperimentRow",
    "GaussianDist",
    "GaussianQuantile",
    "LabeledDataset",
    "LocationModel",
    "LogitModel",
    "MissingColumn",
    "NonFiniteValue",
    "NotConvergedWarning",
    "NumericalError",
    "OneSampleVariance",
    "ParseError",
    "QuantileFunction",
    "RepairSweepRow",
    "SampleTooSmall",
    "ScaleLocationModel",
    "SimilarityVerdict",
    "SingularMatrix",
    "SortedSample",
    "TransportResult",
    "UniformStream",
    "VarianceEstimate",
    "WasserInferError",
    "balanced_error_rate",
    "confidence_interval",
    "cp_empirical",
    "disparate_impact",
    "draw_sample",
    "empirical_quantile",
    "estimate_variance",
    "estimate_variance_one_sample",
    "fit_logit",
    "gaussian_wasserstein_pp",
    "geometric_repair",
    "group_scores",
    "load_csv_dataset",
    "load_sample",
    "normal_cdf",
    "normal_quantile",
    "repair_sweep",
    "run_table1",
    "run_table2",
    "run_table3",
    "similarity_test",
    "sorted_sample_from",
    "table3_delta0",
    "variance_oracle_integral",
    "wasserstein_pp_one_sample",
    "wasserstein_pp_two_sample",
]
