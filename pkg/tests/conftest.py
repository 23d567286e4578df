import numpy as np
import pytest

from wasserinfer import LabeledDataset


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)


def make_biased_dataset(seed: int = 5, n: int = 400, shift: float = 0.8) -> LabeledDataset:
    """Synthetic two-group dataset whose S=1 group gets systematically higher scores."""
    gen = np.random.default_rng(seed)
    group = np.repeat([0, 1], n // 2).astype(np.int8)
    x1 = gen.normal(shift * (group == 1) - 0.3, 1.0)
    x2 = gen.normal(0.0, 1.0, n)
    z = 0.6 + 1.4 * x1 + 0.5 * x2
    y = (gen.random(n) < 1.0 / (1.0 + np.exp(-z))).astype(np.int8)
    return LabeledDataset(
        features=np.column_stack([x1, x2]),
        label=y,
        protected=group,
        feature_names=("x1", "x2"),
    )
