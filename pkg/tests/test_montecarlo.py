import math

import numpy as np
import pytest

from wasserinfer import (
    DomainError,
    GaussianDist,
    UniformStream,
    draw_sample,
    run_table1,
    run_table2,
    run_table3,
    table3_delta0,
)
from wasserinfer.montecarlo import (
    ExperimentConfig,
    LocationModel,
    rows_to_csv,
)


class StubStream:
    def __init__(self, us):
        self.us = np.asarray(us, dtype=np.float64)

    def uniforms(self, count, start=0):
        return self.us[start:start + count]


# ---------------------------------------------------------------------------
# streams and sampling


def test_stream_uniforms_open_interval():
    u = UniformStream(99).uniforms(100000)
    assert u.min() > 0.0 and u.max() < 1.0
    assert abs(u.mean() - 0.5) < 0.01


def test_stream_counter_offset_consistency():
    st = UniformStream(5)
    full = st.uniforms(64)
    assert np.array_equal(full[10:30], st.uniforms(20, start=10))


def test_substreams_differ():
    st = UniformStream(5)
    a = st.substream(0).uniforms(8)
    b = st.substream(1).uniforms(8)
    assert not np.array_equal(a, b)


def test_draw_sample_stub_median():
    s = draw_sample(GaussianDist(3.0, 2.0), 1, StubStream([0.5]))
    assert s.values.tolist() == [3.0]


def test_draw_sample_deterministic_bitwise():
    a = draw_sample(GaussianDist(0, 1), 500, UniformStream(123))
    b = draw_sample(GaussianDist(0, 1), 500, UniformStream(123))
    assert np.array_equal(a.values, b.values)


def test_draw_sample_mean_clt_bound():
    s = draw_sample(GaussianDist(0, 1), 100000, UniformStream(2024))
    assert abs(float(s.values.mean())) < 0.02


def test_draw_sample_validation():
    with pytest.raises(DomainError):
        draw_sample(GaussianDist(0, 1), 0, UniformStream(1))


# ---------------------------------------------------------------------------
# table runners


def test_table1_smoke_and_order():
    rows = run_table1(p_list=(2.0,), n_list=(50, 100), mu=1.0, replications=2, seed=3)
    assert [(r.config.p, r.config.n) for r in rows] == [(2.0, 50), (2.0, 100)]
    for r in rows:
        assert r.rejection_rate is None
        assert r.mean_sigma2 > 0.0


def test_table2_rejection_rate_is_frequency():
    rows = run_table2(p_list=(2.0,), n_list=(50,), mu_list=(0.5,), replications=40, seed=3)
    rate = rows[0].rejection_rate
    assert 0.0 <= rate <= 1.0
    assert abs(rate * 40 - round(rate * 40)) < 1e-12


def test_run_determinism_and_thread_independence(monkeypatch):
    kwargs = dict(p_list=(2.0,), n_list=(100,), mu_list=(0.9, 0.7), replications=30, seed=11)
    monkeypatch.delenv("WASSER_INFER_THREADS", raising=False)
    base = run_table2(**kwargs)
    monkeypatch.setenv("WASSER_INFER_THREADS", "4")
    threaded = run_table2(**kwargs)
    assert base == threaded
    assert base == run_table2(**kwargs)


def test_monotone_power_in_n():
    rows = run_table2(p_list=(2.0,), n_list=(50, 100, 200, 400), mu_list=(0.7,),
                      replications=300, seed=42)
    rates = [r.rejection_rate for r in rows]
    assert all(a <= b for a, b in zip(rates, rates[1:])), rates


def test_level_control_at_boundary():
    reps = 400
    rows = run_table2(p_list=(2.0,), n_list=(2000,), mu_list=(1.0,), replications=reps, seed=42)
    rate = rows[0].rejection_rate
    se = math.sqrt(0.05 * 0.95 / reps)
    assert 0.05 - 2 * se <= rate <= 0.05 + 3 * se, rate


def test_table3_threshold_is_quadrature_derived():
    assert table3_delta0(2.0) == math.sqrt(2.0)
    assert abs(table3_delta0(1.0) - 1.1666309411753726) < 1e-9
    assert abs(table3_delta0(3.0) - 1.6111952231804894) < 1e-9
    rows = run_table3(p_list=(2.0,), n_list=(50,), param_list=((0.0, 1.5),),
                      replications=20, seed=1)
    assert rows[0].config.delta0 == math.sqrt(2.0)


def test_config_validation():
    with pytest.raises(DomainError):
        ExperimentConfig(LocationModel(1.0), 2.0, 1, 1, None, None, 10, 0)
    with pytest.raises(DomainError):
        ExperimentConfig(LocationModel(1.0), 2.0, 10, 10, None, None, 0, 0)


def test_csv_round_trip(tmp_path):
    rows = run_table1(p_list=(1.0,), n_list=(50,), mu=1.0, replications=1, seed=0)
    out = tmp_path / "t1.csv"
    with open(out, "w") as fh:
        rows_to_csv(rows, fh, comments=("hello",))
    text = out.read_text().splitlines()
    assert text[0] == "# hello"
    assert text[1].startswith("table,model,p,n,m,mu,lambda,delta0,alpha")
    fields = text[2].split(",")
    assert fields[0] == "1" and fields[1] == "location"
    assert fields[11] == ""  # no rejection rate in table 1
