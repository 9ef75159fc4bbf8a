import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from levy_optquant.errors import TooFewSamples
from levy_optquant.harness import ExperimentConfig, run_experiment, write_outputs
from levy_optquant.harness.runner import run_replicates
from levy_optquant.harness.stats import kde, shortest_ci, silverman_bandwidth, summarize


def _brute_ci(x, level):
    x = sorted(x)
    k = math.ceil(level * len(x) - 1e-9)
    return min(x[i + k - 1] - x[i] for i in range(len(x) - k + 1))


def test_shortest_ci_example():
    x = np.arange(100) / 100
    assert shortest_ci(x, 0.95) == pytest.approx(0.94, abs=1e-12)
    assert shortest_ci(x, 0.95) == pytest.approx(_brute_ci(list(x), 0.95), abs=1e-15)


def test_shortest_ci_constant_and_errors():
    assert shortest_ci(np.full(50, 3.2)) == 0.0
    with pytest.raises(TooFewSamples):
        shortest_ci(np.arange(19.0))
    with pytest.raises(ValueError):
        shortest_ci(np.arange(100.0), 1.0)


@settings(max_examples=100, deadline=None)
@given(
    x=arrays(np.float64, st.integers(20, 200), elements=st.floats(-100, 100)),
    level=st.sampled_from([0.5, 0.8, 0.9, 0.95]),
    seed=st.integers(0, 2**16),
)
def test_shortest_ci_brute_and_permutation(x, level, seed):
    if x.size * (1 - level) < 1:
        return
    c = shortest_ci(x, level)
    assert c == _brute_ci(list(x), level)
    assert shortest_ci(np.random.default_rng(seed).permutation(x), level) == c


def test_kde_gaussian_oracle():
    x = np.random.default_rng(0).standard_normal(10_000)
    d, h = kde(x, np.array([0.0]))
    assert d[0] == pytest.approx(1 / math.sqrt(2 * math.pi), abs=0.02)
    assert h == pytest.approx(1.06 * np.std(x, ddof=1) * 10_000 ** -0.2, rel=1e-14)
    grid = np.linspace(-10, 10, 4001)
    mass = np.trapezoid(kde(x, grid)[0], grid)
    assert mass == pytest.approx(1.0, abs=0.01)


def test_kde_two_point_symmetric():
    grid = np.linspace(-3, 3, 61)
    d, _ = kde([-1.0, 1.0], grid)
    np.testing.assert_allclose(d, d[::-1], atol=1e-15)
    assert np.all(d >= 0)
    with pytest.raises(TooFewSamples):
        kde([1.0], grid)


def test_kde_matches_direct_sum():
    x = np.random.default_rng(1).exponential(size=300)
    grid = np.linspace(-1, 6, 15)
    h = silverman_bandwidth(x)
    direct = np.exp(-0.5 * ((grid[:, None] - x[None, :]) / h) ** 2).mean(axis=1) / (h * math.sqrt(2 * math.pi))
    np.testing.assert_allclose(kde(x, grid)[0], direct, rtol=1e-10)


def test_kde_zero_spread():
    d, h = kde(np.zeros(5), np.array([0.0, 1.0]))
    assert h > 0 and d[0] > 0 and d[1] == 0.0


@settings(max_examples=50, deadline=None)
@given(e=arrays(np.float64, st.integers(20, 300), elements=st.floats(-50, 50)))
def test_summary_consistency(e):
    s = summarize(e)
    assert s["rmse"] ** 2 == pytest.approx(s["mean_error"] ** 2 + s["variance"], rel=1e-12, abs=1e-12)
    assert s["mae"] <= s["rmse"] + 1e-12
    assert s["count"] == e.size


def _square(i):
    return i * i


def test_run_replicates_order():
    assert run_replicates(_square, 7) == [i * i for i in range(7)]
    assert run_replicates(_square, 7, workers=2, chunk=2) == [i * i for i in range(7)]
    with pytest.raises(ValueError):
        run_replicates(_square, 0)


def test_config_defaults_and_overrides(tmp_path):
    cfg = ExperimentConfig.from_dict("table1", {"replicates": 10, "seed": 3})
    assert cfg["K"] == 50 and cfg["replicates"] == 10 and cfg.seed == 3
    assert ExperimentConfig.from_dict("figure4", {}).source == "hsamples"
    f = tmp_path / "c.json"
    f.write_text(json.dumps({"params": {"n": 50}, "replicates": 4}))
    cfg = ExperimentConfig.load("localocc", str(f), seed=7)
    assert cfg["n"] == 50 and cfg["replicates"] == 4 and cfg.seed == 7
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict("table9", {})
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict("table1", {"replicates": 0})


SMALL = {
    "table1": {"replicates": 40, "K": 10},
    "table2": {"replicates": 20, "n": 20, "m": 20},
    "localocc": {"replicates": 30, "n": 10, "n_ref": 100},
    "figure3": {"x_grid": [0.0, 2.0, 5], "y_grid": [-1.0, 1.0, 5]},
    "figure4": {"replicates": 2, "n": 30, "m": 30},
}


def _run(name, workers, out):
    cfg = ExperimentConfig.from_dict(name, dict(SMALL[name]), seed=11, workers=workers)
    files = write_outputs(cfg, run_experiment(cfg), str(out))
    return {f: (out / f).read_bytes() for f in files}


@pytest.mark.parametrize("name", sorted(SMALL))
def test_outputs_byte_identical_across_workers(name, tmp_path):
    a = _run(name, 1, tmp_path / "a")
    b = _run(name, 2, tmp_path / "b")
    assert a == b
    assert b"\r" not in b"".join(a.values())


def test_output_layout(tmp_path):
    files = _run("table1", 1, tmp_path)
    assert sorted(files) == ["config.json", "figure1.csv", "figure2.csv", "summary.json", "variates.csv"]
    assert files["variates.csv"].decode().splitlines()[0] == "V,V_mean,V_med,V_shift,V_mean_1"
    assert files["figure1.csv"].decode().splitlines()[0] == "x,V,V_mean,V_med"
    summary = json.loads(files["summary.json"])
    assert set(summary) == {"experiment", "columns", "rows", "kde_bandwidths", "metadata"}
    assert set(summary["rows"]["V"]) == {"rmse", "mae", "ci95_length", "mean_error", "variance", "count"}
    assert "runtime_seconds" not in summary["metadata"]
    files = _run("figure3", 1, tmp_path / "f3")
    assert files["figure3.csv"].decode().splitlines()[0] == "x,y,F"
    assert "variates.csv" not in files


def test_table1_errors_in_sigma_units():
    a = run_experiment(ExperimentConfig.from_dict("table1", {"replicates": 20, "K": 5}, seed=2))
    b = run_experiment(
        ExperimentConfig.from_dict("table1", {"replicates": 20, "K": 5, "model": {"kind": "bm", "sigma": 3.0}}, seed=2)
    )
    for c in a["columns"]:
        np.testing.assert_allclose(a["variates"][c], b["variates"][c], rtol=1e-9, atol=1e-12)
