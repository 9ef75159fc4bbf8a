import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from levy_optquant.errors import DegenerateEstimate, DegeneratePath
from levy_optquant.models import BrownianMotion, StableModel
from levy_optquant.param_estimators import DEFAULT_Q, estimate_sigma, estimate_stable_triplet
from levy_optquant.path_sim import simulate_path
from levy_optquant.stable_law import params_from_skew, params_from_triplet

NEG = params_from_skew(1.8, -1.0)


def test_sigma_arithmetic():
    obs = np.cumsum([0.0, 0.1, -0.1, 0.2, 0.0])
    assert estimate_sigma(obs).sigma ** 2 == pytest.approx(0.06, abs=1e-15)


def test_sigma_consistency():
    s2 = np.array([estimate_sigma(simulate_path(BrownianMotion(0.0, 2.0), 10_000, seed=(1, i))).sigma ** 2 for i in range(200)])
    # sd of sigma_n^2 is sqrt(2 / n) sigma^2 = 0.057
    assert np.mean(np.abs(s2 - 4.0) < 0.25) >= 0.99


def test_sigma_scale_equivariance():
    p = simulate_path(BrownianMotion(0.3, 1.1), 500, seed=2)
    for c in (0.5, 2.0, 8.0):
        assert estimate_sigma(c * p.observations).sigma == pytest.approx(c * estimate_sigma(p).sigma, rel=1e-14)


def test_sigma_degenerate():
    with pytest.raises(DegeneratePath):
        estimate_sigma(np.zeros(5))


def test_alpha_cap_binds():
    # find a short Gaussian path with rho_n = 0.6 and raw alpha in (1/0.6, 2)
    rng = np.random.default_rng(3)
    for _ in range(10_000):
        obs = np.cumsum(np.r_[0.0, rng.standard_normal(10)])
        try:
            est = estimate_stable_triplet(obs)
        except DegenerateEstimate:
            continue
        if est.rho == 0.6 and 1.0 / 0.6 < est.alpha_raw < 2.0:
            break
    else:
        pytest.fail("no such path found")
    assert est.alpha == pytest.approx(1 / 0.6, abs=1e-15)
    assert est.truncation_applied
    params_from_triplet(est.alpha, est.rho, est.lam)


def test_estimator_formula():
    p = simulate_path(StableModel(NEG), 50, seed=4).observations
    q = -0.3
    d1 = np.abs(np.diff(p))
    d2 = np.abs(p[2:] - p[:-2])
    raw = q * math.log(2) / math.log(np.sum(d2 ** q) / np.sum(d1 ** q))
    est = estimate_stable_triplet(p, q)
    assert est.alpha_raw == pytest.approx(raw, rel=1e-12)
    assert est.rho == np.mean(np.diff(p) > 0) or est.truncation_applied
    assert est.lam == pytest.approx(np.mean(np.log(50 ** (1 / est.alpha) * d1)), rel=1e-12)
    assert est.q == q


def _estimates(n, reps, tag):
    out = []
    for i in range(reps):
        try:
            e = estimate_stable_triplet(simulate_path(StableModel(NEG), n, seed=(tag, n, i)))
            out.append((e.alpha, e.rho, e.lam, e.alpha_raw))
        except DegenerateEstimate:
            out.append((np.inf, np.nan, np.nan, np.inf))
    return np.array(out)


@pytest.mark.xfail(
    strict=True,
    reason="sd of alpha_n at n = 1e4 is about 0.08 (no q in (-1/2, 0) gets below 0.05); "
    "lambda_n inherits it amplified by log n",
)
def test_alpha_lambda_rate_envelopes_at_1e4():
    rows = _estimates(10_000, 200, 5)
    assert np.mean(np.abs(rows[:, 0] - 1.8) <= 0.05) >= 0.95
    assert np.mean(np.abs(rows[:, 2] - NEG.lam) <= 0.05) >= 0.95


def test_rho_rate_envelope_at_1e4():
    rows = _estimates(10_000, 200, 5)
    assert np.mean(np.abs(rows[:, 1] - 5 / 9) <= 0.02) >= 0.95


def test_lambda_error_decomposition():
    n = 10_000
    hits = 0
    for i in range(200):
        p = simulate_path(StableModel(NEG), n, seed=(5, n, i))
        e = estimate_stable_triplet(p)
        lam_true_alpha = float(np.mean(np.log(n ** (1 / 1.8) * np.abs(p.increments))))
        assert e.lam - lam_true_alpha == pytest.approx(math.log(n) * (1 / e.alpha - 1 / 1.8), abs=1e-10)
        hits += abs(lam_true_alpha - NEG.lam) <= 0.05
    assert hits / 200 >= 0.95


def test_alpha_root_n_rate():
    # sqrt(n) (alpha_raw - alpha) has a stable spread across n
    spread = [math.sqrt(n) * np.std(_estimates(n, 200, 6)[:, 3]) for n in (1000, 4000, 16_000)]
    assert max(spread) / min(spread) < 1.3
    assert np.all(np.array(spread) < 12.0)


def test_symmetric_rho_mean():
    p = params_from_skew(1.5, 0.0)
    rho = []
    for i in range(2000):
        try:
            rho.append(estimate_stable_triplet(simulate_path(StableModel(p), 200, seed=(6, i))).rho)
        except DegenerateEstimate:
            pass
    rho = np.array(rho)
    assert rho.size > 1900
    assert abs(rho.mean() - 0.5) < 3 * rho.std() / math.sqrt(rho.size)


def test_log_ratio_limit():
    q, n = DEFAULT_Q, 2000
    r = []
    for i in range(300):
        x = simulate_path(StableModel(NEG), n, seed=(7, i)).observations
        r.append(np.sum(np.abs(x[2:] - x[:-2]) ** q) / np.sum(np.abs(np.diff(x)) ** q))
    r = np.array(r)
    assert abs(r.mean() - 2 ** (q / 1.8)) < 3 * r.std() / math.sqrt(r.size) + 1e-3


def test_alpha_error_times_log_n_decreases():
    # an undefined estimate counts as an infinite error
    med = [np.median(np.abs(_estimates(n, 200, 8)[:, 0] - 1.8)) * math.log(n) for n in (100, 1000, 10_000)]
    assert med[0] > med[1] > med[2]


@settings(max_examples=200, deadline=None)
@given(
    incr=arrays(np.float64, st.integers(2, 30), elements=st.floats(-5, 5).filter(lambda v: abs(v) > 1e-6)),
    q=st.floats(-0.49, -0.01),
)
def test_outputs_always_legal(incr, q):
    obs = np.r_[0.0, np.cumsum(incr)]
    try:
        est = estimate_stable_triplet(obs, q)
    except (DegeneratePath, DegenerateEstimate):
        return
    assert 0.0 < est.alpha < 2.0
    p = params_from_triplet(est.alpha, est.rho, est.lam)
    assert p.alpha == est.alpha
    d = est.as_dict()
    assert d["truncation_applied"] == est.truncation_applied


def test_degenerate_inputs():
    with pytest.raises(DegeneratePath):
        estimate_stable_triplet([0.0, 1.0, 1.0, 2.0])
    with pytest.raises(DegeneratePath):
        estimate_stable_triplet([0.0, 1.0, 0.0, 0.5])
    # short two-step increments push the power-sum ratio above 1
    with pytest.raises(DegenerateEstimate):
        estimate_stable_triplet([0.0, 1.0, 0.1, 1.1])
    with pytest.raises(ValueError):
        estimate_stable_triplet([0.0, 1.0, 2.0], q=0.3)


def test_to_model():
    p = simulate_path(StableModel(NEG), 2000, seed=9)
    est = estimate_stable_triplet(p)
    m = est.to_model(one_sided=True)
    assert m.params.beta == -1.0
    assert m.params.alpha == est.alpha
    assert estimate_sigma(p).to_model().sigma == estimate_sigma(p).sigma
