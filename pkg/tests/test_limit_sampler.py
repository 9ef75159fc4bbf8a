import math
from types import SimpleNamespace

import numpy as np
import pytest
from scipy.special import zeta

from levy_optquant.cond_sup_law import CondLaw
from levy_optquant.errors import MeanUndefined, UnsupportedModel
from levy_optquant.limit_sampler import (
    BM_POLICY,
    STABLE_POLICY,
    SupLimitDraw,
    draw_bessel_limit,
    draw_stable_prelimit,
    limit_H,
    limit_variates,
)
from levy_optquant.models import BrownianMotion, StableModel, expected_V
from levy_optquant.stable_law import params_from_skew

BM_LAW = CondLaw(BrownianMotion())
NEG = params_from_skew(1.8, -1.0)
NEG_LAW = CondLaw(StableModel(NEG))
EV_BM = -zeta(0.5) / math.sqrt(2 * math.pi)


def _restrict(draw: SupLimitDraw, K: int) -> SupLimitDraw:
    keep = (draw.labels >= -K) & (draw.labels < K)
    u = draw.u_values[keep]
    i = int(np.argmin(u))
    return SupLimitDraw(u, draw.U, float(u[i]), i, -K)


def test_bessel_structure():
    d = draw_bessel_limit(1.0, 50, seed=1)
    assert d.u_values.shape == (100,)
    assert np.all(d.u_values > 0)
    assert 0 < d.U < 1
    assert d.V == d.u_values.min() == d.u_values[d.argmin_index]
    assert d.labels[0] == -50 and d.labels[-1] == 49


def test_bessel_one_point_law():
    # |B_t| for 3-d B at t = U: E |B_t|^2 = 3 t
    rows = [draw_bessel_limit(1.0, 2, seed=(3, i)) for i in range(20000)]
    r = np.array([d.u_values[2] ** 2 / d.U for d in rows])
    assert r.mean() == pytest.approx(3.0, abs=4 * r.std() / math.sqrt(r.size))


def test_bessel_scaling():
    a = draw_bessel_limit(1.0, 10, seed=5)
    b = draw_bessel_limit(2.5, 10, seed=5)
    np.testing.assert_allclose(b.u_values, 2.5 * a.u_values, rtol=1e-15)


def test_expected_V_bm():
    V = np.array([draw_bessel_limit(1.0, 50, seed=(0, i)).V for i in range(10_000)])
    assert abs(V.mean() - 0.5826) < 0.01
    assert expected_V(BrownianMotion()) == pytest.approx(EV_BM, rel=1e-14)


def _coupled_V(windows, K_big, count):
    # draws at K_big restricted to the central window K have the law of a K draw
    draws = [draw_bessel_limit(1.0, K_big, seed=(1, i)) for i in range(count)]
    return np.array([[_restrict(d, K).V for K in windows] for d in draws])


@pytest.mark.xfail(
    strict=True,
    reason="the coupled truncation effect of K 50 -> 100 on E V is 0.0031 +- 0.0001 (1e5 draws)",
)
def test_K_doubling_changes_mean_V_below_0002():
    v = _coupled_V((50, 100), 100, 10_000)
    assert abs(v[:, 1].mean() - v[:, 0].mean()) < 0.002


def test_K_truncation_effect_decays():
    v = _coupled_V((25, 50, 100, 200), 200, 20_000)
    assert np.all(np.diff(v, axis=1) <= 0)
    steps = -np.diff(v.mean(axis=0))
    assert np.all(np.diff(steps) < 0)
    assert steps[-1] < 0.003
    # second moment finite, converging under K-doubling
    m2 = np.mean(v ** 2, axis=0)
    assert np.all(np.isfinite(m2))
    assert np.all(np.diff(-np.diff(m2)) < 0)


def test_H_basic_properties():
    xs = np.arange(0.0, 3.01, 0.1)
    for i in range(20):
        d = draw_bessel_limit(1.0, 50, seed=(2, i))
        h = limit_H(d, BM_LAW, xs)
        assert h[0] == 0.0
        assert np.all(np.diff(h) >= 0)
        assert np.all((0 <= h) & (h <= 1))
        assert limit_H(d, BM_LAW, 50.0) == pytest.approx(1.0, abs=1e-12)
        for k in (1, 2, 5):
            assert np.all(limit_H(d, BM_LAW, xs, k) >= h - 1e-15)


def test_bm_H_product_formula():
    d = draw_bessel_limit(1.0, 50, seed=4)
    u = d.u_values
    for x in (0.05, 0.3, 1.0, 2.0):
        direct = 1.0
        for j in range(u.size - 1):
            direct *= 1.0 - math.exp(-2.0 * (x + u[j] - d.V) * (x + u[j + 1] - d.V))
        assert float(limit_H(d, BM_LAW, x)) == pytest.approx(direct, abs=1e-12)


def test_variates_relations():
    for i in range(30):
        d = draw_bessel_limit(1.0, 50, seed=(6, i))
        lv = limit_variates(d, BM_LAW, (1, 3))
        assert lv.V_mean <= lv.V and lv.V_med <= lv.V
        assert lv.V_shift == pytest.approx(lv.V - EV_BM, abs=1e-14)
        # fewer factors, larger H, smaller integral
        assert lv.V_mean_k[1] >= lv.V_mean_k[3] - 1e-12 >= lv.V_mean - 2e-12
        med = lv.V - lv.V_med
        assert float(limit_H(d, BM_LAW, med)) == pytest.approx(0.5, abs=1e-9)


def test_conditional_mean_unbiased_in_the_limit():
    vm = np.array([limit_variates(draw_bessel_limit(1.0, 50, seed=(8, i)), BM_LAW, ()).V_mean for i in range(3000)])
    assert abs(vm.mean()) < 3 * vm.std() / math.sqrt(vm.size)


def test_stable_prelimit_draw():
    for i in range(5):
        d = draw_stable_prelimit(NEG, 300, 300, seed=(9, i))
        assert math.isnan(d.U)
        assert d.u_values.shape == (301,)
        assert np.all(d.u_values >= 0)
        assert d.V > 0
        assert d.u_values[d.argmin_index] == d.V
        lv = limit_variates(d, NEG_LAW, (1,), STABLE_POLICY)
        assert lv.V_mean <= lv.V and lv.V_med <= lv.V


def test_stable_prelimit_mean_V():
    V = np.array([draw_stable_prelimit(NEG, 300, 300, seed=(10, i)).V for i in range(1000)])
    assert np.isfinite(V.mean()) and V.mean() > 0
    # prelimit mean within Monte Carlo error of the limit
    assert abs(V.mean() - expected_V(StableModel(NEG))) < 4 * V.std() / math.sqrt(V.size)


def test_stable_prelimit_rejects_two_sided():
    with pytest.raises(UnsupportedModel):
        draw_stable_prelimit(params_from_skew(1.8, 0.0), 10, 10, seed=0)


def test_mean_undefined():
    law = SimpleNamespace(model=StableModel(params_from_skew(0.9, 0.3)))
    d = draw_bessel_limit(1.0, 5, seed=0)
    with pytest.raises(MeanUndefined):
        limit_variates(d, law, (1,), BM_POLICY)
    with pytest.raises(MeanUndefined):
        expected_V(law.model)
