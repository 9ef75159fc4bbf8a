"""Limit objects of the rescaled supremum gap and their functionals.

A draw holds the distances ``u_j`` of consecutive observations from the
supremum, in time order, with ``V = min u``. In the Brownian case these are
values of a two-sided 3-dimensional Bessel process at the times ``j + U``;
in the stable case they come from a long simulated pre-limit path.

``H(x) = prod_j F(x + u_j - V, u_j - u_{j+1})`` is the conditional law of the
remaining gap, and the limit errors of the conditional mean and median
estimators are ``V - int_0^inf (1 - H)`` and ``V - H^{-1}(1/2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

import numpy as np

from .cond_sup_law import CondLaw
from .errors import MeanUndefined, UnsupportedModel
from .models import BrownianMotion, StableModel, expected_V
from .path_sim import simulate_sup_proxy
from .rng import SeedLike, as_generator
from .stable_law import StableParams

__all__ = [
    "SupLimitDraw",
    "LimitVariates",
    "QuadraturePolicy",
    "BM_POLICY",
    "STABLE_POLICY",
    "draw_bessel_limit",
    "draw_stable_prelimit",
    "limit_H",
    "limit_log_H",
    "limit_variates",
]


@dataclass
class SupLimitDraw:
    """One realization of the zoomed-in limit.

    ``u_values[i]`` carries the label ``j = first_label + i`` (observation
    times ``j + U`` relative to the supremum time).
    """

    u_values: np.ndarray
    U: float
    V: float
    argmin_index: int
    first_label: int
    meta: dict = field(default_factory=dict)

    @property
    def labels(self) -> np.ndarray:
        return self.first_label + np.arange(self.u_values.size)


@dataclass
class LimitVariates:
    V: float
    V_mean: float
    V_med: float
    V_shift: float
    V_mean_k: Dict[int, float]

    def row(self, k_list: Sequence[int]) -> list:
        return [self.V, self.V_mean, self.V_med, self.V_shift] + [self.V_mean_k[k] for k in k_list]


@dataclass(frozen=True)
class QuadraturePolicy:
    """How to integrate ``1 - H`` and invert ``H``.

    ``adaptive``: trapezoid of step ``step`` extended until ``1 - H < tail``,
    median by bisection on ``H`` itself. Otherwise a fixed grid on
    ``[0, x_max]`` whose linear interpolant is also used for the median,
    unless ``median_exact`` asks for bisection on ``H``.
    ``truncation`` restricts the product to ``H(.; k)`` for the main variates.
    """

    adaptive: bool = True
    step: float = 0.01
    tail: float = 1e-12
    x_max: float = 3.0
    truncation: Optional[int] = None
    median_tol: float = 1e-10
    median_exact: bool = False


BM_POLICY = QuadraturePolicy()
STABLE_POLICY = QuadraturePolicy(adaptive=False, step=0.1, x_max=3.0, truncation=15)


def draw_bessel_limit(sigma: float = 1.0, K: int = 50, seed: SeedLike = None) -> SupLimitDraw:
    """Two-sided Bessel-3 values at ``j + U``, ``j = -K..K-1``, scaled by ``sigma``.

    Draw order: ``U``, then the right-side 3-d Gaussian increments (K x 3),
    then the left side (K x 3).
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    rng = as_generator(seed)
    U = rng.random()
    right_steps = rng.standard_normal((K, 3))
    left_steps = rng.standard_normal((K, 3))
    # times U, 1 + U, ..., K - 1 + U and 1 - U, 2 - U, ..., K - U
    right_steps[0] *= math.sqrt(U)
    left_steps[0] *= math.sqrt(1.0 - U)
    right = np.sqrt((np.cumsum(right_steps, axis=0) ** 2).sum(axis=1))
    left = np.sqrt((np.cumsum(left_steps, axis=0) ** 2).sum(axis=1))
    u = sigma * np.concatenate([left[::-1], right])
    i = int(np.argmin(u))
    return SupLimitDraw(u, U, float(u[i]), i, -K, {"kind": "bessel", "K": K, "sigma": sigma})


def draw_stable_prelimit(params: StableParams, n: int = 300, m: int = 300, seed: SeedLike = None) -> SupLimitDraw:
    """Pre-limit stand-in for the stable limit, from a path on ``[0, n]``.

    The path is simulated with step ``1/m`` on ``[0, n]``, which up to the
    factor ``n**(1/alpha)`` is a unit-horizon path on ``n m`` fine steps
    observed at ``i/n``. The distances ``u_i`` are taken from the
    bias-corrected fine supremum.
    """
    if params.one_sided == 0:
        raise UnsupportedModel("the pre-limit H needs a spectrally one-sided law")
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    model = StableModel(params)
    path = simulate_sup_proxy(model, n, n * m, seed)
    scale = n ** (1.0 / params.alpha)
    u = scale * (path.fine_sup - path.observations)
    i = int(np.argmin(u))
    return SupLimitDraw(
        u, float("nan"), float(u[i]), i, -i, {"kind": "stable-prelimit", "n": n, "m": m}
    )


def _pairs(draw: SupLimitDraw, k: Optional[int]):
    u = draw.u_values
    a, b = u[:-1], u[1:]
    idx = np.arange(a.size)
    keep = np.isfinite(a) & np.isfinite(b)
    if k is not None:
        I = draw.argmin_index
        keep &= (idx >= I - k) & (idx <= I + k - 1)
    return a[keep], b[keep]


def limit_log_H(draw: SupLimitDraw, law: CondLaw, x, k: Optional[int] = None) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    a, b = _pairs(draw, k)
    xs = x.reshape(-1, 1)
    lf = law.log_F(xs + a - draw.V, a - b)
    return lf.sum(axis=1).reshape(x.shape)


def limit_H(draw: SupLimitDraw, law: CondLaw, x, k: Optional[int] = None) -> np.ndarray:
    """``H(x)`` (or ``H(x; k)`` with the ``2k`` factors around the minimum)."""
    return np.exp(limit_log_H(draw, law, x, k))


def _bisect_half(H, lo, hi, tol):
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if H(np.array([mid]))[0] < 0.5:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _integral_and_median(H, policy: QuadraturePolicy, median: bool = True):
    """``int_0^inf (1 - H)``, ``H^{-1}(1/2)`` and the last grid point, for a vectorized ``H``.

    With ``median=False`` the median is skipped and returned as nan.
    """
    step = policy.step
    if policy.adaptive:
        chunk = 256
        vals = [np.zeros(1)]
        start = 0
        while True:
            xs = (start + 1 + np.arange(chunk)) * step
            v = H(xs)
            vals.append(v)
            start += chunk
            if 1.0 - v[-1] < policy.tail or start * step > 1e4:
                break
        h = np.concatenate(vals)
        h[0] = H(np.zeros(1))[0]
        tail = 1.0 - h
        integral = step * (tail.sum() - 0.5 * (tail[0] + tail[-1]))
        if not median:
            return integral, float("nan"), (h.size - 1) * step
        # median: bracket on the grid, then bisection on H itself
        j = max(int(np.searchsorted(h, 0.5)), 1)
        med = _bisect_half(H, (j - 1) * step, j * step, policy.median_tol)
        return integral, med, (h.size - 1) * step
    n_pts = int(round(policy.x_max / step))
    xs = np.arange(n_pts + 1) * step
    h = H(xs)
    tail = 1.0 - h
    integral = step * (tail.sum() - 0.5 * (tail[0] + tail[-1]))
    if not median:
        return integral, float("nan"), xs[-1]
    if h[-1] >= 0.5:
        j = max(int(np.searchsorted(h, 0.5)), 1)
        if policy.median_exact:
            med = _bisect_half(H, xs[j - 1], xs[j], policy.median_tol)
        else:
            h0, h1 = h[j - 1], h[j]
            med = xs[j - 1] + step * (0.5 - h0) / (h1 - h0) if h1 > h0 else xs[j]
    else:
        lo, hi = xs[-1], 2.0 * xs[-1]
        while H(np.array([hi]))[0] < 0.5:
            lo, hi = hi, 2.0 * hi
        med = _bisect_half(H, lo, hi, policy.median_tol)
    return integral, med, xs[-1]


def limit_variates(
    draw: SupLimitDraw,
    law: CondLaw,
    k_list: Sequence[int] = (1,),
    policy: QuadraturePolicy = BM_POLICY,
    mean_V: Optional[float] = None,
) -> LimitVariates:
    """``V``, ``V_mean``, ``V_med``, ``V_shift`` and ``V_mean_k`` for ``k`` in ``k_list``.

    ``mean_V`` defaults to the closed-form ``E V`` of the model.
    """
    alpha = law.model.alpha_effective
    if policy.truncation is None and alpha <= 1.0:
        raise MeanUndefined("untruncated conditional mean needs alpha > 1")
    if mean_V is None:
        mean_V = expected_V(law.model) if alpha > 1.0 else float("nan")

    # the grid runs in units of the model scale
    s = law.model.sigma if isinstance(law.model, BrownianMotion) else law.model.params.scale

    def H_for(k):
        a, b = _pairs(draw, k)
        d = a - draw.V

        def H(xs):
            return np.exp(law.log_F(s * xs[:, None] + d, a - b).sum(axis=1))

        return H

    integral, med, _ = _integral_and_median(H_for(policy.truncation), policy)
    integral, med = s * integral, s * med
    V = draw.V
    v_k = {}
    for k in k_list:
        if k == policy.truncation:
            v_k[k] = V - integral
        else:
            v_k[k] = V - s * _integral_and_median(H_for(k), policy, median=False)[0]
    return LimitVariates(V, V - integral, V - med, V - mean_V, v_k)
