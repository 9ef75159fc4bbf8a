"""Supremum estimators from equidistant observations.

With ``Delta_j = M_n - X_{j/n}`` and ``c = n**(1/alpha)`` the conditional law
of ``sup X - M_n`` given the observations is

    H_n(x) = prod_j F(c (x + Delta_j), c (Delta_j - Delta_{j+1})),

and the conditional mean and median estimators are ``M_n + int (1 - H_n)``
and ``M_n + H_n^{-1}(1/2)``. Both integrals are computed on the rescaled
axis ``u = c x``, where ``H_n(u / c)`` has the same form as the limit ``H``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Union

import numpy as np

from .cond_sup_law import CondLaw, STABLE_TAIL_CONST
from .errors import MeanUndefined
from .limit_sampler import BM_POLICY, STABLE_POLICY, QuadraturePolicy, _integral_and_median
from .models import BrownianMotion, ModelSpec
from .path_sim import PathSample

__all__ = [
    "HnFunction",
    "EstimateReport",
    "make_Hn",
    "eval_Hn",
    "max_estimator",
    "cond_mean_sup",
    "cond_median_sup",
    "sup_report",
    "plug_in_sup",
    "joint_sup_inf",
    "ESTIMATOR_BM_POLICY",
    "ESTIMATOR_STABLE_POLICY",
]

ESTIMATOR_BM_POLICY = BM_POLICY
ESTIMATOR_STABLE_POLICY = replace(STABLE_POLICY, truncation=None, median_exact=True)

PathLike = Union[PathSample, np.ndarray, list]


def _obs(path: PathLike) -> np.ndarray:
    if isinstance(path, PathSample):
        return path.observations
    obs = np.asarray(path, dtype=float)
    if obs.ndim != 1 or obs.size < 1:
        raise ValueError("observations must be a nonempty 1-d array")
    return obs


@dataclass
class HnFunction:
    """Conditional CDF of ``sup X - M_n`` given the observations."""

    deltas: np.ndarray
    model: ModelSpec
    alpha_used: float
    k: Optional[int]
    argmax: int
    law: CondLaw = field(repr=False)

    @property
    def n(self) -> int:
        return self.deltas.size - 1

    @property
    def rate(self) -> float:
        return self.n ** (1.0 / self.alpha_used)

    def window(self):
        """Pair indices ``j`` entering the product."""
        j = np.arange(self.n)
        if self.k is None:
            return j
        I = self.argmax
        return j[(j >= I - self.k) & (j <= I + self.k - 1)]

    def _scaled_pairs(self):
        j = self.window()
        c = self.rate
        return c * self.deltas[j], c * (self.deltas[j] - self.deltas[j + 1])

    def log_H_scaled(self, u) -> np.ndarray:
        """``log H_n(u / c)``.

        Stable factors whose tail bound is below ``1e-17`` at every ``u``
        are dropped; each contributes ``log F > -1e-17``.
        """
        u = np.asarray(u, dtype=float)
        d, y = self._scaled_pairs()
        if not isinstance(self.model, BrownianMotion) and u.size:
            s = self.model.params.scale
            gap = max(float(u.min()), 0.0) + d - np.maximum(y, 0.0)
            keep = gap < s * (math.log(STABLE_TAIL_CONST) + 17.0 * math.log(10.0))
            d, y = d[keep], y[keep]
        return self.law.log_F(u.reshape(-1, 1) + d, y).sum(axis=1).reshape(u.shape)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.exp(self.log_H_scaled(self.rate * x))

    def tail_bound_scaled(self, u_max: float) -> float:
        """Upper bound on ``int_{u_max}^inf (1 - H_n(u / c)) du``.

        Uses ``1 - prod F <= sum (1 - F)`` and the exponential tail bound of
        each factor; the first argument exceeds the positive part of the
        second by ``u + c min(Delta_j, Delta_{j+1})``.
        """
        j = self.window()
        if j.size == 0:
            return 0.0
        c = self.rate
        lo = c * np.minimum(self.deltas[j], self.deltas[j + 1])
        if isinstance(self.model, BrownianMotion):
            const, s = math.exp(0.125), self.model.sigma
        else:
            const, s = STABLE_TAIL_CONST, self.model.params.scale
        return float(np.sum(const * s * np.exp(-(u_max + lo) / s)))


def make_Hn(path: PathLike, model: ModelSpec, k: Optional[int] = None, law: Optional[CondLaw] = None) -> HnFunction:
    obs = _obs(path)
    if obs.size < 2:
        raise ValueError("need at least two observations")
    if k is not None and k < 1:
        raise ValueError("k must be >= 1")
    I = int(np.argmax(obs))
    deltas = obs[I] - obs
    law = law if law is not None else CondLaw(model)
    return HnFunction(deltas, model, model.alpha_effective, k, I, law)


def eval_Hn(hn: HnFunction, x) -> np.ndarray:
    return hn(x)


def max_estimator(path: PathLike) -> float:
    """``M_n``, the largest observation."""
    return float(np.max(_obs(path)))


def _policy_for(model: ModelSpec, policy: Optional[QuadraturePolicy]) -> QuadraturePolicy:
    if policy is not None:
        return policy
    return ESTIMATOR_BM_POLICY if isinstance(model, BrownianMotion) else ESTIMATOR_STABLE_POLICY


@dataclass
class EstimateReport:
    estimate: float
    M_n: float
    integral_tail_bound: float
    k: Optional[int]
    params_used: dict
    method: str

    def as_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "M_n": self.M_n,
            "integral_tail_bound": self.integral_tail_bound,
            "k": self.k,
            "params_used": self.params_used,
            "method": self.method,
        }


def sup_report(
    path: PathLike,
    model: ModelSpec,
    method: str = "mean",
    k: Optional[int] = None,
    policy: Optional[QuadraturePolicy] = None,
    law: Optional[CondLaw] = None,
) -> EstimateReport:
    """Estimate with diagnostics; ``method`` is ``max``, ``mean`` or ``median``.

    ``integral_tail_bound`` bounds the part of ``int (1 - H_n)`` beyond the
    last quadrature point (original units); it is not added to the estimate.
    """
    obs = _obs(path)
    m_n = float(obs.max())
    if method == "max":
        return EstimateReport(m_n, m_n, 0.0, k, model.as_dict(), method)
    if method not in ("mean", "median"):
        raise ValueError(f"unknown method {method!r}")
    if method == "mean" and k is None and model.alpha_effective <= 1.0:
        raise MeanUndefined("untruncated conditional mean needs alpha > 1")
    hn = make_Hn(obs, model, k, law)
    pol = _policy_for(model, policy)
    # quadrature grid in units of the model scale, so estimates are scale equivariant
    s = model.sigma if isinstance(model, BrownianMotion) else model.params.scale
    integral, med, v_last = _integral_and_median(
        lambda v: np.exp(hn.log_H_scaled(s * v)), pol, median=method == "median"
    )
    c = hn.rate / s
    value = m_n + (integral if method == "mean" else med) / c
    bound = hn.tail_bound_scaled(s * v_last) / hn.rate if method == "mean" else 0.0
    return EstimateReport(float(value), m_n, bound, k, model.as_dict(), method)


def cond_mean_sup(path: PathLike, model: ModelSpec, k: Optional[int] = None, **kw) -> float:
    """Conditional mean ``M_n + int_0^inf (1 - H_n)`` (``H_n(.; k)`` when ``k`` is set)."""
    return sup_report(path, model, "mean", k, **kw).estimate


def cond_median_sup(path: PathLike, model: ModelSpec, k: Optional[int] = None, **kw) -> float:
    """Conditional median ``M_n + H_n^{-1}(1/2)``."""
    return sup_report(path, model, "median", k, **kw).estimate


def plug_in_sup(path: PathLike, estimated, kind: str = "mean", k: Optional[int] = None, **kw) -> float:
    """Estimator with the model replaced by pre-estimated parameters.

    ``estimated`` is an ``EstimatedParams`` (see ``param_estimators``) or a
    model; stable estimates are projected onto the spectrally one-sided law
    on the side indicated by ``rho_n`` so that ``F`` is available.
    """
    model = estimated.to_model(one_sided=True) if hasattr(estimated, "to_model") else estimated
    return sup_report(path, model, kind, k, **kw).estimate


def joint_sup_inf(path: PathLike, model: ModelSpec, k: Optional[int] = None, **kw):
    """Conditional-mean estimates of ``sup X``, ``inf X`` and their difference.

    The infimum is minus the supremum estimate of the negated path under the
    model of ``-X``.
    """
    obs = _obs(path)
    sup = cond_mean_sup(obs, model, k, **kw)
    inf = -cond_mean_sup(-obs, model.dual(), k, **kw)
    return sup, inf, sup - inf
