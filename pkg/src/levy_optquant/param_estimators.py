"""Pre-estimation of the model from the observed increments."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateEstimate, DegeneratePath
from .models import BrownianMotion, StableModel
from .path_sim import PathSample
from .stable_law import params_from_triplet

__all__ = ["EstimatedParams", "estimate_sigma", "estimate_stable_triplet", "DEFAULT_Q"]

DEFAULT_Q = -0.25
_RHO_EDGE = 1e-6


def _obs(path) -> np.ndarray:
    if isinstance(path, PathSample):
        return path.observations
    return np.asarray(path, dtype=float)


@dataclass(frozen=True)
class EstimatedParams:
    kind: str
    n: int
    sigma: Optional[float] = None
    alpha: Optional[float] = None
    rho: Optional[float] = None
    lam: Optional[float] = None
    q: Optional[float] = None
    alpha_raw: Optional[float] = None
    truncation_applied: bool = False

    def to_model(self, one_sided: bool = False):
        """Model built from the estimates.

        With ``one_sided`` a stable estimate is replaced by the spectrally
        negative law (``rho = 1/alpha``) when ``rho_n > 1/2`` and by the
        spectrally positive one otherwise, keeping ``alpha_n`` and
        ``lambda_n``.
        """
        if self.kind == "bm":
            return BrownianMotion(0.0, self.sigma)
        rho = self.rho
        if one_sided:
            if self.alpha <= 1.0:
                raise DegenerateEstimate("one-sided projection needs alpha_n > 1")
            rho = 1.0 / self.alpha if rho > 0.5 else 1.0 - 1.0 / self.alpha
        return StableModel(params_from_triplet(self.alpha, rho, self.lam))

    def as_dict(self) -> dict:
        d = {"kind": self.kind, "n": self.n}
        if self.kind == "bm":
            d["sigma"] = self.sigma
        else:
            d.update(
                alpha=self.alpha,
                rho=self.rho,
                **{"lambda": self.lam},
                q=self.q,
                alpha_raw=self.alpha_raw,
                truncation_applied=self.truncation_applied,
            )
        return d


def estimate_sigma(path) -> EstimatedParams:
    """``sigma_n = sqrt(sum of squared increments)`` on the unit horizon."""
    incr = np.diff(_obs(path))
    if incr.size < 1:
        raise ValueError("need n >= 1")
    s2 = float(np.sum(incr * incr))
    if s2 == 0.0:
        raise DegeneratePath("all increments are zero")
    return EstimatedParams("bm", incr.size, sigma=math.sqrt(s2))


def estimate_stable_triplet(path, q: float = DEFAULT_Q) -> EstimatedParams:
    """Moment-ratio estimate of ``alpha`` and empirical ``rho``, ``lambda``.

    ``alpha_n = q log 2 / log(sum |X_i - X_{i-2}|**q / sum |Delta_i|**q)``;
    above 1 it is capped at ``1 / max(rho_n, 1 - rho_n)``, ``rho_n`` is then
    clipped into the legal range and ``lambda_n`` uses the capped ``alpha_n``.
    """
    if not (-0.5 < q < 0.0):
        raise ValueError("q must lie in (-1/2, 0)")
    obs = _obs(path)
    incr = np.diff(obs)
    n = incr.size
    if n < 2:
        raise ValueError("need n >= 2")
    if np.any(incr == 0.0):
        raise DegeneratePath("zero increments make the negative moments infinite")
    lag2 = obs[2:] - obs[:-2]
    if np.any(lag2 == 0.0):
        raise DegeneratePath("zero two-step increments")
    one = np.sum(np.abs(incr) ** q)
    two = np.sum(np.abs(lag2) ** q)
    log_ratio = math.log(two) - math.log(one)
    if log_ratio >= 0.0:
        raise DegenerateEstimate("power-sum ratio is not below 1; alpha_n undefined")
    alpha_raw = q * math.log(2.0) / log_ratio
    rho = float(np.mean(incr > 0))
    alpha = alpha_raw
    capped = False
    if alpha >= 2.0:
        alpha, capped = 2.0 - 1e-9, True
    if alpha > 1.0:
        cap = 1.0 / max(rho, 1.0 - rho)
        if alpha > cap:
            alpha, capped = cap, True
    if alpha > 1.0:
        rho = min(max(rho, 1.0 - 1.0 / alpha), 1.0 / alpha)
    else:
        rho = min(max(rho, _RHO_EDGE), 1.0 - _RHO_EDGE)
    if alpha == 1.0:
        rho = 0.5
    lam = float(np.mean(np.log(n ** (1.0 / alpha) * np.abs(incr))))
    return EstimatedParams(
        "stable", n, alpha=alpha, rho=rho, lam=lam, q=q, alpha_raw=alpha_raw, truncation_applied=capped
    )
