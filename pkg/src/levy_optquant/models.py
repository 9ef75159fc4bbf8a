"""Model specifications: linear Brownian motion and strictly stable processes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from scipy.special import zeta

from .errors import MeanUndefined
from .stable_law import StableParams, params_from_skew, params_from_triplet, positive_part_mean


@dataclass(frozen=True)
class BrownianMotion:
    """``X_t = mu t + sigma W_t``."""

    mu: float = 0.0
    sigma: float = 1.0

    kind = "bm"

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")

    @property
    def alpha_effective(self) -> float:
        return 2.0

    @property
    def symmetric(self) -> bool:
        return True

    def dual(self) -> "BrownianMotion":
        """Model of ``-X``."""
        return BrownianMotion(-self.mu, self.sigma)

    def positive_part_mean(self) -> float:
        return self.sigma / math.sqrt(2.0 * math.pi)

    def as_dict(self) -> dict:
        return {"kind": "bm", "mu": self.mu, "sigma": self.sigma}


@dataclass(frozen=True)
class StableModel:
    """Strictly stable Levy process with ``X_1`` distributed as ``params``."""

    params: StableParams

    kind = "stable"

    @property
    def alpha_effective(self) -> float:
        return self.params.alpha

    @property
    def symmetric(self) -> bool:
        return self.params.beta == 0.0

    def dual(self) -> "StableModel":
        return StableModel(self.params.flipped())

    def positive_part_mean(self) -> float:
        return positive_part_mean(self.params)

    def as_dict(self) -> dict:
        d = {"kind": "stable"}
        d.update(self.params.as_dict())
        return d


ModelSpec = Union[BrownianMotion, StableModel]


def expected_V(model: ModelSpec) -> float:
    """Mean of the limit ``V`` of ``n**(1/alpha) (sup X - M_n)``.

    By Spitzer's identity ``E M_n = sum_k E[X_{k/n}^+] / k``; with
    self-similarity the rescaled gap converges to
    ``-zeta(1 - 1/alpha) E[X_1^+]``.
    """
    a = model.alpha_effective
    if a <= 1.0:
        raise MeanUndefined("E V is infinite for alpha <= 1")
    return -float(zeta(1.0 - 1.0 / a)) * model.positive_part_mean()


def expected_gap(model: ModelSpec, n: int) -> float:
    """Exact ``E[n**(1/alpha) (sup_{[0,1]} X - M_n)]`` for a driftless model."""
    a = model.alpha_effective
    if a <= 1.0:
        raise MeanUndefined("E sup X is infinite for alpha <= 1")
    k = range(1, n + 1)
    partial = math.fsum(i ** (1.0 / a - 1.0) for i in k)
    return model.positive_part_mean() * (a * n ** (1.0 / a) - partial)


def model_from_dict(d: dict) -> ModelSpec:
    """Parse ``{"kind": "bm", "mu", "sigma"}`` or a stable description.

    Stable models accept either ``alpha, rho, lambda`` or ``alpha, beta[, scale]``.
    """
    kind = d.get("kind", "bm")
    if kind == "bm":
        return BrownianMotion(float(d.get("mu", 0.0)), float(d.get("sigma", 1.0)))
    if kind == "stable":
        if "rho" in d:
            return StableModel(params_from_triplet(d["alpha"], d["rho"], d.get("lambda", d.get("lam"))))
        return StableModel(params_from_skew(d["alpha"], d.get("beta", 0.0), d.get("scale", 1.0)))
    raise ValueError(f"unknown model kind {kind!r}")
