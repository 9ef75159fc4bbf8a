"""Conditional law of the bridge supremum, F(x, y) = P(sup_{[0,1]} X <= x | X_1 = y).

Brownian motion has a closed form. For spectrally one-sided stable processes
F is a one-dimensional integral over the first-passage time of level ``x``,
expressed through the density of ``X_1``; it is evaluated in log space with a
tanh-sinh rule, which handles the endpoint singularities of the integrand.
"""

from __future__ import annotations

import csv
import math

import numpy as np
from scipy.special import logsumexp

from .errors import UnsupportedModel
from .models import BrownianMotion, ModelSpec, StableModel
from .quadrature import tanh_sinh_rule
from .stable_law import StableParams, density_table

__all__ = [
    "F_bm",
    "Fbar_bm",
    "F_stable_onesided",
    "Fbar_stable_onesided",
    "CondLaw",
    "cond_law",
    "tail_bound",
    "dual_F",
    "write_F_grid",
]

# Quadrature level of the one-sided integral (461 nodes); level 6 and 7
# agree to better than 1e-9 over the lattice used in the tests.
ONESIDED_LEVEL = 6

# Constant of the exponential tail bound for one-sided stable laws, scale 1.
# Twice the largest ratio (1 - F) / exp(-(x - y+)) observed on the lattice
# x - y+ in [0.05, 12], y in [-30, 12] for alpha in {1.2, ..., 1.9}, beta = -1, +1
# (the largest ratio, about 2.24, occurs at alpha = 1.2).
STABLE_TAIL_CONST = 2.0 * 2.25


def Fbar_bm(sigma: float, x, y) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    inside = x > np.maximum(y, 0.0)
    with np.errstate(over="ignore"):
        val = np.exp(-2.0 * x * (x - y) / (sigma * sigma))
    return np.where(inside, val, 1.0)


def F_bm(sigma: float, x, y) -> np.ndarray:
    """``1 - exp(-2 x (x - y) / sigma**2)`` for ``x > max(y, 0)``, else 0."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    inside = x > np.maximum(y, 0.0)
    with np.errstate(over="ignore"):
        val = -np.expm1(-2.0 * x * (x - y) / (sigma * sigma))
    return np.where(inside, val, 0.0)


def _log_bm(sigma, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    inside = x > np.maximum(y, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        e = -2.0 * x * (x - y) / (sigma * sigma)
        val = np.where(e > -math.log(2.0), np.log(-np.expm1(e)), np.log1p(-np.exp(e)))
    return np.where(inside, val, -np.inf)


def _log_fbar_onesided(params: StableParams, x: np.ndarray, y: np.ndarray, level: int) -> np.ndarray:
    """log(1 - F) for ``x > max(y, 0)`` (flat arrays)."""
    tab = density_table(params)
    rule = tanh_sinh_rule(level)
    a = params.alpha
    inv = 1.0 / a
    log_t = np.log(rule.left)
    log_1t = np.log(rule.right)
    logw = np.log(rule.weights)
    out = np.empty(x.shape)
    chunk = max(1, 200_000 // rule.weights.size)
    for s in range(0, x.size, chunk):
        xs = x[s : s + chunk, None]
        ys = y[s : s + chunk, None]
        base = logw - inv * log_1t - (inv + 1.0) * log_t
        if params.beta == -1.0:
            # first passage at time t, then the remaining (1 - t) carries y - x
            lf1 = tab.logpdf(xs * np.exp(-inv * log_t))
            lf2 = tab.logpdf((ys - xs) * np.exp(-inv * log_1t))
            pre = np.log(xs[:, 0])
        else:
            lf1 = tab.logpdf(xs * np.exp(-inv * log_1t))
            lf2 = tab.logpdf((ys - xs) * np.exp(-inv * log_t))
            pre = np.log(xs[:, 0] - ys[:, 0])
        terms = base + lf1 + lf2
        val = logsumexp(terms, axis=-1)
        out[s : s + chunk] = pre - tab.logpdf(ys[:, 0]) + val
    return np.minimum(out, 0.0)


def Fbar_stable_onesided(params: StableParams, x, y, level: int = ONESIDED_LEVEL) -> np.ndarray:
    """``1 - F(x, y)`` for a spectrally one-sided stable law (1 outside the domain)."""
    if params.one_sided == 0:
        raise UnsupportedModel("F is only available for beta = -1 or +1")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x, y = np.broadcast_arrays(x, y)
    out = np.ones(x.shape)
    inside = x > np.maximum(y, 0.0)
    if inside.any():
        fin = inside & np.isfinite(x)
        out[fin] = np.exp(_log_fbar_onesided(params, x[fin], y[fin], level))
        out[inside & ~np.isfinite(x)] = 0.0
    return out


def F_stable_onesided(params: StableParams, x, y, level: int = ONESIDED_LEVEL) -> np.ndarray:
    """F(x, y) for ``beta = -1`` or ``beta = +1``, clamped to [0, 1]; 0 for ``x <= max(y, 0)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    fbar = Fbar_stable_onesided(params, x, y, level)
    return np.clip(1.0 - fbar, 0.0, 1.0)


class CondLaw:
    """F and its logarithm for a fixed model."""

    def __init__(self, model: ModelSpec, level: int = ONESIDED_LEVEL):
        if isinstance(model, StableModel) and model.params.one_sided == 0:
            raise UnsupportedModel(
                "conditional supremum law is implemented for Brownian motion and "
                "spectrally one-sided stable processes only"
            )
        self.model = model
        self.level = level

    def Fbar(self, x, y) -> np.ndarray:
        m = self.model
        if isinstance(m, BrownianMotion):
            return Fbar_bm(m.sigma, x, y)
        return Fbar_stable_onesided(m.params, x, y, self.level)

    def F(self, x, y) -> np.ndarray:
        m = self.model
        if isinstance(m, BrownianMotion):
            return F_bm(m.sigma, x, y)
        return F_stable_onesided(m.params, x, y, self.level)

    def log_F(self, x, y) -> np.ndarray:
        """log F, accurate when F is close to 1; -inf off the domain."""
        m = self.model
        if isinstance(m, BrownianMotion):
            return _log_bm(m.sigma, x, y)
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        fbar = self.Fbar(x, y)
        with np.errstate(divide="ignore"):
            return np.log1p(-np.minimum(fbar, 1.0))

    def tail_bound(self, x, y) -> np.ndarray:
        return tail_bound(self.model, x, y)

    def dual(self) -> "CondLaw":
        return CondLaw(self.model.dual(), self.level)


def cond_law(model: ModelSpec, level: int = ONESIDED_LEVEL) -> CondLaw:
    return CondLaw(model, level)


def tail_bound(model, x, y) -> np.ndarray:
    """Upper bound ``c exp(-(x - y+) / s)`` on ``1 - F(x, y)``.

    ``s`` is the scale (``sigma`` for Brownian motion), under which the bound
    is scale invariant. For Brownian motion ``c = exp(1/8)``, exact from
    ``2 d**2 - d >= -1/8``.
    """
    if isinstance(model, StableParams):
        model = StableModel(model)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if isinstance(model, BrownianMotion):
        c, s = math.exp(0.125), model.sigma
    else:
        if model.params.one_sided == 0:
            raise UnsupportedModel("tail bound is implemented for one-sided stable laws only")
        c, s = STABLE_TAIL_CONST, model.params.scale
    d = np.maximum(x - np.maximum(y, 0.0), 0.0)
    return c * np.exp(-d / s)


def dual_F(model, x, y) -> np.ndarray:
    """Conditional supremum law of ``-X``, through ``F'(x, y) = F(x - y, -y)``."""
    if isinstance(model, StableParams):
        model = StableModel(model)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return CondLaw(model).F(x - y, -y)


def write_F_grid(law: CondLaw, xs, ys, path) -> None:
    """CSV with columns x, y, F over the rectangular grid ``xs x ys``."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    vals = law.F(X, Y)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "y", "F"])
        for xi, yi, fi in zip(X.ravel(), Y.ravel(), vals.ravel()):
            w.writerow([repr(float(xi)), repr(float(yi)), repr(float(fi))])
