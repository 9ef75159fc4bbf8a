"""Conditional-mean estimators of Brownian local time and occupation time.

For a standard Brownian motion with ``X_1 = z``, ``g(x, z)`` is the expected
local time at ``x`` over ``[0, 1]`` and ``G(x, z)`` the expected time spent
above ``x``. Both reduce to Mills-ratio expressions
``Phibar(w) / phi(z)``, evaluated through the scaled complementary error
function so that no 0/0 or overflow occurs for large arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfcx, ndtr

from .errors import GridMismatch
from .path_sim import PathSample

__all__ = [
    "kernel_g",
    "kernel_G",
    "alt_kernel",
    "OccLocalEstimate",
    "estimate_local_time",
    "estimate_occupation",
    "estimate_local_time_alt",
    "baseline_local_time",
    "baseline_occupation",
    "asymptotic_constants",
    "V_L2",
    "V_O2",
    "V_ALT2",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_SQRT2 = math.sqrt(2.0)


def _mills(w, z, w2_minus_z2):
    """``Phibar(w) / phi(z)`` given ``w**2 - z**2`` (accurate for large w)."""
    w = np.asarray(w, dtype=float)
    pos = w >= 0
    with np.errstate(over="ignore", invalid="ignore"):
        # Phibar(w) = erfcx(w / sqrt 2) exp(-w^2 / 2) / 2
        big = 0.5 * _SQRT_2PI * erfcx(w / _SQRT2) * np.exp(-0.5 * w2_minus_z2)
        small = _SQRT_2PI * ndtr(-w) * np.exp(0.5 * z * z)
    return np.where(pos, big, small)


def _g_pos(x, z):
    """g for x >= 0."""
    below = z < x
    w = np.where(below, 2.0 * x - z, z)
    d = np.where(below, 4.0 * x * (x - z), 0.0)
    return _mills(w, z, d)


def kernel_g(x, z) -> np.ndarray:
    """Expected local time at ``x`` of a standard Brownian bridge from 0 to ``z``."""
    x, z = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(z, dtype=float))
    neg = x < 0
    xs = np.where(neg, -x, x)
    zs = np.where(neg, -z, z)
    return _g_pos(xs, zs)


def _G_pos(x, z):
    below = z < x
    w = np.where(below, 2.0 * x - z, z)
    d = np.where(below, 4.0 * x * (x - z), 0.0)
    m = _mills(w, z, d)
    with np.errstate(over="ignore", invalid="ignore"):
        lower = 0.5 * np.exp(-2.0 * x * (x - z)) - 0.5 * (2.0 * x - z) * m
    upper = 0.5 + 0.5 * (z - 2.0 * x) * m
    return np.where(below, lower, upper)


def kernel_G(x, z) -> np.ndarray:
    """Expected time above ``x`` of a standard Brownian bridge from 0 to ``z``."""
    x, z = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(z, dtype=float))
    neg = x < 0
    val = _G_pos(np.where(neg, -x, x), np.where(neg, -z, z))
    return np.clip(np.where(neg, 1.0 - val, val), 0.0, 1.0)


def alt_kernel(y) -> np.ndarray:
    """``int (|y + u| - |y|) phi(u) du = 2 phi(y) - 2 |y| Phibar(|y|)``."""
    y = np.abs(np.asarray(y, dtype=float))
    return 2.0 * np.exp(-0.5 * y * y) / _SQRT_2PI - 2.0 * y * ndtr(-y)


@dataclass
class OccLocalEstimate:
    t: float
    x: float
    value: float
    n: int
    sigma_used: float
    method: str = "mean"

    def as_dict(self) -> dict:
        return {
            "t": self.t,
            "x": self.x,
            "value": self.value,
            "n": self.n,
            "sigma_used": self.sigma_used,
            "method": self.method,
        }


def _obs(path) -> np.ndarray:
    if isinstance(path, PathSample):
        return path.observations
    return np.asarray(path, dtype=float)


def _steps(n: int, t: float, strict: bool) -> int:
    if not (0.0 < t <= 1.0):
        raise ValueError("t must lie in (0, 1]")
    nt = n * t
    k = int(round(nt))
    if abs(nt - k) > 1e-9 * max(1.0, nt):
        if strict:
            raise GridMismatch(f"n t = {nt} is not an integer")
        k = int(math.floor(nt))
    return k


def _standardized(obs, sigma, t, x, strict):
    n = obs.size - 1
    k = _steps(n, t, strict)
    s = math.sqrt(n) / sigma
    return n, s * (x - obs[:k]), s * np.diff(obs[: k + 1])


def estimate_local_time(path, sigma: float, t: float = 1.0, x: float = 0.0, strict: bool = True) -> OccLocalEstimate:
    """``(sigma sqrt n)**-1 sum_i g(sqrt n (x - X_{i-1}) / sigma, sqrt n Delta_i / sigma)``."""
    obs = _obs(path)
    n, lev, inc = _standardized(obs, sigma, t, x, strict)
    val = float(np.sum(kernel_g(lev, inc)) / (sigma * math.sqrt(n)))
    return OccLocalEstimate(t, x, val, n, sigma, "mean")


def estimate_occupation(path, sigma: float, t: float = 1.0, x: float = 0.0, strict: bool = True) -> OccLocalEstimate:
    """``(1/n) sum_i G(sqrt n (x - X_{i-1}) / sigma, sqrt n Delta_i / sigma)``."""
    obs = _obs(path)
    n, lev, inc = _standardized(obs, sigma, t, x, strict)
    val = float(np.sum(kernel_G(lev, inc)) / n)
    return OccLocalEstimate(t, x, val, n, sigma, "mean")


def estimate_local_time_alt(path, sigma: float, t: float = 1.0, x: float = 0.0, strict: bool = True) -> OccLocalEstimate:
    """Local-time estimator whose kernel depends on the level only."""
    obs = _obs(path)
    n, lev, _ = _standardized(obs, sigma, t, x, strict)
    val = float(np.sum(alt_kernel(lev)) / (sigma * math.sqrt(n)))
    return OccLocalEstimate(t, x, val, n, sigma, "altkernel")


def baseline_local_time(path, t: float = 1.0, x: float = 0.0, strict: bool = True) -> OccLocalEstimate:
    """``(2 sqrt n)**-1 #{i < n t : |X_{i/n} - x| < 1/sqrt n}``."""
    obs = _obs(path)
    n = obs.size - 1
    k = _steps(n, t, strict)
    r = 1.0 / math.sqrt(n)
    val = float(np.count_nonzero(np.abs(obs[:k] - x) < r) / (2.0 * math.sqrt(n)))
    return OccLocalEstimate(t, x, val, n, float("nan"), "baseline")


def baseline_occupation(path, t: float = 1.0, x: float = 0.0, strict: bool = True) -> OccLocalEstimate:
    """``(1/n) #{i < n t : X_{i/n} >= x}``."""
    obs = _obs(path)
    n = obs.size - 1
    k = _steps(n, t, strict)
    val = float(np.count_nonzero(obs[:k] >= x) / n)
    return OccLocalEstimate(t, x, val, n, float("nan"), "baseline")


_LOG1P_SQRT2 = math.log(1.0 + math.sqrt(2.0))
_SQRT_PI = math.sqrt(math.pi)

V_L2 = 2.0 * (3.0 * _LOG1P_SQRT2 - math.sqrt(2.0)) / (3.0 * _SQRT_PI)
V_O2 = (13.0 * math.sqrt(2.0) - 15.0 * _LOG1P_SQRT2) / (45.0 * _SQRT_PI)
V_ALT2 = 8.0 * (math.sqrt(2.0) - 1.0) / (3.0 * _SQRT_PI)


def asymptotic_constants():
    """``(v_l^2, v_o^2, v_alt^2)`` of the local-time, occupation and level-only kernels."""
    return V_L2, V_O2, V_ALT2
