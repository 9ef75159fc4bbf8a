"""Summary statistics of error samples."""

from __future__ import annotations

import math

import numpy as np
from scipy.stats import gaussian_kde

from ..errors import TooFewSamples

__all__ = ["shortest_ci", "silverman_bandwidth", "kde", "summarize"]


def shortest_ci(samples, level: float = 0.95) -> float:
    """Length of the shortest window holding ``ceil(level N)`` sorted samples."""
    if not (0.0 < level < 1.0):
        raise ValueError("level must lie in (0, 1)")
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    n = x.size
    # at least one sample must be allowed to fall outside the interval
    if n * (1.0 - level) < 1.0:
        raise TooFewSamples(f"{n} samples are too few for a {level:.0%} interval")
    k = int(math.ceil(level * n - 1e-9))
    return float(np.min(x[k - 1 :] - x[: n - k + 1]))


def silverman_bandwidth(samples) -> float:
    x = np.asarray(samples, dtype=float).ravel()
    return 1.06 * float(np.std(x, ddof=1)) * x.size ** (-0.2)


def kde(samples, grid):
    """Gaussian kernel density estimate with bandwidth ``1.06 s N**(-1/5)``.

    Returns ``(density, bandwidth)``. A sample without spread is smoothed
    with a unit-free bandwidth of 1e-12 instead.
    """
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < 2:
        raise TooFewSamples("kde needs at least two samples")
    grid = np.asarray(grid, dtype=float)
    h = silverman_bandwidth(x)
    if h > 0.0:
        dens = gaussian_kde(x, bw_method=1.06 * x.size ** (-0.2))(grid.ravel())
        return dens.reshape(grid.shape), h
    h = 1e-12
    d = (grid.ravel()[:, None] - x[None, :]) / h
    dens = np.exp(-0.5 * d * d).mean(axis=1) / (h * math.sqrt(2.0 * math.pi))
    return dens.reshape(grid.shape), h


def summarize(errors) -> dict:
    """RMSE, MAE, shortest 95% interval, mean and (population) variance."""
    e = np.asarray(errors, dtype=float).ravel()
    mean = float(np.mean(e))
    var = float(np.mean((e - mean) ** 2))
    return {
        "rmse": float(np.sqrt(np.mean(e * e))),
        "mae": float(np.mean(np.abs(e))),
        "ci95_length": shortest_ci(e, 0.95),
        "mean_error": mean,
        "variance": var,
        "count": int(e.size),
    }
