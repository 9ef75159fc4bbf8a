"""Equidistant observations of Brownian motion and strictly stable processes.

Seeding: a path seed (int or SeedSequence) is split into the sub-stream 0
for the coarse increments and the sub-stream 1 for the Brownian refinement,
so that the coarse observations of a fine-grid proxy path coincide bitwise
with a direct coarse simulation under the same seed.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import GridMismatch
from .models import BrownianMotion, ModelSpec, StableModel, expected_V
from .rng import SeedLike, replicate_seed
from .stable_law import sample_unit

__all__ = [
    "BrownianMotion",
    "StableModel",
    "PathSample",
    "simulate_path",
    "simulate_sup_proxy",
    "subsample",
    "write_path_csv",
    "read_path_csv",
]


@dataclass
class PathSample:
    """Observations ``X_{i/n}``, ``i = 0..n``."""

    n: int
    observations: np.ndarray
    model: Optional[ModelSpec] = None
    seed: object = None
    fine_sup: Optional[float] = None
    fine_m: Optional[int] = None
    fine_path: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        self.observations = np.asarray(self.observations, dtype=float)
        if self.observations.shape != (self.n + 1,):
            raise ValueError(f"expected {self.n + 1} observations, got {self.observations.shape}")

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.observations)


def _streams(seed: SeedLike):
    if isinstance(seed, np.random.Generator):
        return seed, seed
    return (
        np.random.Generator(np.random.PCG64(replicate_seed(seed, 0))),
        np.random.Generator(np.random.PCG64(replicate_seed(seed, 1))),
    )


def _increments(model: ModelSpec, count: int, dt: float, rng: np.random.Generator) -> np.ndarray:
    if isinstance(model, BrownianMotion):
        return model.mu * dt + model.sigma * math.sqrt(dt) * rng.standard_normal(count)
    p = model.params
    return p.scale * dt ** (1.0 / p.alpha) * sample_unit(p.alpha, p.beta, count, rng)


def _cumulate(incr: np.ndarray) -> np.ndarray:
    out = np.empty(incr.size + 1)
    out[0] = 0.0
    np.cumsum(incr, out=out[1:])
    return out


def simulate_path(model: ModelSpec, n: int, seed: SeedLike = None) -> PathSample:
    """Observations on the grid ``i/n`` with i.i.d. increments ``X_{1/n}``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    coarse_rng, _ = _streams(seed)
    obs = _cumulate(_increments(model, n, 1.0 / n, coarse_rng))
    return PathSample(n, obs, model, seed)


def simulate_sup_proxy(
    model: ModelSpec, n: int, m: int, seed: SeedLike = None, keep_fine: bool = False
) -> PathSample:
    """Coarse observations plus a bias-corrected fine-grid supremum.

    The path is simulated on the grid with step ``1/m`` (``m`` a multiple
    of ``n``) and ``fine_sup = max + m**(-1/alpha) E[V]``.

    Brownian paths are built from the coarse skeleton by Brownian-bridge
    refinement, so the coarse observations equal those of
    ``simulate_path(model, n, seed)``. Stable paths are aggregated from the
    fine increments.
    """
    if n < 1 or m < n:
        raise GridMismatch("need m >= n >= 1")
    if m % n:
        raise GridMismatch(f"m={m} is not a multiple of n={n}")
    r = m // n
    coarse_rng, fine_rng = _streams(seed)
    if isinstance(model, BrownianMotion):
        coarse = _increments(model, n, 1.0 / n, coarse_rng)
        obs = _cumulate(coarse)
        if r > 1:
            z = model.sigma * math.sqrt(1.0 / m) * fine_rng.standard_normal((n, r))
            s = np.cumsum(z, axis=1)
            frac = np.arange(1, r + 1) / r
            bridge = s - frac * s[:, -1:] + frac * coarse[:, None]
            fine = np.empty(m + 1)
            fine[0] = 0.0
            fine[1:] = (obs[:-1, None] + bridge).reshape(-1)
            fine[r::r] = obs[1:]
        else:
            fine = obs
    else:
        fine = _cumulate(_increments(model, m, 1.0 / m, coarse_rng))
        obs = fine[::r].copy()
    a = model.alpha_effective
    correction = m ** (-1.0 / a) * expected_V(model) if a > 1.0 else 0.0
    sup = float(fine.max()) + correction
    return PathSample(n, obs, model, seed, fine_sup=sup, fine_m=m, fine_path=fine if keep_fine else None)


def subsample(path: PathSample, n: int) -> PathSample:
    """Observations of ``path`` on the coarser grid ``i/n``."""
    if path.n % n:
        raise GridMismatch(f"n={n} does not divide {path.n}")
    r = path.n // n
    return PathSample(n, path.observations[::r].copy(), path.model, path.seed)


def write_path_csv(path: PathSample, file) -> None:
    with open(file, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["i", "x"])
        for i, x in enumerate(path.observations):
            w.writerow([i, repr(float(x))])


def read_path_csv(file) -> PathSample:
    """Read a CSV with columns ``i, x`` (header required, ``i = 0..n``)."""
    with open(file, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows or "x" not in rows[0]:
        raise ValueError("path CSV needs columns i, x")
    idx = np.array([int(r["i"]) for r in rows])
    obs = np.array([float(r["x"]) for r in rows])
    order = np.argsort(idx, kind="stable")
    idx, obs = idx[order], obs[order]
    if not np.array_equal(idx, np.arange(idx.size)):
        raise ValueError("indices must run over 0..n without gaps")
    return PathSample(idx.size - 1, obs)
