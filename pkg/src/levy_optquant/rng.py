"""Hierarchical seeding: experiment seed -> replicate stream -> draws.

Every replicate gets its own PCG64 stream derived from the experiment seed
and the replicate index, so results do not depend on batching, worker count
or scheduling order.
"""

from __future__ import annotations

from typing import Union

import numpy as np

SeedLike = Union[None, int, np.random.SeedSequence, np.random.Generator]


def as_generator(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.default_rng(seed)


def _root(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, np.random.Generator):
        raise TypeError("replicate streams need an int or SeedSequence seed")
    return np.random.SeedSequence(seed)


def replicate_seed(seed, index: int, *tags: int) -> np.random.SeedSequence:
    """Seed sequence of replicate ``index`` (optionally a tagged sub-stream)."""
    root = _root(seed)
    key = tuple(root.spawn_key) + (int(index),) + tuple(int(t) for t in tags)
    return np.random.SeedSequence(root.entropy, spawn_key=key)


def replicate_rng(seed, index: int, *tags: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(replicate_seed(seed, index, *tags)))
