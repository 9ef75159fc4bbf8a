"""Replicate loop over a process pool with ordered reduction."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence


def _run_chunk(args):
    fn, indices = args
    return [fn(i) for i in indices]


def run_replicates(fn: Callable[[int], object], count: int, workers: int = 1, chunk: int = 0) -> List:
    """``[fn(0), ..., fn(count - 1)]``, evaluated on ``workers`` processes.

    ``fn`` must be picklable (a module-level function or a ``functools.partial``
    of one) and derive all randomness from its replicate index; the result
    order is the index order whatever the scheduling.
    """
    if count < 1:
        raise ValueError("need at least one replicate")
    workers = max(1, int(workers or 1))
    if workers == 1 or count == 1:
        return [fn(i) for i in range(count)]
    chunk = chunk or max(1, count // (8 * workers))
    blocks: Sequence = [range(s, min(s + chunk, count)) for s in range(0, count, chunk)]
    out: List = []
    with ProcessPoolExecutor(max_workers=workers) as ex:
        for part in ex.map(_run_chunk, [(fn, b) for b in blocks]):
            out.extend(part)
    return out
