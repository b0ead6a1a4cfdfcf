"""Deterministic chunked execution of seeded trial loops.

Trials are split into fixed-size chunks and each chunk gets its own child
seed from ``SeedSequence(master).spawn``, so results do not depend on the
number of workers or on scheduling order.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

import numpy as np

T = TypeVar("T")

CHUNK = 256


def worker_count() -> int:
    env = os.environ.get("MINKPLANE_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def run_chunks(
    fn: Callable[[int, int, np.random.Generator], T],
    total: int,
    seed: int,
    chunk: int = CHUNK,
) -> list[T]:
    """Call ``fn(start, stop, rng)`` on consecutive chunks of ``range(total)``."""
    bounds = [(s, min(s + chunk, total)) for s in range(0, total, chunk)]
    seqs = np.random.SeedSequence(seed).spawn(len(bounds))
    jobs = [(a, b, np.random.default_rng(ss)) for (a, b), ss in zip(bounds, seqs)]
    workers = min(worker_count(), len(jobs))
    if workers <= 1:
        return [fn(*j) for j in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda j: fn(*j), jobs))
