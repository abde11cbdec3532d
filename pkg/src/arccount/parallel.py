"""Deterministic work distribution for batch trials and census subtrees.

Results are always reduced in submission order, so any output built from
them is identical whether the pool has one worker or many.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
U = TypeVar("U")


def resolve_threads(threads: int | None) -> int:
    """Explicit value wins; else the ARC_THREADS environment override; else 1."""
    if threads is None:
        env = os.environ.get("ARC_THREADS", "").strip()
        threads = int(env) if env else 1
    if threads < 1:
        raise ValueError(f"thread count must be positive, got {threads}")
    return threads


def map_ordered(fn: Callable[[T], U], items: Iterable[T], threads: int) -> list[U]:
    """Map fn over items, preserving order; fork a process pool if threads > 1.

    fn must be picklable (module level) when threads > 1.
    """
    work: Sequence[T] = list(items)
    if threads <= 1 or len(work) <= 1:
        return [fn(x) for x in work]
    chunk = max(1, len(work) // (threads * 4))
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, work, chunksize=chunk))
