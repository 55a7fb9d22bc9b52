"""Deterministic worker-pool helper.

The expensive oracles (membership columns, eigensolver sweeps) are
embarrassingly parallel; `parallel_map` fans them out over a thread pool
while preserving input order, so results are independent of scheduling.
The worker count comes from the ``DEGEN_THREADS`` environment variable
(default 1, i.e. fully serial).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
U = TypeVar("U")


def worker_count() -> int:
    raw = os.environ.get("DEGEN_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def parallel_map(fn: Callable[[T], U], items: Sequence[T] | Iterable[T]) -> list[U]:
    items = list(items)
    n = worker_count()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))
