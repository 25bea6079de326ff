"""Partitioned work distribution.

Work is split into consecutive ranges whose partial results are merged in
range order by the caller, so the outcome never depends on the worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor


def split_range(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    """Split ``[lo, hi)`` into at most ``parts`` consecutive non-empty ranges."""
    parts = max(1, min(parts, hi - lo)) if hi > lo else 1
    step, extra = divmod(hi - lo, parts)
    out, start = [], lo
    for i in range(parts):
        end = start + step + (1 if i < extra else 0)
        out.append((start, end))
        start = end
    return out


def pmap(fn, tasks, workers: int = 1) -> list:
    """``[fn(t) for t in tasks]``, optionally on a process pool; order preserved."""
    tasks = list(tasks)
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(fn, tasks))
