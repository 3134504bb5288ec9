"""Deterministic fan-out over independent work items."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor


def parallel_map(fn, items, threads: int = 1) -> list:
    """Apply ``fn`` to each item, preserving input order in the result.

    With threads <= 1 this is a plain loop.  Workers share nothing; output is
    identical for any thread count.
    """
    items = list(items)
    if threads is None or threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
