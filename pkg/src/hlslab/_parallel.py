"""Worker-count plumbing (``HLSLAB_THREADS``)."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count() -> int:
    """Number of worker threads, from ``HLSLAB_THREADS`` (default 1)."""
    raw = os.environ.get("HLSLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def ordered_map(fn, items):
    """``list(map(fn, items))`` on up to :func:`worker_count` threads.

    Results come back in input order, so any reduction done afterwards is
    independent of the number of workers.
    """
    items = list(items)
    k = worker_count()
    if k == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=k) as pool:
        return list(pool.map(fn, items))
