"""Thread-count control shared by rendering and benchmarking."""

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count():
    """Worker cap from ``SFF_THREADS`` (default 1)."""
    raw = os.environ.get("SFF_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def ordered_map(func, items):
    """``list(map(func, items))`` on up to :func:`thread_count` threads.

    Results come back in input order regardless of completion order.
    """
    items = list(items)
    workers = min(thread_count(), max(1, len(items)))
    if workers == 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
