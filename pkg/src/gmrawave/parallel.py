"""Deterministic parallel map over evaluation points.

The worker count comes from the ``GMRA_THREADS`` environment variable
(default 1, i.e. serial).  Results are always returned in input order.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    try:
        n = int(os.environ.get("GMRA_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


def pmap(fn, items, chunk: int = 256) -> list:
    items = list(items)
    n = thread_count()
    if n == 1 or len(items) < 2 * chunk:
        return [fn(x) for x in items]
    blocks = [items[i:i + chunk] for i in range(0, len(items), chunk)]
    with ThreadPoolExecutor(max_workers=n) as ex:
        parts = list(ex.map(lambda b: [fn(x) for x in b], blocks))
    return [y for part in parts for y in part]
