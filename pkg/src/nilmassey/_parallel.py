"""Worker pool capped by NILMASSEY_THREADS (default 1).

Results always come back in input order, so reports are identical whatever
the worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from .errors import ConfigError


def worker_count() -> int:
    raw = os.environ.get("NILMASSEY_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"NILMASSEY_THREADS={raw!r} is not an integer") from exc
    return max(1, n)


def pmap(fn, items):
    items = list(items)
    n = worker_count()
    if n == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
