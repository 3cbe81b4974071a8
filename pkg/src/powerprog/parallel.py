"""Order-preserving process pool helpers.

Everything farmed out here is a pure function of its argument, so the
parallel result must be byte-identical to the serial one; only wall time
may differ.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

_T = TypeVar("_T")
_R = TypeVar("_R")

WORKERS_ENV = "POWERPROG_WORKERS"


def resolve_workers(workers: int | None = None) -> int:
    """Worker count: explicit argument, else POWERPROG_WORKERS, else 1."""
    if workers is None:
        raw = os.environ.get(WORKERS_ENV, "").strip()
        if not raw:
            return 1
        try:
            workers = int(raw)
        except ValueError:
            raise ValueError(
                f"{WORKERS_ENV} must be an integer, got {raw!r}"
            ) from None
    if workers < 1:
        raise ValueError("worker count must be a positive integer")
    return workers


def pmap(
    fn: Callable[[_T], _R],
    items: Iterable[_T],
    workers: int | None = None,
) -> list[_R]:
    """Map ``fn`` over ``items``, preserving input order.

    With one worker (the default) this is a plain loop; otherwise the
    items are spread over a process pool.  ``fn`` and the items must be
    picklable in the multi-worker case.
    """
    count = resolve_workers(workers)
    seq = list(items)
    if count == 1 or len(seq) <= 1:
        return [fn(item) for item in seq]
    chunk = max(1, len(seq) // (count * 4))
    with ProcessPoolExecutor(max_workers=count) as pool:
        return list(pool.map(fn, seq, chunksize=chunk))
