"""Order-preserving parallel map over picklable grid cells."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Optional, Sequence


def resolve_jobs(jobs: Optional[int] = None) -> int:
    if jobs is None:
        env = os.environ.get("HLCY_JOBS", "").strip()
        jobs = int(env) if env else 1
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    return jobs


def parallel_map(fn: Callable, items: Sequence, jobs: Optional[int] = None) -> List:
    """[fn(x) for x in items], possibly across processes; result order is the input order."""
    jobs = resolve_jobs(jobs)
    items = list(items)
    if jobs == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as ex:
        return list(ex.map(fn, items, chunksize=1))
