"""Worker-count plumbing shared by the Monte Carlo oracles and the CLI.

One environment variable and one CLI flag control the pool size; the flag
wins.  Work is split into deterministic blocks whose seeds come from
spawned seed sequences, so results are identical no matter how blocks are
scheduled (threads, serial, any order).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_VAR = "WICKPDE_THREADS"


def resolve_workers(flag: int | None = None) -> int:
    """Worker count: CLI flag beats the environment variable beats 1."""
    if flag is not None:
        if flag < 1:
            raise ValueError(f"worker count must be >= 1, got {flag}")
        return int(flag)
    env = os.environ.get(ENV_VAR)
    if env:
        n = int(env)
        if n < 1:
            raise ValueError(f"{ENV_VAR} must be >= 1, got {env}")
        return n
    return 1


def map_blocks(fn, items, workers: int = 1) -> list:
    """Ordered map over independent work items, optionally threaded."""
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
