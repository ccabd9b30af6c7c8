"""
FrozenTime - Batch Runs

Independent scenarios in a thread pool. Each scenario is simulated
sequentially; results come back in input order.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from ..config import settings
from .engine import simulate

logger = logging.getLogger(__name__)

S = TypeVar("S")
T = TypeVar("T")


def run_batch(
    scenarios: Sequence[S],
    job: Callable[[S], T] = simulate,
    threads: Optional[int] = None
) -> List[T]:
    """
    Run `job` on every scenario.

    Args:
        scenarios: Scenarios (or anything `job` accepts, such as file paths)
        job: Callable applied to each item (default: simulate)
        threads: Worker cap (default: FROZEN_TIME_THREADS)

    Returns:
        One result per item, in input order
    """
    threads = max(1, settings.threads if threads is None else threads)
    workers = min(threads, len(scenarios))
    if workers <= 1:
        return [job(s) for s in scenarios]

    logger.info(f"Running {len(scenarios)} scenarios on {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(job, scenarios))
