"""Thread budget for the compiled kernels."""

import logging
import os
from typing import Optional

import numba

from kicked_harper.constants import THREADS_ENV

logger = logging.getLogger(__name__)


def resolve_threads(threads: Optional[int] = None) -> int:
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        if env:
            try:
                threads = int(env)
            except ValueError:
                logger.warning("ignoring non-integer %s=%r", THREADS_ENV, env)
    if threads is None:
        threads = os.cpu_count() or 1
    return max(1, threads)


def use_threads(threads: Optional[int] = None) -> int:
    """Cap numba's worker pool for the next parallel kernel call."""
    n = min(resolve_threads(threads), numba.config.NUMBA_NUM_THREADS)
    numba.set_num_threads(n)
    logger.debug("numba threads: %d", n)
    return n
