"""
Chunked Evaluation

Splits an array of evaluation points into contiguous blocks and evaluates
them on a thread pool. Results are written back by block index, so the
output does not depend on the order in which blocks finish.
"""

from __future__ import annotations

import concurrent.futures as cf
import logging
from typing import Callable, Optional

import numpy as np

from .config import get_settings

logger = logging.getLogger(__name__)

MIN_CHUNK = 64


def map_chunks(
    func: Callable[[np.ndarray], np.ndarray],
    points: np.ndarray,
    dtype=float,
    chunk: Optional[int] = None,
    threads: Optional[int] = None,
) -> np.ndarray:
    """Evaluate ``func`` on ``points`` block by block.

    ``func`` receives a 1D slice of ``points`` and must return an array of the
    same length. ``chunk`` caps the block length (memory bound); the number
    of worker threads is capped by ``Settings.threads``.
    """
    points = np.asarray(points, dtype=float)
    n = points.shape[0]
    out = np.empty(n, dtype=dtype)
    if n == 0:
        return out
    n_threads = max(1, threads if threads is not None else get_settings().threads)
    chunk = n if chunk is None else max(1, int(chunk))
    n_blk = max(1, -(-n // chunk))
    if n_threads > 1 and n >= 2 * MIN_CHUNK:
        n_blk = max(n_blk, min(n_threads * 4, n // MIN_CHUNK))
    bounds = np.linspace(0, n, n_blk + 1).astype(int)

    def _run(blk_idx: int) -> None:
        lo, hi = bounds[blk_idx], bounds[blk_idx + 1]
        out[lo:hi] = func(points[lo:hi])

    if n_threads == 1 or n_blk == 1:
        for blk_idx in range(n_blk):
            _run(blk_idx)
        return out

    logger.debug(f"Evaluating {n} points in {n_blk} blocks on {n_threads} threads")
    with cf.ThreadPoolExecutor(max_workers=n_threads) as executor:
        fs = [executor.submit(_run, blk_idx) for blk_idx in range(n_blk)]
        cf.wait(fs)
    for fut in fs:
        fut.result()
    return out


def chunk_for(columns: int, budget: int = 4_000_000) -> int:
    """Rows per block so that a rows x columns work array stays under ``budget`` entries."""
    return max(1, budget // max(1, columns))
