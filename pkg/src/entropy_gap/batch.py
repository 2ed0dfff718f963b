"""Seed derivation and order-preserving parallel evaluation for Monte-Carlo runs."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "ENTROPY_GAP_THREADS"


def derive_seed(seed: int, index: int) -> int:
    """Per-sample seed ``seed XOR index``; independent of scheduling."""
    return (int(seed) ^ int(index)) & 0xFFFFFFFFFFFFFFFF


def sample_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, index))


def worker_count(requested: int | None = None) -> int:
    """Requested worker count, capped by ``ENTROPY_GAP_THREADS`` when set."""
    n = requested if requested is not None else 1
    cap = os.environ.get(THREADS_ENV)
    if cap:
        n = min(n, int(cap)) if requested is not None else int(cap)
    return max(1, n)


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """``[fn(x) for x in items]``, optionally on a thread pool; order is preserved."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
