from app.core.config import settings

from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from typing import Callable, Iterable, List, Optional, TypeVar

T = TypeVar("T")
R = TypeVar("R")

_pool: Optional[ThreadPoolExecutor] = None


def get_pool(max_workers: Optional[int] = None) -> ThreadPoolExecutor:
    """Lazily initialize and return the global slice worker pool."""
    global _pool
    if _pool is None:
        size = max_workers or settings.workers
        if size < 1:
            raise ValueError("workers must be positive")
        _pool = ThreadPoolExecutor(max_workers=size, thread_name_prefix="slice")
    return _pool


def shutdown_pool() -> None:
    global _pool
    if _pool is not None:
        _pool.shutdown(wait=True)
        _pool = None


@contextmanager
def worker_pool():
    """Context manager that yields the shared pool and tears it down on exit.

    Usage:
        with worker_pool() as pool:
            list(pool.map(fn, slices))
    """
    pool = get_pool()
    try:
        yield pool
    finally:
        shutdown_pool()


def map_slices(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """Evaluate independent slices, keeping input order in the result."""
    items = list(items)
    if settings.workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    return list(get_pool().map(fn, items))
