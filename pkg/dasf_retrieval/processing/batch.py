"""Ordered worker pool for per-leaf, per-direction and per-file work."""

import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Generic, List, Optional, Sequence, TypeVar

from ..errors import ConfigurationError, DasfError, NumericalError

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


@dataclass
class BatchStats:
    """Counters for one batch run."""
    submitted: int = 0
    succeeded: int = 0
    failed: int = 0
    errors: List[str] = field(default_factory=list)
    start_time: float = 0.0
    end_time: float = 0.0

    @property
    def duration(self) -> float:
        if self.start_time == 0:
            return 0.0
        return (self.end_time or time.time()) - self.start_time


@dataclass
class BatchResult(Generic[R]):
    """Outcome of one item: a value or the error that stopped it."""
    index: int
    value: Optional[R] = None
    error: Optional[DasfError] = None

    @property
    def ok(self) -> bool:
        return self.error is None


class BatchProcessor:
    """
    Runs a function over many items on a thread pool.

    Results come back in input order. DasfError is caught per item, and
    library ArithmeticError or ValueError is recorded as NumericalError;
    the output never depends on the worker count.
    """

    def __init__(self, threads: Optional[int] = None, label: str = "batch"):
        if threads is not None and threads < 1:
            raise ConfigurationError(f"threads must be >= 1, got {threads}")
        self.threads = threads or os.cpu_count() or 1
        self.label = label
        self._stats = BatchStats()

    @property
    def stats(self) -> BatchStats:
        return self._stats

    def _run_one(self, fn: Callable[[T], R], index: int, item: T) -> BatchResult[R]:
        try:
            return BatchResult(index=index, value=fn(item))
        except DasfError as exc:
            return BatchResult(index=index, error=exc)
        except (ArithmeticError, ValueError) as exc:
            # numpy/scipy failures on a single item count as numerical failures
            error = NumericalError(f"{type(exc).__name__}: {exc}")
            error.__cause__ = exc
            return BatchResult(index=index, error=error)

    def map_ordered(self, fn: Callable[[T], R], items: Sequence[T]) -> List[BatchResult[R]]:
        """Apply fn to every item; failures are recorded, not raised."""
        items = list(items)
        self._stats = BatchStats(submitted=len(items), start_time=time.time())

        if self.threads == 1 or len(items) <= 1:
            results = [self._run_one(fn, i, item) for i, item in enumerate(items)]
        else:
            with ThreadPoolExecutor(max_workers=self.threads, thread_name_prefix=self.label) as pool:
                futures = [pool.submit(self._run_one, fn, i, item) for i, item in enumerate(items)]
                results = [f.result() for f in futures]

        for result in results:
            if result.ok:
                self._stats.succeeded += 1
            else:
                self._stats.failed += 1
                message = f"item {result.index}: {result.error}"
                self._stats.errors.append(message)
                logger.warning("%s %s", self.label, message)
        self._stats.end_time = time.time()
        logger.debug(
            "%s: %d ok, %d failed in %.2fs (%d threads)",
            self.label, self._stats.succeeded, self._stats.failed,
            self._stats.duration, self.threads,
        )
        return results
