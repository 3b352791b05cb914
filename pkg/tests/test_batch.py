"""Tests for the ordered batch processor."""

import threading
import time

import pytest

from dasf_retrieval.errors import ConfigurationError, NumericalError
from dasf_retrieval.processing.batch import BatchProcessor


def square_or_fail(x: int) -> int:
    if x % 3 == 0:
        raise NumericalError(f"bad item {x}")
    return x * x


class TestBatchProcessor:
    def test_results_in_input_order(self):
        def slow_for_small(x):
            time.sleep(0.002 * (10 - x))
            return x

        results = BatchProcessor(threads=4).map_ordered(slow_for_small, range(10))
        assert [r.index for r in results] == list(range(10))
        assert [r.value for r in results] == list(range(10))

    def test_failures_are_isolated(self):
        processor = BatchProcessor(threads=3)
        results = processor.map_ordered(square_or_fail, range(1, 8))
        assert [r.ok for r in results] == [True, True, False, True, True, False, True]
        assert results[1].value == 4
        assert isinstance(results[2].error, NumericalError)
        assert processor.stats.submitted == 7
        assert processor.stats.succeeded == 5
        assert processor.stats.failed == 2
        assert processor.stats.errors[0].startswith("item 2:")

    @pytest.mark.parametrize("threads", [1, 2, 8])
    def test_same_output_for_any_worker_count(self, threads):
        results = BatchProcessor(threads=threads).map_ordered(square_or_fail, range(20))
        assert [(r.index, r.value, r.ok) for r in results] == [
            (i, None if i % 3 == 0 else i * i, i % 3 != 0) for i in range(20)
        ]

    def test_uses_worker_threads(self):
        names = set()

        def record(_):
            names.add(threading.current_thread().name)
            time.sleep(0.01)

        BatchProcessor(threads=2, label="leaves").map_ordered(record, range(6))
        assert all(name.startswith("leaves") for name in names)

    @pytest.mark.parametrize("exc", [ValueError("array must not contain infs or NaNs"), ZeroDivisionError("float division")])
    def test_library_errors_count_as_numerical_failures(self, exc):
        def flaky(x):
            if x == 1:
                raise exc
            return x

        processor = BatchProcessor(threads=2)
        results = processor.map_ordered(flaky, range(3))
        assert [r.ok for r in results] == [True, False, True]
        assert isinstance(results[1].error, NumericalError)
        assert results[1].error.__cause__ is exc
        assert type(exc).__name__ in str(results[1].error)
        assert processor.stats.failed == 1

    def test_unexpected_errors_propagate(self):
        def broken(_):
            raise KeyError("bug")

        with pytest.raises(KeyError):
            BatchProcessor(threads=2).map_ordered(broken, range(3))

    def test_empty_input(self):
        processor = BatchProcessor(threads=2)
        assert processor.map_ordered(square_or_fail, []) == []
        assert processor.stats.submitted == 0

    def test_invalid_thread_count(self):
        with pytest.raises(ConfigurationError):
            BatchProcessor(threads=0)

    def test_default_thread_count(self):
        assert BatchProcessor().threads >= 1
