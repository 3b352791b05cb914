"""Batch processing."""

from .batch import BatchProcessor, BatchResult, BatchStats

__all__ = ["BatchProcessor", "BatchResult", "BatchStats"]
