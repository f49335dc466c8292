"""Byte n-gram term frequencies.

The dictionary index of an n-gram is its bytes read as a big-endian integer,
so ``b"\\xab\\xcd"`` is entry ``0xABCD`` of the 65536-entry 2-gram dictionary.
Windows overlap with stride 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from featurizer.config import MAX_NGRAM


@dataclass(frozen=True)
class TfVector:
    counts: np.ndarray  # int64, length 256**n
    total_ngrams: int

    @property
    def dictionary_size(self) -> int:
        return int(self.counts.size)

    @property
    def distinct(self) -> int:
        return int(np.count_nonzero(self.counts))

    def __add__(self, other: TfVector) -> TfVector:
        if self.counts.size != other.counts.size:
            raise ValueError("cannot add term-frequency vectors of different dictionaries")
        return TfVector(self.counts + other.counts, self.total_ngrams + other.total_ngrams)


def _check_order(n: int) -> None:
    if not 1 <= n <= MAX_NGRAM:
        raise ValueError(f"n-gram order must be in [1, {MAX_NGRAM}], got {n}")


def ngram_indices(data: bytes | bytearray | memoryview, n: int) -> np.ndarray:
    """Dictionary index of every window, in file order."""
    _check_order(n)
    if len(data) < n:
        return np.zeros(0, dtype=np.int64)
    buf = np.frombuffer(data, dtype=np.uint8)
    windows = buf.size - n + 1
    idx = buf[:windows].astype(np.int64)
    for offset in range(1, n):
        idx = (idx << 8) | buf[offset : offset + windows]
    return idx


def extract_ngram_tf(data: bytes | bytearray | memoryview, n: int) -> TfVector:
    idx = ngram_indices(data, n)
    counts = np.bincount(idx, minlength=256**n).astype(np.int64, copy=False)
    return TfVector(counts=counts, total_ngrams=int(idx.size))
