from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from featurizer.config import NgramConfig
from featurizer.projection import build_projection
from featurizer.simhash import featurize

# Order-of-magnitude goal for single-threaded hashing on current hardware.
TARGET_MB_PER_SECOND = 5.0
_MB = 1_000_000


@dataclass
class BenchEntry:
    label: str
    n_bytes: int = 0
    seconds: float = 0.0

    @property
    def mb_per_second(self) -> float:
        return (self.n_bytes / _MB) / self.seconds if self.seconds > 0 else 0.0


class ThroughputTracker:
    """Accumulates single-threaded hashing timings across inputs."""

    def __init__(self, config: NgramConfig) -> None:
        self.config = config
        self.entries: list[BenchEntry] = []
        self.projection_seconds: float = 0.0
        self._proj = None

    def prepare(self) -> None:
        started = time.perf_counter()
        self._proj = build_projection(self.config)
        self.projection_seconds = time.perf_counter() - started

    def record(self, data: bytes, label: str = "") -> BenchEntry:
        if self._proj is None:
            self.prepare()
        started = time.perf_counter()
        featurize(data, self.config, self._proj)
        entry = BenchEntry(label=label, n_bytes=len(data), seconds=time.perf_counter() - started)
        self.entries.append(entry)
        return entry

    @property
    def total_bytes(self) -> int:
        return sum(e.n_bytes for e in self.entries)

    @property
    def total_seconds(self) -> float:
        return sum(e.seconds for e in self.entries)

    @property
    def mb_per_second(self) -> float:
        seconds = self.total_seconds
        return (self.total_bytes / _MB) / seconds if seconds > 0 else 0.0

    def summary(self) -> dict:
        return {
            "files": len(self.entries),
            "bytes": self.total_bytes,
            "mb_per_second": self.mb_per_second,
            "target_mb_per_second": TARGET_MB_PER_SECOND,
            "meets_target": self.mb_per_second >= TARGET_MB_PER_SECOND,
            "timing": {
                "hash_seconds": self.total_seconds,
                "projection_seconds": self.projection_seconds,
            },
        }


def synthetic_payload(megabytes: float, seed: int = 0) -> bytes:
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.integers(0, 256, size=int(megabytes * _MB), dtype=np.uint8).tobytes()
