"""Seeded ±1 projection matrices for tf-simhashing.

Generator: numpy's ``PCG64`` bit generator seeded with ``NgramConfig.seed``,
wrapped in ``numpy.random.Generator``.  Normal draws use numpy's ziggurat
``standard_normal``.

Dense matrices take the sign of one normal draw per entry, consumed in
row-major order (entry ``(r, c)`` is draw ``r * hash_size + c``); a draw of
exactly zero maps to +1.  Sparse matrices pick, row by row, the nonzero
columns as the ``k`` smallest of ``hash_size`` uniform keys (a uniform
``k``-subset drawn without replacement).  Keys come from the seeded stream in
row-major order (``random()``, one 64-bit draw per key).  Signs come from a
second stream, ``PCG64(seed).jumped()``: sign ``j`` of row ``r`` is uniform
draw ``r * k + j`` of that stream, +1 below 0.5 and -1 otherwise, assigned to
the row's chosen columns in ascending column order.  Rows are generated in
fixed-size blocks; every draw consumes whole 64-bit outputs, so block
boundaries do not change either stream.

Public API
----------
build_projection(config)      -> ProjectionMatrix
get_projection(config)        -> ProjectionMatrix  (memoized)
gaussian_directions(config)   -> np.ndarray        (dense configs only)
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from featurizer.config import NgramConfig

logger = logging.getLogger(__name__)

# Draws per generation block; keeps temporaries around 32 MB.
_BLOCK_DRAWS = 1 << 22


@dataclass(frozen=True)
class ProjectionMatrix:
    """Immutable ``dictionary_size × hash_size`` matrix of ±1 (or ±1/0) entries."""

    config: NgramConfig
    entries: np.ndarray | sp.csr_matrix

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def seed(self) -> int:
        return self.config.seed

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.entries)

    def take_rows(self, index: np.ndarray) -> np.ndarray:
        """Dense int8 copy of the selected rows."""
        if self.is_sparse:
            return self.entries[index].toarray()
        return self.entries[index]

    def to_dense(self) -> np.ndarray:
        if self.is_sparse:
            return self.entries.toarray()
        return self.entries


def _generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _sign_generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed).jumped())


def _block_rows(cols: int) -> int:
    return max(1, _BLOCK_DRAWS // max(1, cols))


def _build_dense(config: NgramConfig) -> np.ndarray:
    rows, cols = config.dictionary_size, config.hash_size
    rng = _generator(config.seed)
    entries = np.empty((rows, cols), dtype=np.int8)
    step = _block_rows(cols)
    for start in range(0, rows, step):
        stop = min(rows, start + step)
        draws = rng.standard_normal((stop - start, cols))
        entries[start:stop] = np.where(draws >= 0.0, 1, -1)
    entries.flags.writeable = False
    return entries


def _build_sparse(config: NgramConfig) -> sp.csr_matrix:
    rows, cols = config.dictionary_size, config.hash_size
    k = config.nonzeros_per_row
    rng = _generator(config.seed)
    sign_rng = _sign_generator(config.seed)

    indices = np.empty(rows * k, dtype=np.int32)
    data = np.empty(rows * k, dtype=np.int8)
    step = _block_rows(cols)
    for start in range(0, rows, step):
        stop = min(rows, start + step)
        keys = rng.random((stop - start, cols))
        chosen = np.argpartition(keys, k - 1, axis=1)[:, :k]
        chosen.sort(axis=1)
        signs = np.where(sign_rng.random((stop - start, k)) < 0.5, 1, -1).astype(np.int8)
        indices[start * k : stop * k] = chosen.ravel()
        data[start * k : stop * k] = signs.ravel()

    indptr = np.arange(rows + 1, dtype=np.int64) * k
    return sp.csr_matrix((data, indices, indptr), shape=(rows, cols))


def build_projection(config: NgramConfig) -> ProjectionMatrix:
    if not 0.0 < config.density <= 1.0:
        raise ValueError(f"density must be in (0, 1], got {config.density}")
    started = time.perf_counter()
    entries = _build_sparse(config) if config.sparse else _build_dense(config)
    logger.debug(
        "Built %s projection %dx%d (seed=%d) in %.2fs",
        "sparse" if config.sparse else "dense",
        config.dictionary_size,
        config.hash_size,
        config.seed,
        time.perf_counter() - started,
    )
    return ProjectionMatrix(config=config, entries=entries)


@lru_cache(maxsize=2)
def get_projection(config: NgramConfig) -> ProjectionMatrix:
    return build_projection(config)


def gaussian_directions(config: NgramConfig) -> np.ndarray:
    """The normal draws whose signs form the dense matrix of ``config``."""
    if config.sparse:
        raise ValueError("gaussian directions exist only for dense projections")
    rng = _generator(config.seed)
    return rng.standard_normal((config.dictionary_size, config.hash_size))
