"""tf-simhash: term frequencies times a ±1 projection, then standardized."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from errors import DimensionMismatchError
from featurizer.config import NgramConfig
from featurizer.ngrams import TfVector, extract_ngram_tf
from featurizer.projection import ProjectionMatrix, get_projection

logger = logging.getLogger(__name__)

DEGENERATE_SIGMA = 1e-12
# Present n-grams multiplied per step; bounds the int64 temporary to ~32 MB.
_ROW_BLOCK = 4096


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray  # float64, length hash_size
    degenerate: bool = False

    @property
    def hash_size(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.hash_size


def tf_simhash(tf: TfVector, proj: ProjectionMatrix) -> np.ndarray:
    """Raw (pre-standardization) hash; exact integers stored as float64.

    Only n-grams that occur in the file are visited.
    """
    if tf.dictionary_size != proj.rows:
        raise DimensionMismatchError(
            f"tf dictionary has {tf.dictionary_size} entries, projection has {proj.rows} rows"
        )
    present = np.flatnonzero(tf.counts)
    raw = np.zeros(proj.cols, dtype=np.int64)
    if proj.is_sparse:
        if present.size:
            raw += proj.entries[present].T @ tf.counts[present]
    else:
        for start in range(0, present.size, _ROW_BLOCK):
            block = present[start : start + _ROW_BLOCK]
            raw += tf.counts[block] @ proj.entries[block].astype(np.int64)
    return raw.astype(np.float64)


def standardize(raw: np.ndarray) -> FeatureVector:
    """Zero mean, unit population variance; flat inputs give a degenerate zero vector."""
    raw = np.asarray(raw, dtype=np.float64)
    if raw.ndim != 1 or raw.size < 2:
        raise ValueError(f"standardize needs a 1-D vector of length >= 2, got shape {raw.shape}")
    mu = raw.mean()
    sigma = raw.std()
    if sigma < DEGENERATE_SIGMA:
        return FeatureVector(values=np.zeros_like(raw), degenerate=True)
    return FeatureVector(values=(raw - mu) / sigma, degenerate=False)


def _resolve_projection(config: NgramConfig, proj: ProjectionMatrix | None) -> ProjectionMatrix:
    if proj is None:
        return get_projection(config)
    if proj.rows != config.dictionary_size or proj.cols != config.hash_size:
        raise DimensionMismatchError(
            f"projection is {proj.rows}x{proj.cols}, config expects "
            f"{config.dictionary_size}x{config.hash_size}"
        )
    return proj


def featurize(
    data: bytes | bytearray | memoryview,
    config: NgramConfig,
    proj: ProjectionMatrix | None = None,
) -> FeatureVector:
    proj = _resolve_projection(config, proj)
    tf = extract_ngram_tf(data, config.n)
    vector = standardize(tf_simhash(tf, proj))
    if vector.degenerate:
        logger.debug("Degenerate feature vector (%d n-grams)", tf.total_ngrams)
    return vector


def featurize_many(
    datas: Iterable[bytes],
    config: NgramConfig,
    proj: ProjectionMatrix | None = None,
    workers: int = 1,
) -> list[FeatureVector]:
    """Featurize in parallel; output order follows input order."""
    proj = _resolve_projection(config, proj)
    if workers <= 1:
        return [featurize(d, config, proj) for d in datas]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda d: featurize(d, config, proj), datas))


def stack(features: Iterable[FeatureVector]) -> np.ndarray:
    """Row-stack feature vectors into an ``N × hash_size`` float64 matrix."""
    rows = [f.values for f in features]
    if not rows:
        raise ValueError("no feature vectors to stack")
    lengths = {r.size for r in rows}
    if len(lengths) != 1:
        raise DimensionMismatchError(f"inconsistent feature lengths: {sorted(lengths)}")
    return np.vstack(rows).astype(np.float64, copy=False)
