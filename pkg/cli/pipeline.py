"""File-level featurizing shared by the CLI commands."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Sequence

import numpy as np
from tqdm import tqdm

from corpus.manifest import LabeledCorpus, load_sample_bytes
from errors import MalyticsError
from featurizer.config import NgramConfig
from featurizer.projection import get_projection
from featurizer.simhash import FeatureVector, featurize

logger = logging.getLogger(__name__)

HashResult = FeatureVector | Exception


def featurize_paths(
    paths: Sequence[str | Path],
    config: NgramConfig,
    *,
    dex: bool = False,
    workers: int = 1,
    progress: bool = False,
    keep_errors: bool = False,
) -> list[HashResult]:
    """One result per path, in input order.

    With ``keep_errors`` a failing file yields its exception instead of aborting.
    """
    proj = get_projection(config)

    def work(path: str | Path) -> HashResult:
        try:
            return featurize(load_sample_bytes(path, dex=dex), config, proj)
        except (OSError, MalyticsError) as exc:
            if not keep_errors:
                raise
            logger.warning("Skipping %s: %s", path, exc)
            return exc

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        return list(
            tqdm(
                pool.map(work, paths),
                total=len(paths),
                desc="hashing",
                unit="file",
                disable=not progress,
            )
        )


def featurize_corpus(
    corpus: LabeledCorpus,
    config: NgramConfig,
    *,
    dex: bool = False,
    workers: int = 1,
    progress: bool = False,
) -> tuple[np.ndarray, int]:
    """``N × hash_size`` feature matrix plus the number of degenerate vectors."""
    paths = [corpus.resolve(r) for r in corpus.records]
    vectors = featurize_paths(paths, config, dex=dex, workers=workers, progress=progress)
    degenerate = sum(1 for v in vectors if v.degenerate)  # type: ignore[union-attr]
    if degenerate:
        logger.warning("%d of %d samples produced degenerate feature vectors", degenerate, len(vectors))
    X = np.vstack([v.values for v in vectors]) if vectors else np.zeros((0, config.hash_size))  # type: ignore[union-attr]
    return X, degenerate
