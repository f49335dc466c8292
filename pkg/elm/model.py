"""Trained kernel ELM and scoring.

A model is the support set, the output weights ``beta`` solved from
``(I/C + Omega) beta = T`` and everything needed to rebuild the featurizer.
Scoring a vector is one kernel row against the support set times ``beta``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from pydantic import BaseModel, Field

from errors import DimensionMismatchError
from featurizer.config import NgramConfig
from featurizer.simhash import FeatureVector
from kernel.rbf import Features, KernelParams, as_matrix, cross_kernel, kernel_row
from labels import Label

LABEL_MAP = (Label.MALWARE, Label.BENIGN)


class TrainingMeta(BaseModel):
    """Bookkeeping from a training run; not part of the serialized model."""

    n_samples: int = 0
    n_malware: int = 0
    n_benign: int = 0
    seed: int | None = None
    subsample_indices: list[int] | None = None
    residual: float = Field(0.0, description="max-norm of (I/C + Omega) beta - T")


class Scores(NamedTuple):
    malware_score: float
    benign_score: float
    margin: float

    @classmethod
    def from_channels(cls, malware_score: float, benign_score: float) -> Scores:
        return cls(float(malware_score), float(benign_score), float(malware_score - benign_score))


@dataclass(frozen=True, eq=False)
class TrainedModel:
    featurizer_config: NgramConfig
    kernel_params: KernelParams
    c_tradeoff: float
    support: np.ndarray  # l × hash_size
    beta: np.ndarray  # l × 2
    training_meta: TrainingMeta = field(default_factory=TrainingMeta)
    label_map: tuple[Label, Label] = LABEL_MAP

    def __post_init__(self) -> None:
        if self.support.ndim != 2 or self.beta.ndim != 2 or self.beta.shape[1] != 2:
            raise DimensionMismatchError(
                f"support {self.support.shape} / beta {self.beta.shape} are not l×h / l×2"
            )
        if self.beta.shape[0] != self.support.shape[0]:
            raise DimensionMismatchError(
                f"beta has {self.beta.shape[0]} rows for {self.support.shape[0]} support vectors"
            )
        if self.support.shape[1] != self.featurizer_config.hash_size:
            raise DimensionMismatchError(
                f"support vectors have length {self.support.shape[1]}, "
                f"config hash_size is {self.featurizer_config.hash_size}"
            )
        # held C-contiguous whether solved or loaded
        object.__setattr__(self, "support", np.ascontiguousarray(self.support, dtype=np.float64))
        object.__setattr__(self, "beta", np.ascontiguousarray(self.beta, dtype=np.float64))
        self.support.flags.writeable = False
        self.beta.flags.writeable = False

    @property
    def support_count(self) -> int:
        return int(self.support.shape[0])

    @property
    def hash_size(self) -> int:
        return int(self.support.shape[1])

    @property
    def support_vectors(self) -> list[FeatureVector]:
        return [FeatureVector(values=row, degenerate=not row.any()) for row in self.support]


def predict_scores(model: TrainedModel, x: FeatureVector | np.ndarray) -> Scores:
    values = x.values if isinstance(x, FeatureVector) else np.asarray(x, dtype=np.float64)
    if values.shape != (model.hash_size,):
        raise DimensionMismatchError(
            f"feature length {values.size} does not match model hash_size {model.hash_size}"
        )
    out = kernel_row(values, model.support, model.kernel_params) @ model.beta
    return Scores.from_channels(out[0], out[1])


def predict_batch(model: TrainedModel, X: Features) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(malware_scores, benign_scores, margins), one entry per row of ``X``."""
    Xm = as_matrix(X)
    if Xm.shape[1] != model.hash_size:
        raise DimensionMismatchError(
            f"feature length {Xm.shape[1]} does not match model hash_size {model.hash_size}"
        )
    out = cross_kernel(Xm, model.support, model.kernel_params) @ model.beta
    return out[:, 0], out[:, 1], out[:, 0] - out[:, 1]


def classify(scores: Scores, threshold: float = 0.0) -> Label:
    """Malware iff ``margin >= threshold``; ties go to malware."""
    return Label.MALWARE if scores.margin >= threshold else Label.BENIGN


def classify_margins(margins: np.ndarray, threshold: float = 0.0) -> list[Label]:
    return [Label.MALWARE if m >= threshold else Label.BENIGN for m in np.asarray(margins)]
