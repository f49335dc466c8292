"""Closed-form kernel extreme learning machine."""

from elm.model import (
    TrainedModel,
    TrainingMeta,
    Scores,
    classify,
    classify_margins,
    predict_batch,
    predict_scores,
)
from elm.targets import encode_targets
from elm.solver import DEFAULT_C, TrainingParams, fit, train, train_subsampled

__all__ = [
    "DEFAULT_C",
    "Scores",
    "TrainedModel",
    "TrainingMeta",
    "TrainingParams",
    "classify",
    "classify_margins",
    "encode_targets",
    "fit",
    "predict_batch",
    "predict_scores",
    "train",
    "train_subsampled",
]
