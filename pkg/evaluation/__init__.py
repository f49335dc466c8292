"""Metrics, split protocols and the cross-validation harness."""

from evaluation.harness import CvReport, run_cv, subsample_sweep
from evaluation.metrics import ConfusionMatrix, MetricsReport, confusion, metrics, roc_auc
from evaluation.splits import (
    SplitPlan,
    family_groups,
    family_holdout,
    family_rotation,
    kfold_split,
    mbr_subsample,
)

__all__ = [
    "ConfusionMatrix",
    "CvReport",
    "MetricsReport",
    "SplitPlan",
    "confusion",
    "family_groups",
    "family_holdout",
    "family_rotation",
    "kfold_split",
    "mbr_subsample",
    "metrics",
    "roc_auc",
    "run_cv",
    "subsample_sweep",
]
