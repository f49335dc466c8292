"""Confusion-matrix metrics and ROC/AUC, with malware as the positive class.

Ratios whose denominator is zero are left as ``None`` and the reason is
recorded in ``MetricsReport.undefined`` instead of being reported as 0.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from pydantic import BaseModel, Field
from sklearn.metrics import confusion_matrix, roc_auc_score, roc_curve

from errors import DimensionMismatchError, UndefinedMetricError
from labels import Label, is_malware

SCALAR_METRICS = ("recall", "fnr", "precision", "f1", "accuracy", "fpr", "auc")


class ConfusionMatrix(BaseModel):
    tp: int = Field(0, ge=0)
    fp: int = Field(0, ge=0)
    tn: int = Field(0, ge=0)
    fn: int = Field(0, ge=0)

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def __add__(self, other: ConfusionMatrix) -> ConfusionMatrix:
        return ConfusionMatrix(
            tp=self.tp + other.tp,
            fp=self.fp + other.fp,
            tn=self.tn + other.tn,
            fn=self.fn + other.fn,
        )


class MetricsReport(BaseModel):
    confusion: ConfusionMatrix
    recall: float | None = None
    fnr: float | None = None
    precision: float | None = None
    f1: float | None = None
    accuracy: float | None = None
    fpr: float | None = None
    auc: float | None = None
    roc_points: list[tuple[float, float]] = Field(default_factory=list)
    undefined: dict[str, str] = Field(default_factory=dict, description="metric -> reason")


def confusion(truth: Sequence[str | Label], predicted: Sequence[str | Label]) -> ConfusionMatrix:
    if len(truth) != len(predicted):
        raise DimensionMismatchError(f"{len(truth)} true labels but {len(predicted)} predictions")
    if len(truth) == 0:
        raise ValueError("confusion matrix needs at least one sample")
    tn, fp, fn, tp = confusion_matrix(
        is_malware(truth), is_malware(predicted), labels=[False, True]
    ).ravel()
    return ConfusionMatrix(tp=int(tp), fp=int(fp), tn=int(tn), fn=int(fn))


def roc_auc(
    margins: Sequence[float] | np.ndarray, truth: Sequence[str | Label]
) -> tuple[float, list[tuple[float, float]]]:
    """AUC = (concordant + 0.5 * tied pairs) / (positives * negatives).

    ROC points come from a sweep over every distinct margin, from (0, 0) to (1, 1).
    """
    scores = np.asarray(margins, dtype=np.float64)
    mask = is_malware(truth)
    if scores.shape != mask.shape:
        raise DimensionMismatchError(f"{scores.size} margins but {mask.size} labels")
    if mask.all() or not mask.any():
        raise UndefinedMetricError("ROC needs both malware and benign samples")
    fpr, tpr, _ = roc_curve(mask, scores, drop_intermediate=False)
    auc = float(roc_auc_score(mask, scores))
    return auc, [(float(f), float(t)) for f, t in zip(fpr, tpr)]


def _ratio(num: int, den: int, name: str, reason: str, undefined: dict[str, str]) -> float | None:
    if den == 0:
        undefined[name] = reason
        return None
    return num / den


def metrics(
    cm: ConfusionMatrix,
    scores: Sequence[float] | np.ndarray | None = None,
    truth: Sequence[str | Label] | None = None,
) -> MetricsReport:
    undefined: dict[str, str] = {}
    if truth is not None and len(truth) != cm.total:
        raise DimensionMismatchError(f"{len(truth)} labels for a confusion matrix of {cm.total}")

    recall = _ratio(cm.tp, cm.tp + cm.fn, "recall", "no malware samples", undefined)
    fnr = None if recall is None else 1.0 - recall
    if recall is None:
        undefined["fnr"] = "no malware samples"
    precision = _ratio(cm.tp, cm.tp + cm.fp, "precision", "nothing predicted as malware", undefined)
    accuracy = _ratio(cm.tp + cm.tn, cm.total, "accuracy", "no samples", undefined)
    fpr = _ratio(cm.fp, cm.fp + cm.tn, "fpr", "no benign samples", undefined)

    f1 = None
    if precision is None or recall is None:
        undefined["f1"] = "precision or recall undefined"
    elif precision + recall == 0:
        undefined["f1"] = "precision and recall are both zero"
    else:
        f1 = 2 * precision * recall / (precision + recall)

    auc = None
    roc_points: list[tuple[float, float]] = []
    if scores is None or truth is None:
        undefined["auc"] = "no scores supplied"
    else:
        try:
            auc, roc_points = roc_auc(scores, truth)
        except UndefinedMetricError as exc:
            undefined["auc"] = str(exc)

    return MetricsReport(
        confusion=cm,
        recall=recall,
        fnr=fnr,
        precision=precision,
        f1=f1,
        accuracy=accuracy,
        fpr=fpr,
        auc=auc,
        roc_points=roc_points,
        undefined=undefined,
    )
