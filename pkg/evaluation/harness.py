"""Cross-validation harness: train and score every fold of a SplitPlan.

Per-fold reports are aggregated as mean and sample standard deviation
(``ddof=1``); the false-positive rate is pooled over the confusion cells of
all folds.  Wall-clock times live under ``timing`` keys and are excluded from
determinism comparisons.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np
from pydantic import BaseModel, Field, computed_field

from elm.model import classify_margins, predict_batch
from elm.solver import TrainingParams, fit
from errors import SplitError
from evaluation.metrics import ConfusionMatrix, MetricsReport, confusion, metrics
from evaluation.splits import Fold, SplitKind, SplitPlan
from featurizer.config import NgramConfig
from kernel.rbf import Features, as_matrix
from labels import Label, is_malware

logger = logging.getLogger(__name__)

AGGREGATED_METRICS = ("recall", "fnr", "precision", "f1", "accuracy", "auc")
DEFAULT_SWEEP_FRACTIONS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)


class FamilyDetection(BaseModel):
    total: int = 0
    detected: int = 0

    @computed_field
    @property
    def detection_rate(self) -> float:
        return self.detected / self.total if self.total else 0.0

    def __add__(self, other: FamilyDetection) -> FamilyDetection:
        return FamilyDetection(total=self.total + other.total, detected=self.detected + other.detected)


class FoldReport(BaseModel):
    fold: int
    n_train: int
    n_test: int
    support_count: int
    report: MetricsReport
    family_detection: dict[str, FamilyDetection] = Field(default_factory=dict)
    timing: dict[str, float] = Field(default_factory=dict)


class Aggregate(BaseModel):
    mean: dict[str, float] = Field(default_factory=dict)
    std: dict[str, float | None] = Field(default_factory=dict)
    pooled_confusion: ConfusionMatrix
    pooled_fpr: float | None = None


class CvReport(BaseModel):
    kind: SplitKind
    params: TrainingParams
    folds: list[FoldReport]
    aggregate: Aggregate
    family_detection: dict[str, FamilyDetection] = Field(default_factory=dict)


class SweepPoint(BaseModel):
    fraction: float
    mean_f1: float | None
    std_f1: float | None
    mean_accuracy: float | None


# ── Per-fold work ───────────────────────────────────────────────────────────


def _family_detection(
    test: list[int], predicted: list[Label], truth: np.ndarray, families: Sequence[str | None] | None
) -> dict[str, FamilyDetection]:
    if families is None:
        return {}
    out: dict[str, FamilyDetection] = {}
    for idx, pred in zip(test, predicted):
        family = families[idx]
        if not truth[idx] or not family:
            continue
        entry = out.setdefault(family, FamilyDetection())
        entry.total += 1
        entry.detected += int(pred is Label.MALWARE)
    return dict(sorted(out.items()))


def _run_fold(
    index: int,
    fold: Fold,
    X: np.ndarray,
    labels: list[Label],
    families: Sequence[str | None] | None,
    params: TrainingParams,
    config: NgramConfig,
) -> FoldReport:
    if set(fold.train) & set(fold.test):
        raise SplitError(f"fold {index} leaks test indices into training")
    truth = is_malware(labels)

    started = time.perf_counter()
    model = fit(X[fold.train], [labels[i] for i in fold.train], params, config)
    trained = time.perf_counter()
    _, _, margins = predict_batch(model, X[fold.test])
    tested = time.perf_counter()

    test_labels = [labels[i] for i in fold.test]
    predicted = classify_margins(margins, params.threshold)
    report = metrics(confusion(test_labels, predicted), margins, test_labels)
    logger.info(
        "Fold %d: train=%d test=%d support=%d accuracy=%s",
        index, len(fold.train), len(fold.test), model.support_count, report.accuracy,
    )
    return FoldReport(
        fold=index,
        n_train=len(fold.train),
        n_test=len(fold.test),
        support_count=model.support_count,
        report=report,
        family_detection=_family_detection(fold.test, predicted, truth, families),
        timing={"train_seconds": trained - started, "test_seconds": tested - trained},
    )


# ── Aggregation ─────────────────────────────────────────────────────────────


def aggregate(reports: Sequence[MetricsReport]) -> Aggregate:
    mean: dict[str, float] = {}
    std: dict[str, float | None] = {}
    for name in AGGREGATED_METRICS:
        values = [getattr(r, name) for r in reports if getattr(r, name) is not None]
        if not values:
            continue
        mean[name] = float(np.mean(values))
        std[name] = float(np.std(values, ddof=1)) if len(values) > 1 else None

    pooled = ConfusionMatrix()
    for r in reports:
        pooled = pooled + r.confusion
    negatives = pooled.fp + pooled.tn
    return Aggregate(
        mean=mean,
        std=std,
        pooled_confusion=pooled,
        pooled_fpr=pooled.fp / negatives if negatives else None,
    )


def run_cv(
    features: Features,
    labels: Sequence[str | Label],
    plan: SplitPlan,
    params: TrainingParams | None = None,
    config: NgramConfig | None = None,
    families: Sequence[str | None] | None = None,
    workers: int = 1,
) -> CvReport:
    """Train and evaluate each fold; folds may run in parallel."""
    X = as_matrix(features)
    parsed = [Label.parse(v) for v in labels]
    if X.shape[0] != len(parsed):
        raise SplitError(f"{X.shape[0]} feature vectors but {len(parsed)} labels")
    if not plan.folds:
        raise SplitError("split plan has no folds")
    params = params or TrainingParams()
    config = config or NgramConfig(hash_size=X.shape[1])

    def work(item: tuple[int, Fold]) -> FoldReport:
        return _run_fold(item[0], item[1], X, parsed, families, params, config)

    if workers <= 1:
        folds = [work(item) for item in enumerate(plan.folds)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            folds = list(pool.map(work, enumerate(plan.folds)))
    folds.sort(key=lambda f: f.fold)

    pooled_families: dict[str, FamilyDetection] = {}
    for f in folds:
        for name, det in f.family_detection.items():
            pooled_families[name] = pooled_families.get(name, FamilyDetection()) + det

    return CvReport(
        kind=plan.kind,
        params=params,
        folds=folds,
        aggregate=aggregate([f.report for f in folds]),
        family_detection=dict(sorted(pooled_families.items())),
    )


def subsample_sweep(
    features: Features,
    labels: Sequence[str | Label],
    plan: SplitPlan,
    params: TrainingParams | None = None,
    fractions: Sequence[float] = DEFAULT_SWEEP_FRACTIONS,
    config: NgramConfig | None = None,
    workers: int = 1,
) -> list[SweepPoint]:
    """f1/accuracy of the same plan with the kernel restricted to random subsets."""
    params = params or TrainingParams()
    points = []
    for fraction in fractions:
        report = run_cv(
            features,
            labels,
            plan,
            params.model_copy(update={"subsample": fraction}),
            config,
            workers=workers,
        )
        agg = report.aggregate
        points.append(
            SweepPoint(
                fraction=fraction,
                mean_f1=agg.mean.get("f1"),
                std_f1=agg.std.get("f1"),
                mean_accuracy=agg.mean.get("accuracy"),
            )
        )
    return points
