"""Tests for evaluation.harness — cross-validation runs and aggregation."""

from __future__ import annotations

import numpy as np
import pytest

from elm.solver import TrainingParams
from errors import SplitError
from evaluation.harness import aggregate, run_cv, subsample_sweep
from evaluation.metrics import ConfusionMatrix, metrics
from evaluation.splits import Fold, SplitPlan, family_holdout, kfold_split
from featurizer.config import NgramConfig
from labels import Label
from tests.synthetic import SYNTHETIC_CONFIG, make_features

M, B = Label.MALWARE, Label.BENIGN


@pytest.fixture(scope="module")
def synthetic() -> tuple[np.ndarray, list[Label], list[str | None]]:
    return make_features(600, seed=1)


@pytest.fixture(scope="module")
def synthetic_defaults() -> tuple[np.ndarray, list[Label], list[str | None]]:
    """Same corpus hashed with the default n=2, hash 1024 featurizer."""
    return make_features(600, seed=1, config=NgramConfig())


# ── aggregate ─────────────────────────────────────────────────────────────────


class TestAggregate:
    def test_single_fold_has_no_std(self) -> None:
        report = metrics(ConfusionMatrix(tp=8, fp=1, tn=9, fn=2))
        agg = aggregate([report])
        assert agg.mean["recall"] == report.recall
        assert agg.mean["f1"] == report.f1
        assert all(v is None for v in agg.std.values())
        assert agg.pooled_fpr == report.fpr

    def test_identical_folds_have_zero_std(self) -> None:
        report = metrics(ConfusionMatrix(tp=8, fp=1, tn=9, fn=2))
        agg = aggregate([report, report])
        assert agg.std["accuracy"] == 0.0
        assert agg.std["fnr"] == 0.0

    def test_sample_std(self) -> None:
        a = metrics(ConfusionMatrix(tp=1, fn=1, tn=2))
        b = metrics(ConfusionMatrix(tp=2, tn=2))
        agg = aggregate([a, b])
        assert agg.mean["recall"] == pytest.approx(0.75)
        assert agg.std["recall"] == pytest.approx(np.std([0.5, 1.0], ddof=1))

    def test_fpr_is_pooled(self) -> None:
        a = metrics(ConfusionMatrix(tp=1, fp=1, tn=1))
        b = metrics(ConfusionMatrix(tp=1, fp=0, tn=8))
        agg = aggregate([a, b])
        assert agg.pooled_confusion == ConfusionMatrix(tp=2, fp=1, tn=9)
        assert agg.pooled_fpr == pytest.approx(1 / 10)
        assert "fpr" not in agg.mean

    def test_undefined_metrics_skipped(self) -> None:
        a = metrics(ConfusionMatrix(tn=3))
        b = metrics(ConfusionMatrix(tp=1, tn=3))
        agg = aggregate([a, b])
        assert agg.mean["recall"] == 1.0
        assert agg.std["recall"] is None


# ── run_cv ────────────────────────────────────────────────────────────────────


class TestRunCv:
    def test_separable_corpus_at_defaults(self, synthetic_defaults) -> None:
        X, labels, families = synthetic_defaults
        plan = kfold_split(labels, 5, seed=0)
        params = TrainingParams()
        assert (params.gamma, params.c) == (1.0, 200.0)
        report = run_cv(X, labels, plan, params, NgramConfig(), families=families)
        assert len(report.folds) == 5
        assert report.aggregate.mean["accuracy"] >= 0.99
        assert report.aggregate.pooled_fpr <= 0.02
        assert report.kind == "kfold"

    def test_sparse_projection_close_to_dense(self, synthetic_defaults) -> None:
        X, labels, _ = synthetic_defaults
        plan = kfold_split(labels, 5, seed=0)
        dense = run_cv(X, labels, plan, TrainingParams(), NgramConfig()).aggregate.mean["accuracy"]
        sparse = NgramConfig(n=2, hash_size=3000, seed=7, sparse=True, density=0.01)
        Xs, _, _ = make_features(600, seed=1, config=sparse)
        acc = run_cv(Xs, labels, plan, TrainingParams(), sparse).aggregate.mean["accuracy"]
        assert abs(acc - dense) <= 0.02

    def test_folds_sorted_and_timed(self, synthetic) -> None:
        X, labels, _ = synthetic
        plan = kfold_split(labels, 3, seed=4)
        report = run_cv(X, labels, plan, TrainingParams(), SYNTHETIC_CONFIG, workers=3)
        assert [f.fold for f in report.folds] == [0, 1, 2]
        assert all(set(f.timing) == {"train_seconds", "test_seconds"} for f in report.folds)

    def test_parallel_matches_sequential(self, synthetic) -> None:
        X, labels, _ = synthetic
        plan = kfold_split(labels, 3, seed=5)
        seq = run_cv(X, labels, plan, TrainingParams(), SYNTHETIC_CONFIG, workers=1)
        par = run_cv(X, labels, plan, TrainingParams(), SYNTHETIC_CONFIG, workers=3)
        assert [f.report for f in seq.folds] == [f.report for f in par.folds]

    def test_per_family_detection(self, synthetic) -> None:
        X, labels, families = synthetic
        plan = family_holdout(families, {"fam00"}, seed=0, labels=labels)
        report = run_cv(X, labels, plan, TrainingParams(), SYNTHETIC_CONFIG, families=families)
        assert set(report.family_detection) == {"fam00"}
        det = report.family_detection["fam00"]
        assert det.total == sum(f == "fam00" for f in families)
        assert 0 <= det.detected <= det.total

    def test_leaking_fold_rejected(self, synthetic) -> None:
        X, labels, _ = synthetic
        plan = SplitPlan.model_construct(kind="kfold", folds=[Fold.model_construct(train=[0, 1, 2, 3], test=[3, 4])])
        with pytest.raises(SplitError, match="leaks"):
            run_cv(X, labels, plan, TrainingParams(), SYNTHETIC_CONFIG)

    def test_empty_plan(self, synthetic) -> None:
        X, labels, _ = synthetic
        with pytest.raises(SplitError):
            run_cv(X, labels, SplitPlan(kind="kfold", folds=[]))

    def test_label_count_mismatch(self, synthetic) -> None:
        X, labels, _ = synthetic
        with pytest.raises(SplitError):
            run_cv(X[:10], labels, kfold_split(labels, 5))


# ── subsample_sweep ───────────────────────────────────────────────────────────


class TestSubsampleSweep:
    def test_f1_falls_with_fewer_support_vectors(self, synthetic) -> None:
        X, labels, _ = synthetic
        plan = kfold_split(labels, 3, seed=0)
        points = subsample_sweep(X, labels, plan, TrainingParams(seed=3), (0.1, 0.5, 1.0), SYNTHETIC_CONFIG)
        f1 = {p.fraction: p.mean_f1 for p in points}
        assert f1[1.0] >= 0.99
        assert f1[0.1] < f1[1.0]
        assert f1[0.5] >= f1[1.0] - 0.05
