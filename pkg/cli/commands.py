"""Subcommand implementations.

Every command takes the parsed ``argparse.Namespace`` and an output stream
and returns a process exit code.  Results go to ``out`` as JSON lines (or
indented JSON with ``--pretty``); diagnostics go to the logger.  Keys under
``timing`` hold wall-clock measurements and are the only nondeterministic
fields in any output.
"""

from __future__ import annotations

import argparse
import json
import logging
import time
from pathlib import Path
from typing import Any, TextIO

import numpy as np

from cli.bench import ThroughputTracker, synthetic_payload
from cli.model_file import load_model, save_model
from cli.pipeline import featurize_corpus, featurize_paths
from cli.settings import worker_count
from corpus.manifest import LabeledCorpus, load_manifest
from elm.model import classify, classify_margins, predict_batch, predict_scores
from elm.solver import TrainingParams, fit
from errors import MalyticsError, SplitError
from evaluation.harness import run_cv, subsample_sweep
from evaluation.metrics import confusion, metrics
from evaluation.splits import (
    SplitPlan,
    family_holdout,
    family_rotation,
    kfold_split,
    mbr_subsample,
    restrict,
)
from featurizer.config import DEFAULT_DENSITY, DEFAULT_HASH_SIZE, DEFAULT_NGRAM, NgramConfig
from featurizer.simhash import FeatureVector
from labels import Label

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


# ── Helpers ─────────────────────────────────────────────────────────────────


def emit(out: TextIO, payload: Any, pretty: bool = False) -> None:
    out.write(json.dumps(payload, indent=2 if pretty else None) + "\n")


def config_from_args(args: argparse.Namespace) -> NgramConfig:
    return NgramConfig(
        n=DEFAULT_NGRAM if args.ngram is None else args.ngram,
        hash_size=DEFAULT_HASH_SIZE if args.hash_size is None else args.hash_size,
        seed=0 if args.seed is None else args.seed,
        sparse=bool(args.sparse),
        density=DEFAULT_DENSITY if args.density is None else args.density,
    )


def params_from_args(args: argparse.Namespace) -> TrainingParams:
    return TrainingParams(
        gamma=args.gamma,
        c=args.c,
        subsample=args.subsample,
        seed=0 if args.seed is None else args.seed,
        threshold=args.threshold,
    )


def _check_hash_flags(args: argparse.Namespace, config: NgramConfig) -> None:
    """Explicit hash flags must agree with the config embedded in the model."""
    requested = {
        "ngram": (args.ngram, config.n),
        "hash_size": (args.hash_size, config.hash_size),
        "seed": (args.seed, config.seed),
        "density": (args.density, config.density),
    }
    conflicts = [
        f"--{name.replace('_', '-')}={given} (model: {stored})"
        for name, (given, stored) in requested.items()
        if given is not None and given != stored
    ]
    if args.sparse and not config.sparse:
        conflicts.append("--sparse (model: dense)")
    if conflicts:
        raise MalyticsError("hash flags conflict with the model config: " + ", ".join(conflicts))


def _vector_record(path: str, vector: FeatureVector) -> dict:
    return {"path": path, "degenerate": vector.degenerate, "values": vector.values.tolist()}


def _load_corpus(
    args: argparse.Namespace, config: NgramConfig
) -> tuple[LabeledCorpus, np.ndarray, int]:
    corpus = load_manifest(args.manifest)
    X, degenerate = featurize_corpus(
        corpus, config, dex=args.dex, workers=worker_count(), progress=args.progress
    )
    return corpus, X, degenerate


# ── hash ────────────────────────────────────────────────────────────────────


def cmd_hash(args: argparse.Namespace, out: TextIO) -> int:
    config = config_from_args(args)
    results = featurize_paths(
        args.files, config, dex=args.dex, workers=worker_count(), progress=args.progress, keep_errors=True
    )
    failures = 0
    for path, result in zip(args.files, results):
        if isinstance(result, Exception):
            failures += 1
            emit(out, {"path": str(path), "error": str(result)}, args.pretty)
        else:
            emit(out, _vector_record(str(path), result), args.pretty)
    return EXIT_DATA if results and failures == len(results) else EXIT_OK


# ── train ───────────────────────────────────────────────────────────────────


def cmd_train(args: argparse.Namespace, out: TextIO) -> int:
    started = time.perf_counter()
    config = config_from_args(args)
    params = params_from_args(args)
    corpus, X, degenerate = _load_corpus(args, config)
    model = fit(X, corpus.labels, params, config)
    path = save_model(model, args.output)
    emit(
        out,
        {
            "output": str(path),
            "n_samples": len(corpus),
            "support_count": model.support_count,
            "gamma": model.kernel_params.gamma,
            "c": model.c_tradeoff,
            "residual": model.training_meta.residual,
            "degenerate": degenerate,
            "timing": {"wall_seconds": time.perf_counter() - started},
        },
        args.pretty,
    )
    return EXIT_OK


# ── predict ─────────────────────────────────────────────────────────────────


def cmd_predict(args: argparse.Namespace, out: TextIO) -> int:
    model = load_model(args.model)
    _check_hash_flags(args, model.featurizer_config)
    results = featurize_paths(
        args.files,
        model.featurizer_config,
        dex=args.dex,
        workers=worker_count(),
        progress=args.progress,
        keep_errors=True,
    )
    failures = 0
    for path, result in zip(args.files, results):
        if isinstance(result, Exception):
            failures += 1
            emit(out, {"path": str(path), "error": str(result)}, args.pretty)
            continue
        scores = predict_scores(model, result)
        record = {
            "path": str(path),
            "label": classify(scores, args.threshold).value,
            "malware_score": scores.malware_score,
            "benign_score": scores.benign_score,
            "margin": scores.margin,
            "degenerate": result.degenerate,
        }
        if result.degenerate:
            record["warning"] = "degenerate feature vector (file too short or constant)"
        emit(out, record, args.pretty)
    return EXIT_DATA if results and failures == len(results) else EXIT_OK


# ── eval ────────────────────────────────────────────────────────────────────


def cmd_eval(args: argparse.Namespace, out: TextIO) -> int:
    """Score a trained model on a manifest (e.g. a later time window)."""
    model = load_model(args.model)
    _check_hash_flags(args, model.featurizer_config)
    corpus, X, _ = _load_corpus(args, model.featurizer_config)
    _, _, margins = predict_batch(model, X)
    predicted = classify_margins(margins, args.threshold)
    report = metrics(confusion(corpus.labels, predicted), margins, corpus.labels)
    emit(
        out,
        {"n_samples": len(corpus), "support_count": model.support_count, **report.model_dump(mode="json")},
        args.pretty,
    )
    return EXIT_OK


# ── cv / sweep ──────────────────────────────────────────────────────────────


def _families_arg(value: str | None) -> list[str]:
    if not value:
        return []
    return [name.strip() for name in value.split(",") if name.strip()]


def build_plan(args: argparse.Namespace, labels: list[Label], families: list[str | None]) -> SplitPlan:
    seed = 0 if args.seed is None else args.seed
    held = _families_arg(getattr(args, "holdout_families", None))
    groups = getattr(args, "holdout_groups", None)
    if held and groups:
        raise SplitError("--holdout-families and --holdout-groups are mutually exclusive")
    if held:
        return family_holdout(families, held, seed, labels)
    if groups:
        return family_rotation(families, groups, args.min_family_size, seed, labels)
    return kfold_split(labels, args.folds, seed)


def _cv_inputs(args: argparse.Namespace) -> tuple[NgramConfig, LabeledCorpus, np.ndarray, SplitPlan]:
    """Featurize the manifest once; with ``--mbr`` the plan covers only the kept samples."""
    config = config_from_args(args)
    corpus, X, _ = _load_corpus(args, config)
    if args.mbr is None:
        return config, corpus, X, build_plan(args, corpus.labels, corpus.families)

    keep = mbr_subsample(corpus.labels, args.mbr, 0 if args.seed is None else args.seed)
    logger.info("MBR %.2f keeps %d of %d samples", args.mbr, len(keep), len(corpus))
    kept = corpus.subset(keep)
    plan = restrict(build_plan(args, kept.labels, kept.families), keep)
    if plan.kind == "kfold":
        plan = plan.model_copy(update={"kind": "mbr_subsample"})
    return config, corpus, X, plan


def cmd_cv(args: argparse.Namespace, out: TextIO) -> int:
    config, corpus, X, plan = _cv_inputs(args)
    report = run_cv(
        X, corpus.labels, plan, params_from_args(args), config, families=corpus.families, workers=worker_count()
    )
    payload = report.model_dump(mode="json")
    if plan.held_out is not None:
        payload["held_out"] = plan.held_out
    emit(out, payload, args.pretty)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, out: TextIO) -> int:
    config, corpus, X, plan = _cv_inputs(args)
    points = subsample_sweep(
        X, corpus.labels, plan, params_from_args(args), args.fractions, config, workers=worker_count()
    )
    emit(out, {"points": [p.model_dump(mode="json") for p in points]}, args.pretty)
    return EXIT_OK


# ── bench ───────────────────────────────────────────────────────────────────


def cmd_bench(args: argparse.Namespace, out: TextIO) -> int:
    """Single-threaded hashing throughput; reported, never a failure."""
    tracker = ThroughputTracker(config_from_args(args))
    tracker.prepare()
    if args.files:
        for path in args.files:
            tracker.record(Path(path).read_bytes(), label=str(path))
    else:
        tracker.record(synthetic_payload(args.synthetic_mb), label="synthetic")
    summary = tracker.summary()
    if not summary["meets_target"]:
        logger.warning(
            "Hashing ran at %.2f MB/s, below the %.1f MB/s goal",
            summary["mb_per_second"],
            summary["target_mb_per_second"],
        )
    emit(out, summary, args.pretty)
    return EXIT_OK


COMMANDS = {
    "hash": cmd_hash,
    "train": cmd_train,
    "predict": cmd_predict,
    "eval": cmd_eval,
    "cv": cmd_cv,
    "sweep": cmd_sweep,
    "bench": cmd_bench,
}
