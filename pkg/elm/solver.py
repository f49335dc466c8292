"""Closed-form kernel ELM training.

``beta = (I/C + Omega)^-1 T`` is never formed by inversion: ``I/C + Omega`` is
symmetric positive definite for ``C > 0``, so it is Cholesky-factored and
solved against the two target columns.
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from elm.model import TrainedModel, TrainingMeta
from elm.targets import encode_targets
from errors import TrainingError
from featurizer.config import NgramConfig
from kernel.rbf import DEFAULT_GAMMA, Features, KernelParams, as_matrix, gram
from labels import Label, is_malware

logger = logging.getLogger(__name__)

DEFAULT_C = 200.0
RESIDUAL_TOLERANCE = 1e-8  # per training sample
SUBSAMPLE_ATTEMPTS = 16


def solve_residual(system: np.ndarray, beta: np.ndarray, targets: np.ndarray) -> float:
    return float(np.max(np.abs(system @ beta - targets)))


def _check_inputs(X: np.ndarray, mask: np.ndarray, c: float) -> None:
    if X.shape[0] != mask.size:
        raise TrainingError(f"{X.shape[0]} feature vectors but {mask.size} labels")
    if X.shape[0] < 2:
        raise TrainingError("training needs at least two samples")
    if mask.all() or not mask.any():
        raise TrainingError("training needs both malware and benign samples")
    if not (c > 0 and np.isfinite(c)):
        raise TrainingError(f"C must be a positive finite number, got {c}")
    if not np.isfinite(X).all():
        raise TrainingError("feature matrix contains non-finite values")


def _fit(
    X: np.ndarray,
    labels: Sequence[str | Label],
    params: KernelParams,
    c: float,
    config: NgramConfig,
    meta: TrainingMeta,
) -> TrainedModel:
    mask = is_malware(labels)
    _check_inputs(X, mask, c)
    n = X.shape[0]
    targets = encode_targets(labels)

    system = gram(X, params).entries
    system.flat[:: n + 1] += 1.0 / c
    try:
        factor = cho_factor(system, lower=True, check_finite=False)
    except LinAlgError as exc:
        raise TrainingError(
            f"Cholesky factorization failed for gamma={params.gamma}, C={c}: {exc}"
        ) from exc
    beta = np.ascontiguousarray(cho_solve(factor, targets, check_finite=False))

    residual = solve_residual(system, beta, targets)
    if not np.isfinite(residual) or residual > RESIDUAL_TOLERANCE * n:
        raise TrainingError(f"solve residual {residual:.3e} exceeds {RESIDUAL_TOLERANCE * n:.3e}")
    logger.debug("Solved %dx%d system, residual %.3e", n, n, residual)

    meta = meta.model_copy(
        update={
            "n_malware": int(mask.sum()),
            "n_benign": int((~mask).sum()),
            "residual": residual,
        }
    )
    return TrainedModel(
        featurizer_config=config,
        kernel_params=params,
        c_tradeoff=float(c),
        support=np.array(X, dtype=np.float64, copy=True),
        beta=beta,
        training_meta=meta,
    )


def train(
    features: Features,
    labels: Sequence[str | Label],
    params: KernelParams | None = None,
    c: float = DEFAULT_C,
    config: NgramConfig | None = None,
) -> TrainedModel:
    X = as_matrix(features)
    meta = TrainingMeta(n_samples=X.shape[0])
    return _fit(X, labels, params or KernelParams(), c, config or NgramConfig(), meta)


def draw_subsample(labels: Sequence[str | Label], size: int, seed: int) -> np.ndarray:
    """Sorted distinct indices containing both classes, drawn uniformly."""
    n = len(labels)
    if not 2 <= size <= n:
        raise ValueError(f"subsample size must be in [2, {n}], got {size}")
    mask = is_malware(labels)
    rng = np.random.Generator(np.random.PCG64(seed))
    for attempt in range(1, SUBSAMPLE_ATTEMPTS + 1):
        chosen = np.sort(rng.choice(n, size=size, replace=False))
        picked = mask[chosen]
        if picked.any() and not picked.all():
            return chosen
        logger.debug("Subsample attempt %d drew a single class, redrawing", attempt)
    raise TrainingError(
        f"no two-class subset of size {size} found in {SUBSAMPLE_ATTEMPTS} attempts"
    )


def train_subsampled(
    features: Features,
    labels: Sequence[str | Label],
    params: KernelParams | None = None,
    c: float = DEFAULT_C,
    size: int = 2,
    seed: int = 0,
    config: NgramConfig | None = None,
) -> TrainedModel:
    """Train on ``size`` randomly chosen samples; the kernel is ``size × size``.

    The selection is sorted, so ``size == N`` reproduces :func:`train` exactly.
    """
    X = as_matrix(features)
    if X.shape[0] != len(labels):
        raise TrainingError(f"{X.shape[0]} feature vectors but {len(labels)} labels")
    chosen = draw_subsample(labels, size, seed)
    meta = TrainingMeta(n_samples=X.shape[0], seed=seed, subsample_indices=chosen.tolist())
    return _fit(
        X[chosen],
        [labels[i] for i in chosen],
        params or KernelParams(),
        c,
        config or NgramConfig(),
        meta,
    )


def resolve_subsample_size(spec: float, n: int) -> int:
    """``spec`` <= 1 is a fraction of ``n`` (at least 2); larger values are whole counts <= ``n``."""
    if spec <= 0:
        raise ValueError(f"subsample must be positive, got {spec}")
    if spec <= 1.0:
        return min(n, max(2, int(round(spec * n))))
    if not float(spec).is_integer():
        raise ValueError(f"subsample count must be a whole number, got {spec}")
    if spec > n:
        raise ValueError(f"subsample size l={int(spec)} out of range for {n} training samples")
    return int(spec)


# ── Hyperparameters ─────────────────────────────────────────────────────────


class TrainingParams(BaseModel):
    """Everything a training run needs besides the data."""

    model_config = ConfigDict(frozen=True)

    gamma: float = Field(DEFAULT_GAMMA, gt=0)
    c: float = Field(DEFAULT_C, gt=0)
    subsample: float | None = Field(
        None, description="Kernel subset: fraction of N if <= 1, else an absolute count"
    )
    seed: int = Field(0, ge=0)
    threshold: float = 0.0

    @property
    def kernel_params(self) -> KernelParams:
        return KernelParams(gamma=self.gamma)


def fit(
    features: Features,
    labels: Sequence[str | Label],
    params: TrainingParams,
    config: NgramConfig | None = None,
) -> TrainedModel:
    """Dispatch to :func:`train` or :func:`train_subsampled` per ``params.subsample``."""
    if params.subsample is None:
        return train(features, labels, params.kernel_params, params.c, config)
    size = resolve_subsample_size(params.subsample, len(labels))
    return train_subsampled(
        features, labels, params.kernel_params, params.c, size, params.seed, config
    )
