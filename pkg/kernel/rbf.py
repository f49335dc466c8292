"""RBF similarities between standardized feature vectors.

    K(x, y) = exp(-||x - y||^2 / (2 * gamma^2))

Squared distances are accumulated from direct differences (``scipy``'s
``sqeuclidean``), which stays accurate for near-identical vectors.  The
``fast`` option of :func:`cross_kernel` switches to the expanded
``|x|^2 + |y|^2 - 2 x.y`` form via scikit-learn; it is quicker on large
batches but loses precision when ``x`` and ``y`` nearly coincide (values close
to 1 may be off by ~1e-8 relative).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.spatial.distance import cdist, pdist, squareform
from sklearn.metrics.pairwise import euclidean_distances

from errors import DimensionMismatchError
from featurizer.simhash import FeatureVector, stack

DEFAULT_GAMMA = 1.0

Features = Sequence[FeatureVector] | np.ndarray


class KernelParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    gamma: float = Field(DEFAULT_GAMMA, description="Spread of the RBF kernel")

    @field_validator("gamma")
    @classmethod
    def _check_gamma(cls, v: float) -> float:
        if not (v > 0 and np.isfinite(v)):
            raise ValueError(f"gamma must be a positive finite number, got {v}")
        return v

    def from_sq_distance(self, d2: np.ndarray | float) -> np.ndarray | float:
        return np.exp(-np.asarray(d2, dtype=np.float64) / (2.0 * self.gamma**2))


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric ``N × N`` kernel matrix over a feature set."""

    entries: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])


def as_matrix(features: Features) -> np.ndarray:
    if isinstance(features, np.ndarray):
        if features.ndim != 2:
            raise DimensionMismatchError(f"expected a 2-D feature matrix, got shape {features.shape}")
        return features.astype(np.float64, copy=False)
    return stack(features)


def _values(x: FeatureVector | np.ndarray) -> np.ndarray:
    return x.values if isinstance(x, FeatureVector) else np.asarray(x, dtype=np.float64)


def rbf(x: FeatureVector | np.ndarray, y: FeatureVector | np.ndarray, params: KernelParams) -> float:
    xv, yv = _values(x), _values(y)
    if xv.shape != yv.shape:
        raise DimensionMismatchError(f"vector lengths differ: {xv.size} vs {yv.size}")
    diff = xv - yv
    return float(params.from_sq_distance(np.dot(diff, diff)))


def gram(features: Features, params: KernelParams) -> GramMatrix:
    """Upper triangle computed once, mirrored; the diagonal is exactly 1."""
    X = as_matrix(features)
    if X.shape[0] < 1:
        raise ValueError("gram needs at least one feature vector")
    entries = squareform(params.from_sq_distance(pdist(X, "sqeuclidean")))
    np.fill_diagonal(entries, 1.0)
    return GramMatrix(entries=entries)


def cross_kernel(X: Features, support: Features, params: KernelParams, fast: bool = False) -> np.ndarray:
    """``len(X) × len(support)`` kernel rows."""
    Xm, Sm = as_matrix(X), as_matrix(support)
    if Xm.shape[1] != Sm.shape[1]:
        raise DimensionMismatchError(
            f"feature length {Xm.shape[1]} does not match support length {Sm.shape[1]}"
        )
    if fast:
        d2 = np.maximum(euclidean_distances(Xm, Sm, squared=True), 0.0)
    else:
        d2 = cdist(Xm, Sm, "sqeuclidean")
    return params.from_sq_distance(d2)


def kernel_row(x: FeatureVector | np.ndarray, support: Features, params: KernelParams) -> np.ndarray:
    return cross_kernel(_values(x)[np.newaxis, :], support, params)[0]
