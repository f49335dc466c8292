"""Byte n-gram tf-simhash featurizer."""

from featurizer.config import NgramConfig
from featurizer.ngrams import TfVector, extract_ngram_tf
from featurizer.projection import (
    ProjectionMatrix,
    build_projection,
    gaussian_directions,
    get_projection,
)
from featurizer.simhash import (
    FeatureVector,
    featurize,
    featurize_many,
    stack,
    standardize,
    tf_simhash,
)

__all__ = [
    "FeatureVector",
    "NgramConfig",
    "ProjectionMatrix",
    "TfVector",
    "build_projection",
    "extract_ngram_tf",
    "featurize",
    "featurize_many",
    "gaussian_directions",
    "get_projection",
    "stack",
    "standardize",
    "tf_simhash",
]
