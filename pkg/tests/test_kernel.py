"""Tests for kernel.rbf — RBF similarities and Gram matrices."""

from __future__ import annotations

import math

import numpy as np
import pytest
from pydantic import ValidationError

from errors import DimensionMismatchError
from featurizer.simhash import FeatureVector
from kernel.rbf import KernelParams, cross_kernel, gram, kernel_row, rbf


def _points(count: int = 6, dim: int = 16, seed: int = 0) -> np.ndarray:
    return np.random.Generator(np.random.PCG64(seed)).standard_normal((count, dim))


class TestKernelParams:
    @pytest.mark.parametrize("gamma", [0.0, -1.0, float("inf"), float("nan")])
    def test_rejects_bad_gamma(self, gamma: float) -> None:
        with pytest.raises(ValidationError):
            KernelParams(gamma=gamma)

    def test_default_gamma(self) -> None:
        assert KernelParams().gamma == 1.0


class TestRbf:
    def test_identical_vectors(self) -> None:
        x = _points(1)[0]
        assert rbf(x, x, KernelParams()) == 1.0

    def test_known_value(self) -> None:
        x = np.array([0.0, 0.0])
        y = np.array([3.0, 4.0])
        assert rbf(x, y, KernelParams(gamma=5.0)) == pytest.approx(math.exp(-25 / 50))

    def test_symmetric_and_bounded(self) -> None:
        X = _points(5)
        params = KernelParams(gamma=2.0)
        for a in X:
            for b in X:
                k = rbf(a, b, params)
                assert 0.0 <= k <= 1.0
                assert k == rbf(b, a, params)

    def test_accepts_feature_vectors(self) -> None:
        a, b = _points(2)
        assert rbf(FeatureVector(a), FeatureVector(b), KernelParams()) == rbf(a, b, KernelParams())

    def test_length_mismatch(self) -> None:
        with pytest.raises(DimensionMismatchError):
            rbf(np.zeros(3), np.zeros(4), KernelParams())

    def test_larger_gamma_is_smoother(self) -> None:
        a, b = _points(2)
        assert rbf(a, b, KernelParams(gamma=0.5)) < rbf(a, b, KernelParams(gamma=4.0))


class TestGram:
    def test_matches_pairwise_rbf(self) -> None:
        X = _points(7)
        params = KernelParams(gamma=3.0)
        g = gram(X, params)
        assert g.dim == 7
        for i in range(7):
            for j in range(7):
                assert g.entries[i, j] == pytest.approx(rbf(X[i], X[j], params), rel=1e-12)

    def test_unit_diagonal_and_symmetry(self) -> None:
        g = gram(_points(9, seed=4), KernelParams())
        np.testing.assert_array_equal(np.diag(g.entries), np.ones(9))
        np.testing.assert_array_equal(g.entries, g.entries.T)

    def test_positive_semidefinite(self) -> None:
        g = gram(_points(12, dim=4, seed=5), KernelParams(gamma=2.0))
        assert np.linalg.eigvalsh(g.entries).min() > -1e-10

    def test_single_vector(self) -> None:
        np.testing.assert_array_equal(gram(_points(1), KernelParams()).entries, [[1.0]])

    def test_rejects_empty(self) -> None:
        with pytest.raises(ValueError):
            gram(np.zeros((0, 4)), KernelParams())


class TestCrossKernel:
    def test_shape_and_values(self) -> None:
        X, S = _points(4, seed=1), _points(3, seed=2)
        params = KernelParams(gamma=4.0)
        K = cross_kernel(X, S, params)
        assert K.shape == (4, 3)
        assert K[2, 1] == pytest.approx(rbf(X[2], S[1], params), rel=1e-12)

    def test_fast_mode_close(self) -> None:
        X, S = _points(20, seed=6), _points(10, seed=7)
        params = KernelParams(gamma=4.0)
        np.testing.assert_allclose(
            cross_kernel(X, S, params, fast=True), cross_kernel(X, S, params), rtol=1e-7, atol=1e-12
        )

    def test_kernel_row(self) -> None:
        S = _points(5, seed=3)
        x = _points(1, seed=8)[0]
        np.testing.assert_allclose(kernel_row(x, S, KernelParams()), cross_kernel(x[None, :], S, KernelParams())[0])

    def test_dimension_mismatch(self) -> None:
        with pytest.raises(DimensionMismatchError):
            cross_kernel(np.zeros((2, 3)), np.zeros((2, 4)), KernelParams())
