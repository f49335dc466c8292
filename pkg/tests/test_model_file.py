"""Tests for cli.model_file — binary model persistence."""

from __future__ import annotations

import struct
import zlib
from pathlib import Path

import numpy as np
import pytest

from cli.model_file import FORMAT_VERSION, MAGIC, dumps, load_model, loads, save_model
from elm.solver import train
from errors import ModelFormatError
from featurizer.config import NgramConfig
from kernel.rbf import KernelParams
from labels import Label


def _make_model(sparse: bool = False):
    rng = np.random.Generator(np.random.PCG64(0))
    X = rng.standard_normal((20, 16))
    labels = [Label.MALWARE if i % 2 else Label.BENIGN for i in range(20)]
    config = NgramConfig(n=2, hash_size=16, seed=2**63 + 5, sparse=sparse, density=0.5)
    return train(X, labels, KernelParams(gamma=3.5), c=42.0, config=config)


def _recrc(body: bytes) -> bytes:
    return body + struct.pack("<I", zlib.crc32(body))


class TestRoundTrip:
    def test_fields_survive(self) -> None:
        model = _make_model()
        loaded = loads(dumps(model))
        assert loaded.featurizer_config == model.featurizer_config
        assert loaded.kernel_params == model.kernel_params
        assert loaded.c_tradeoff == 42.0
        np.testing.assert_array_equal(loaded.beta, model.beta)
        np.testing.assert_array_equal(loaded.support, model.support)

    def test_save_load_save_is_byte_identical(self, tmp_path: Path) -> None:
        first = save_model(_make_model(sparse=True), tmp_path / "a.mlyt")
        second = save_model(load_model(first), tmp_path / "b.mlyt")
        assert first.read_bytes() == second.read_bytes()

    def test_layout(self) -> None:
        data = dumps(_make_model())
        assert data[:4] == MAGIC
        assert struct.unpack_from("<H", data, 4)[0] == FORMAT_VERSION
        header = struct.calcsize("<4sHBIQBdddI")
        assert len(data) == header + 20 * (16 + 2) * 8 + 4

    def test_arrays_are_c_ordered(self) -> None:
        model = _make_model()
        loaded = loads(dumps(model))
        for arr in (model.beta, model.support, loaded.beta, loaded.support):
            assert arr.flags.c_contiguous

    def test_loaded_model_predicts_identically(self) -> None:
        from elm.model import predict_batch

        model = _make_model()
        X = np.random.Generator(np.random.PCG64(9)).standard_normal((5, 16))
        for a, b in zip(predict_batch(model, X), predict_batch(loads(dumps(model)), X)):
            np.testing.assert_array_equal(a, b)


class TestCorruption:
    def test_flipped_byte_fails_crc(self) -> None:
        data = bytearray(dumps(_make_model()))
        data[100] ^= 0xFF
        with pytest.raises(ModelFormatError, match="CRC"):
            loads(bytes(data))

    def test_truncated(self) -> None:
        with pytest.raises(ModelFormatError):
            loads(dumps(_make_model())[:10])

    def test_bad_magic(self) -> None:
        data = dumps(_make_model())
        with pytest.raises(ModelFormatError, match="magic"):
            loads(_recrc(b"XXXX" + data[4:-4]))

    def test_future_version_rejected(self) -> None:
        data = dumps(_make_model())
        body = data[:4] + struct.pack("<H", FORMAT_VERSION + 1) + data[6:-4]
        with pytest.raises(ModelFormatError, match="newer"):
            loads(_recrc(body))

    def test_body_length_checked(self) -> None:
        data = dumps(_make_model())
        with pytest.raises(ModelFormatError, match="header implies"):
            loads(_recrc(data[:-4] + b"\x00" * 8))

    def test_invalid_header_config(self) -> None:
        data = dumps(_make_model())
        # n lives right after magic and version
        body = data[:6] + bytes([9]) + data[7:-4]
        with pytest.raises(ModelFormatError, match="invalid configuration"):
            loads(_recrc(body))

    def test_is_value_error(self) -> None:
        with pytest.raises(ValueError):
            loads(b"")
