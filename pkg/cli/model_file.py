"""Binary model files.

Layout (all little-endian)::

    magic            4s   b"MLYT"
    format_version   u16
    n                u8
    hash_size        u32
    seed             u64
    sparse           u8   0 / 1
    density          f64
    gamma            f64
    c_tradeoff       f64
    support_count    u32  l
    support          l × hash_size f64, row-major
    beta             l × 2 f64, row-major
    crc32            u32  IEEE CRC-32 of every preceding byte

The projection matrix is not stored; it is rebuilt from the featurizer config.
Training bookkeeping (``TrainingMeta``) is not stored either, so saving a
loaded model reproduces the file byte for byte.

Public API
----------
dumps(model)          -> bytes
loads(data)           -> TrainedModel
save_model(model, p)  -> Path
load_model(p)         -> TrainedModel
"""

from __future__ import annotations

import struct
import zlib
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from elm.model import TrainedModel
from errors import ModelFormatError
from featurizer.config import NgramConfig
from kernel.rbf import KernelParams

MAGIC = b"MLYT"
FORMAT_VERSION = 1  # bump if the layout changes

_HEADER = struct.Struct("<4sHBIQBdddI")
_CRC = struct.Struct("<I")
_F64 = np.dtype("<f8")


def dumps(model: TrainedModel) -> bytes:
    cfg = model.featurizer_config
    header = _HEADER.pack(
        MAGIC,
        FORMAT_VERSION,
        cfg.n,
        cfg.hash_size,
        cfg.seed,
        int(cfg.sparse),
        cfg.density,
        model.kernel_params.gamma,
        model.c_tradeoff,
        model.support_count,
    )
    body = header + model.support.astype(_F64).tobytes() + model.beta.astype(_F64).tobytes()
    return body + _CRC.pack(zlib.crc32(body))


def loads(data: bytes) -> TrainedModel:
    if len(data) < _HEADER.size + _CRC.size:
        raise ModelFormatError(f"model file is truncated ({len(data)} bytes)")
    body, (stored_crc,) = data[: -_CRC.size], _CRC.unpack(data[-_CRC.size :])
    if zlib.crc32(body) != stored_crc:
        raise ModelFormatError("model file CRC mismatch (file is corrupted)")

    magic, version, n, hash_size, seed, sparse, density, gamma, c, count = _HEADER.unpack_from(body)
    if magic != MAGIC:
        raise ModelFormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version > FORMAT_VERSION:
        raise ModelFormatError(
            f"model format version {version} is newer than supported version {FORMAT_VERSION}"
        )
    if version < 1:
        raise ModelFormatError(f"invalid model format version {version}")
    if sparse not in (0, 1):
        raise ModelFormatError(f"invalid sparse flag {sparse}")
    if not (c > 0 and np.isfinite(c)):
        raise ModelFormatError(f"invalid C {c}")

    expected = _HEADER.size + count * (hash_size + 2) * _F64.itemsize
    if len(body) != expected:
        raise ModelFormatError(f"model body is {len(body)} bytes, header implies {expected}")

    try:
        config = NgramConfig(n=n, hash_size=hash_size, seed=seed, sparse=bool(sparse), density=density)
        params = KernelParams(gamma=gamma)
    except ValidationError as exc:
        raise ModelFormatError(f"invalid configuration in model header: {exc}") from exc

    offset = _HEADER.size
    support_len = count * hash_size
    support = np.frombuffer(body, dtype=_F64, count=support_len, offset=offset)
    beta = np.frombuffer(
        body, dtype=_F64, count=count * 2, offset=offset + support_len * _F64.itemsize
    )
    return TrainedModel(
        featurizer_config=config,
        kernel_params=params,
        c_tradeoff=c,
        support=support.astype(np.float64).reshape(count, hash_size),
        beta=beta.astype(np.float64).reshape(count, 2),
    )


def save_model(model: TrainedModel, path: str | Path) -> Path:
    path = Path(path)
    path.write_bytes(dumps(model))
    return path


def load_model(path: str | Path) -> TrainedModel:
    return loads(Path(path).read_bytes())
