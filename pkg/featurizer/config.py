from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# ── Defaults ────────────────────────────────────────────────────────────────

DEFAULT_NGRAM = 2
DEFAULT_HASH_SIZE = 1024
DEFAULT_SPARSE_HASH_SIZE = 3000
DEFAULT_DENSITY = 0.01
MAX_NGRAM = 3  # 256**4 rows does not fit a projection matrix
MAX_SEED = 2**64 - 1


class NgramConfig(BaseModel):
    """Featurizer settings; together with ``seed`` they pin the projection matrix."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(DEFAULT_NGRAM, description="n-gram order in bytes")
    hash_size: int = Field(DEFAULT_HASH_SIZE, description="Output dimension of the tf-simhash")
    seed: int = Field(0, description="64-bit seed of the projection generator")
    sparse: bool = False
    density: float = Field(DEFAULT_DENSITY, description="Nonzero fraction per row (sparse only)")

    @field_validator("n")
    @classmethod
    def _check_n(cls, v: int) -> int:
        if not 1 <= v <= MAX_NGRAM:
            raise ValueError(f"n must be in [1, {MAX_NGRAM}], got {v}")
        return v

    @field_validator("hash_size")
    @classmethod
    def _check_hash_size(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"hash_size must be >= 1, got {v}")
        return v

    @field_validator("seed")
    @classmethod
    def _check_seed(cls, v: int) -> int:
        if not 0 <= v <= MAX_SEED:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {v}")
        return v

    @field_validator("density")
    @classmethod
    def _check_density(cls, v: float) -> float:
        if not 0.0 < v <= 1.0:
            raise ValueError(f"density must be in (0, 1], got {v}")
        return v

    @model_validator(mode="after")
    def _check_sparse_rows(self) -> NgramConfig:
        if self.sparse and self.nonzeros_per_row < 1:
            raise ValueError(
                f"density {self.density} leaves no nonzero entry in a row of {self.hash_size}"
            )
        return self

    @property
    def dictionary_size(self) -> int:
        return 256**self.n

    @property
    def nonzeros_per_row(self) -> int:
        """Nonzeros in each projection row: ``hash_size`` when dense."""
        if not self.sparse:
            return self.hash_size
        return int(round(self.density * self.hash_size))

    @classmethod
    def sparse_default(cls, seed: int = 0) -> NgramConfig:
        return cls(hash_size=DEFAULT_SPARSE_HASH_SIZE, seed=seed, sparse=True)
