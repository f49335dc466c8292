from __future__ import annotations

from enum import Enum
from typing import Iterable

import numpy as np


class Label(str, Enum):
    """Sample class. Malware is the positive class everywhere."""

    MALWARE = "malware"
    BENIGN = "benign"

    @classmethod
    def parse(cls, value: str | Label, *, fold_case: bool = False) -> Label:
        if isinstance(value, Label):
            return value
        text = value.strip().lower() if fold_case else value
        try:
            return cls(text)
        except ValueError:
            raise ValueError(f"unknown label {value!r} (expected 'malware' or 'benign')") from None


def parse_labels(values: Iterable[str | Label]) -> list[Label]:
    return [Label.parse(v) for v in values]


def is_malware(values: Iterable[str | Label]) -> np.ndarray:
    """Boolean mask, True for malware."""
    return np.array([Label.parse(v) is Label.MALWARE for v in values], dtype=bool)
