from __future__ import annotations

from typing import Sequence

import numpy as np

from labels import Label, is_malware

# Column 0 is the malware channel, column 1 the benign channel.
MALWARE_ROW = (1.0, -1.0)
BENIGN_ROW = (-1.0, 1.0)


def encode_targets(labels: Sequence[str | Label]) -> np.ndarray:
    """``N × 2`` target matrix: ``[1, -1]`` per malware row, ``[-1, 1]`` per benign row."""
    if len(labels) == 0:
        raise ValueError("cannot encode an empty label list")
    mask = is_malware(labels)
    return np.where(mask[:, np.newaxis], MALWARE_ROW, BENIGN_ROW).astype(np.float64)
