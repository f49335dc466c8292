from __future__ import annotations

from typing import Iterable, Mapping

# Vendors whose verdicts decide ground truth when a report lists more engines.
DEFAULT_VENDORS = (
    "Kaspersky",
    "Symantec",
    "ESET-NOD32",
    "Avast",
    "McAfee",
    "AVG",
    "Avira",
    "Microsoft",
    "BitDefender",
    "Panda",
    "F-Secure",
    "Malwarebytes",
    "TrendMicro",
    "Comodo",
    "VIPRE",
    "AVware",
    "Ad-Aware",
    "Sophos",
    "Qihoo-360",
)


def consensus_label(
    vendor_detections: Mapping[str, bool],
    threshold: int = 1,
    vendors: Iterable[str] | None = None,
) -> bool:
    """True iff at least ``threshold`` vendors flag the sample.

    ``vendors`` restricts the count to those engines (case-insensitive).
    """
    if threshold < 1:
        raise ValueError(f"threshold must be >= 1, got {threshold}")
    allowed = None if vendors is None else {v.casefold() for v in vendors}
    positives = sum(
        1
        for vendor, detected in vendor_detections.items()
        if detected and (allowed is None or vendor.casefold() in allowed)
    )
    return positives >= threshold
