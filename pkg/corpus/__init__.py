"""Sample manifests, dex extraction and ground-truth consensus."""

from corpus.consensus import DEFAULT_VENDORS, consensus_label
from corpus.dex import extract_dex
from corpus.manifest import (
    LabeledCorpus,
    SampleRecord,
    load_manifest,
    load_sample_bytes,
    write_manifest,
)

__all__ = [
    "DEFAULT_VENDORS",
    "LabeledCorpus",
    "SampleRecord",
    "consensus_label",
    "extract_dex",
    "load_manifest",
    "load_sample_bytes",
    "write_manifest",
]
