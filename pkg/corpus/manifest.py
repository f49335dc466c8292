"""Labeled sample manifests.

A manifest is a UTF-8 CSV file::

    # comment lines and blank lines are ignored
    path,label,family,sha256
    apps/a.apk,malware,fakeinst,<64 hex chars>
    apps/b.apk,Benign,,

``path`` and ``label`` are required columns, ``family`` and ``sha256`` are
optional.  Labels are case-insensitive.  Relative paths resolve against the
manifest's directory when samples are read.

Public API
----------
load_manifest(path)                     -> LabeledCorpus
write_manifest(corpus, path)            -> Path
load_sample_bytes(path, dex)            -> bytes
"""

from __future__ import annotations

import csv
import logging
import re
from pathlib import Path

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from corpus.dex import extract_dex
from errors import ManifestError, NoDexEntriesError
from labels import Label

logger = logging.getLogger(__name__)

REQUIRED_COLUMNS = ("path", "label")
OPTIONAL_COLUMNS = ("family", "sha256")
_SHA256_RE = re.compile(r"^[0-9a-f]{64}$")


# ── Records ─────────────────────────────────────────────────────────────────


class SampleRecord(BaseModel):
    path: str
    label: Label
    family: str | None = None
    sha256: str | None = None

    @field_validator("path")
    @classmethod
    def _check_path(cls, v: str) -> str:
        if not v.strip():
            raise ValueError("path must not be empty")
        return v

    @field_validator("label", mode="before")
    @classmethod
    def _fold_label(cls, v: object) -> Label:
        if isinstance(v, str):
            return Label.parse(v, fold_case=True)
        return v  # type: ignore[return-value]

    @field_validator("family", "sha256", mode="before")
    @classmethod
    def _blank_is_none(cls, v: object) -> object:
        if isinstance(v, str) and not v.strip():
            return None
        return v

    @field_validator("sha256")
    @classmethod
    def _check_sha256(cls, v: str | None) -> str | None:
        if v is not None and not _SHA256_RE.match(v):
            raise ValueError(f"sha256 must be 64 lowercase hex characters, got {v!r}")
        return v


class LabeledCorpus(BaseModel):
    records: list[SampleRecord] = Field(default_factory=list)
    base_dir: Path | None = Field(None, exclude=True, description="Root for relative paths")

    @model_validator(mode="after")
    def _check_unique_paths(self) -> LabeledCorpus:
        seen: set[str] = set()
        for r in self.records:
            if r.path in seen:
                raise ValueError(f"duplicate path {r.path!r}")
            seen.add(r.path)
        return self

    @property
    def counts(self) -> dict[Label, int]:
        out = {Label.MALWARE: 0, Label.BENIGN: 0}
        for r in self.records:
            out[r.label] += 1
        return out

    @property
    def labels(self) -> list[Label]:
        return [r.label for r in self.records]

    @property
    def families(self) -> list[str | None]:
        return [r.family for r in self.records]

    def resolve(self, record: SampleRecord) -> Path:
        path = Path(record.path)
        if not path.is_absolute() and self.base_dir is not None:
            return self.base_dir / path
        return path

    def subset(self, indices: list[int]) -> LabeledCorpus:
        return LabeledCorpus(records=[self.records[i] for i in indices], base_dir=self.base_dir)

    def __len__(self) -> int:
        return len(self.records)


# ── Reading / writing ───────────────────────────────────────────────────────


def _parse_header(fields: list[str], line: int) -> list[str]:
    header = [f.strip().lower() for f in fields]
    missing = [c for c in REQUIRED_COLUMNS if c not in header]
    if missing:
        raise ManifestError(f"header is missing columns {missing}", line)
    unknown = [c for c in header if c not in REQUIRED_COLUMNS + OPTIONAL_COLUMNS]
    if unknown:
        raise ManifestError(f"unknown header columns {unknown}", line)
    if len(set(header)) != len(header):
        raise ManifestError("header repeats a column", line)
    return header


def load_manifest(path: str | Path) -> LabeledCorpus:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    rows = [
        (lineno, line)
        for lineno, line in enumerate(lines, start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not rows:
        raise ManifestError(f"{path} has no header row")

    parsed = csv.reader(line for _, line in rows)
    header = _parse_header(next(parsed), rows[0][0])

    records: list[SampleRecord] = []
    first_seen: dict[str, int] = {}
    for (lineno, _), fields in zip(rows[1:], parsed):
        if len(fields) != len(header):
            raise ManifestError(f"expected {len(header)} fields, got {len(fields)}", lineno)
        values = {name: value.strip() for name, value in zip(header, fields)}
        try:
            record = SampleRecord(**values)
        except ValidationError as exc:
            message = exc.errors()[0].get("msg", str(exc))
            raise ManifestError(message, lineno) from exc
        if record.path in first_seen:
            raise ManifestError(
                f"duplicate path {record.path!r} (first seen on line {first_seen[record.path]})",
                lineno,
            )
        first_seen[record.path] = lineno
        records.append(record)

    corpus = LabeledCorpus(records=records, base_dir=path.parent)
    logger.info(
        "Loaded %s: %d malware, %d benign",
        path,
        corpus.counts[Label.MALWARE],
        corpus.counts[Label.BENIGN],
    )
    return corpus


def write_manifest(corpus: LabeledCorpus, path: str | Path) -> Path:
    """Write ``corpus`` so that :func:`load_manifest` reads it back unchanged."""
    path = Path(path)
    columns = list(REQUIRED_COLUMNS) + [
        c for c in OPTIONAL_COLUMNS if any(getattr(r, c) is not None for r in corpus.records)
    ]
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for r in corpus.records:
            row = {"path": r.path, "label": r.label.value, "family": r.family, "sha256": r.sha256}
            writer.writerow(["" if row[c] is None else row[c] for c in columns])
    return path


# ── Sample bytes ────────────────────────────────────────────────────────────


def load_sample_bytes(path: str | Path, dex: bool = False) -> bytes:
    """Read a sample; in dex mode hash the app's dex payload, else the whole file.

    Containers without dex entries fall back to their full bytes.
    """
    data = Path(path).read_bytes()
    if not dex:
        return data
    try:
        return extract_dex(data)
    except NoDexEntriesError:
        logger.warning("%s has no classes*.dex entries; hashing the whole container", path)
        return data
