"""Dalvik payload extraction from app containers (ZIP archives)."""

from __future__ import annotations

import io
import logging
import re
import zipfile
import zlib

from errors import NoDexEntriesError, NotAZipError, UnsupportedCompressionError

logger = logging.getLogger(__name__)

# Root-level only: "classes.dex", "classes2.dex", ...
DEX_ENTRY_RE = re.compile(r"classes\d*\.dex")
SUPPORTED_METHODS = {zipfile.ZIP_STORED: "stored", zipfile.ZIP_DEFLATED: "deflate"}


def dex_entries(archive: zipfile.ZipFile) -> list[zipfile.ZipInfo]:
    """Matching entries sorted by name, independent of their physical order."""
    entries = [i for i in archive.infolist() if DEX_ENTRY_RE.fullmatch(i.filename)]
    return sorted(entries, key=lambda i: i.filename)


def extract_dex(container: bytes) -> bytes:
    """Concatenated, decompressed ``classes*.dex`` entries in ascending name order."""
    try:
        archive = zipfile.ZipFile(io.BytesIO(container))
    except zipfile.BadZipFile as exc:
        raise NotAZipError(f"not a ZIP container: {exc}") from exc

    with archive:
        entries = dex_entries(archive)
        if not entries:
            raise NoDexEntriesError("container has no root-level classes*.dex entry")
        for info in entries:
            if info.compress_type not in SUPPORTED_METHODS:
                raise UnsupportedCompressionError(
                    f"{info.filename} uses ZIP method {info.compress_type}; "
                    f"only {sorted(SUPPORTED_METHODS.values())} are supported"
                )
        try:
            payload = b"".join(archive.read(info) for info in entries)
        except (zipfile.BadZipFile, zlib.error, EOFError) as exc:
            raise NotAZipError(f"corrupt ZIP entry: {exc}") from exc
        except RuntimeError as exc:
            # zipfile raises RuntimeError for encrypted entries
            raise NotAZipError(f"unreadable ZIP entry: {exc}") from exc

    logger.debug("Extracted %d dex entries (%d bytes)", len(entries), len(payload))
    return payload
