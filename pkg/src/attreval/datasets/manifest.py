"""Manifest-driven dataset fetching with a sha256-verified local cache."""

from __future__ import annotations

import hashlib
import json
import shutil
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional


class FetchError(RuntimeError):
    """Download failed or the manifest is malformed."""


class ChecksumError(FetchError):
    """Fetched bytes do not match the manifest digest."""

    def __init__(self, name: str, expected: str, actual: str):
        super().__init__(f"checksum mismatch for {name!r}: expected {expected}, got {actual}")
        self.expected = expected
        self.actual = actual


@dataclass
class DatasetManifestEntry:
    name: str
    url: str
    sha256: str
    target: str
    protected: Optional[str] = None
    kinds: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.sha256) != 64:
            raise FetchError(f"entry {self.name!r}: sha256 must be 64 hex chars")
        self.sha256 = self.sha256.lower()


def load_manifest(path) -> list[DatasetManifestEntry]:
    """Parse a manifest file: a JSON array of entry objects."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, list):
        raise FetchError(f"{path}: manifest must be a JSON array")
    entries = []
    for item in doc:
        try:
            entries.append(DatasetManifestEntry(**item))
        except TypeError as exc:
            raise FetchError(f"{path}: bad manifest entry {item!r}: {exc}") from None
    return entries


def _sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def fetch_dataset(entry: DatasetManifestEntry, cache_dir) -> Path:
    """Return a verified local copy of the entry, downloading if needed.

    Cache layout: <cache-dir>/<name>/<sha256-prefix>.csv. A cached file
    with a matching digest short-circuits the network entirely.
    """
    cache_dir = Path(cache_dir)
    dest = cache_dir / entry.name / f"{entry.sha256[:16]}.csv"
    if dest.exists():
        actual = _sha256_file(dest)
        if actual == entry.sha256:
            return dest
        dest.unlink()  # stale or corrupt cache entry

    dest.parent.mkdir(parents=True, exist_ok=True)
    tmp = dest.with_suffix(".part")
    try:
        with urllib.request.urlopen(entry.url) as resp, open(tmp, "wb") as out:
            shutil.copyfileobj(resp, out)
    except (urllib.error.URLError, OSError) as exc:
        tmp.unlink(missing_ok=True)
        raise FetchError(f"fetch of {entry.url} failed: {exc}") from exc

    actual = _sha256_file(tmp)
    if actual != entry.sha256:
        tmp.unlink(missing_ok=True)
        raise ChecksumError(entry.name, entry.sha256, actual)
    tmp.replace(dest)
    return dest
