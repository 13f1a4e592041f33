"""On-disk cache of covering tables.

Entries are JSON files written to a temporary name and moved into place with
``os.replace``, so a reader sees either the old file, the new file or
nothing.  Anything unreadable or inconsistent is reported as a miss.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .dimension import CoveringTable

log = logging.getLogger(__name__)

CACHE_ENV = "SPECTRA_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "spectra"


@dataclass(frozen=True)
class CacheKey:
    config_hash: str
    t: float
    r: int
    budget: int

    def to_json(self) -> dict:
        return {"config_hash": self.config_hash, "t": repr(float(self.t)), "r": self.r, "budget": self.budget}

    def filename(self) -> str:
        tag = hashlib.sha256(json.dumps(self.to_json(), sort_keys=True).encode()).hexdigest()[:24]
        return f"{self.config_hash[:16]}-{tag}.json"


def _checksum(payload: dict) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


def cache_store(key: CacheKey, table: CoveringTable, directory: Path | None = None) -> Path:
    directory = Path(directory) if directory is not None else default_cache_dir()
    directory.mkdir(parents=True, exist_ok=True)
    payload = table.to_json()
    doc = {"key": key.to_json(), "table": payload, "checksum": _checksum(payload)}
    target = directory / key.filename()
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(doc, fh, sort_keys=True)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, target)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
    return target


def cache_load(key: CacheKey, directory: Path | None = None) -> CoveringTable | None:
    """The stored table for `key`, or None on a miss (including corrupt entries)."""
    directory = Path(directory) if directory is not None else default_cache_dir()
    path = directory / key.filename()
    if not path.exists():
        return None
    try:
        doc = json.loads(path.read_text())
        if doc["key"] != key.to_json():
            raise ValueError("key mismatch")
        payload = doc["table"]
        if doc["checksum"] != _checksum(payload):
            raise ValueError("checksum mismatch")
        return CoveringTable.from_json(payload)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        log.warning("ignoring unreadable cache entry %s: %s", path, exc)
        return None
