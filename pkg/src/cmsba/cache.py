"""On-disk cache of constructed BA functions, one JSON file per (case, n, m)."""

from __future__ import annotations

import os
from pathlib import Path

from .ba_common import BAResult
from .serialize import ba_from_json, ba_to_json

ENV_VAR = "BA_CACHE_DIR"


def cache_dir(explicit: str | None = None) -> Path | None:
    d = explicit or os.environ.get(ENV_VAR)
    return Path(d) if d else None


def cache_path(directory: Path, case: str, n: int, m: int) -> Path:
    return directory / f"{case}_{n}_{m}.json"


def load(directory: Path | None, case: str, n: int, m: int) -> BAResult | None:
    if directory is None:
        return None
    path = cache_path(directory, case, n, m)
    if not path.is_file():
        return None
    return ba_from_json(path.read_text())


def store(directory: Path | None, ba: BAResult) -> Path | None:
    if directory is None:
        return None
    directory.mkdir(parents=True, exist_ok=True)
    path = cache_path(directory, ba.case, ba.n, ba.m)
    path.write_text(ba_to_json(ba))
    return path
