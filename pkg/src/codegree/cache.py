"""On-disk character-table cache keyed by spec digest (one JSON file per group)."""

from __future__ import annotations

import json
import os
import tempfile
from collections import Counter
from pathlib import Path

from .chartable import CharacterTable, character_table
from .groups import FiniteGroup


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write via a temp file in the same directory, then rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def compact_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


class TableCache:
    """Character tables stored as ``<digest>.json``; ``directory=None`` disables disk use."""

    def __init__(self, directory: str | os.PathLike | None = None):
        self.directory = Path(directory) if directory is not None else None
        self.stats: Counter = Counter()

    def path(self, digest: str) -> Path | None:
        return None if self.directory is None else self.directory / (digest + ".json")

    def load(self, digest: str) -> CharacterTable | None:
        path = self.path(digest)
        if path is None or not path.exists():
            return None
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            return None
        if data.get("digest") != digest:
            return None
        return CharacterTable.from_dict(data)

    def store(self, table: CharacterTable) -> None:
        path = self.path(table.digest) if table.digest else None
        if path is not None:
            write_atomic(path, compact_dumps(table.to_dict()))

    def table(self, G: FiniteGroup, digest: str | None) -> CharacterTable:
        if digest is not None:
            hit = self.load(digest)
            if hit is not None and hit.order == G.order:
                self.stats["table_cache_hits"] += 1
                return hit
        table = character_table(G, digest=digest)
        self.stats["table_computations"] += 1
        self.store(table)
        return table
