"""
On-disk coefficient cache: one YAML document per table, manifest first.

Layout (``yaml.safe_dump_all`` with sorted keys)::

    kind: manifest            # document 0
    version: 1
    documents: [{key: even/2,2,1, entries: 6, sha256: ...}, ...]
    ---
    kind: even                # one per (kind, j, k, n)
    j: 2
    k: 2
    n: 1
    lambda: 1
    entries: {"0,0,1": "18/1", ...}

Checksums cover the canonical dump of each table document, so any edit to a
stored table is caught on load.
"""

from __future__ import annotations

import hashlib
import logging
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable

import yaml

from .coeffs import (
    KINDS,
    CoeffDomainError,
    CoeffQuery,
    CoeffTable,
    coeff_table,
    index_domain,
    queries_up_to,
    seed_table,
)
from .exactnum import format_ratio, parse_ratio

_logger = logging.getLogger(__name__)

CACHE_VERSION = 1


class CacheCorruptError(ValueError):
    """A cache document failed validation; ``key`` names the offending document."""

    def __init__(self, key: str, reason: str) -> None:
        super().__init__(f"corrupt cache document {key!r}: {reason}")
        self.key = key
        self.reason = reason


@dataclass(frozen=True)
class ManifestEntry:
    key: str
    entries: int
    sha256: str


def table_key(kind: str, q: CoeffQuery) -> str:
    return f"{kind}/{q.j},{q.k},{q.n}"


def table_document(table: CoeffTable) -> dict[str, Any]:
    q = table.query
    return {
        "kind": table.kind,
        "j": q.j,
        "k": q.k,
        "n": q.n,
        "lambda": table.lam,
        "entries": {f"{a},{b},{c}": format_ratio(v) for (a, b, c), v in table.entries.items()},
    }


def _checksum(doc: dict[str, Any]) -> str:
    text = yaml.safe_dump(doc, sort_keys=True, default_flow_style=False)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _parse_index(key: str, raw: Any) -> tuple[int, int, int]:
    parts = str(raw).split(",")
    if len(parts) != 3:
        raise CacheCorruptError(key, f"entry key {raw!r} is not 'a,b,c'")
    try:
        a, b, c = (int(p) for p in parts)
    except ValueError as exc:
        raise CacheCorruptError(key, f"entry key {raw!r} is not 'a,b,c'") from exc
    return a, b, c


def table_from_document(doc: Any) -> CoeffTable:
    """Rebuild a table, rejecting anything that does not cover the exact index domain."""
    if not isinstance(doc, dict):
        raise CacheCorruptError("?", f"document is not a mapping: {doc!r}")
    key = f"{doc.get('kind')}/{doc.get('j')},{doc.get('k')},{doc.get('n')}"
    if doc.get("kind") not in KINDS:
        raise CacheCorruptError(key, f"unknown kind {doc.get('kind')!r}")
    try:
        q = CoeffQuery(int(doc["j"]), int(doc["k"]), int(doc["n"]))
    except (KeyError, TypeError, ValueError, CoeffDomainError) as exc:
        raise CacheCorruptError(key, f"bad query: {exc}") from exc
    if doc.get("lambda") != q.lam:
        raise CacheCorruptError(key, f"lambda {doc.get('lambda')!r} != {q.lam}")
    raw_entries = doc.get("entries")
    if not isinstance(raw_entries, dict):
        raise CacheCorruptError(key, "entries missing")
    entries = {}
    for raw_idx, raw_value in raw_entries.items():
        idx = _parse_index(key, raw_idx)
        try:
            entries[idx] = parse_ratio(raw_value)
        except ValueError as exc:
            raise CacheCorruptError(key, f"entry {raw_idx!r}: {exc}") from exc
    domain = index_domain(q)
    if set(entries) != set(domain):
        raise CacheCorruptError(key, "entries do not cover the index domain")
    return CoeffTable(
        query=q,
        kind=doc["kind"],
        entries={idx: entries[idx] for idx in domain},
        lam=q.lam,
    )


def dump_cache(tables: Iterable[CoeffTable]) -> str:
    docs = [table_document(t) for t in sorted(tables, key=lambda t: (t.kind, t.query))]
    manifest = {
        "kind": "manifest",
        "version": CACHE_VERSION,
        "documents": [
            {
                "key": f"{d['kind']}/{d['j']},{d['k']},{d['n']}",
                "entries": len(d["entries"]),
                "sha256": _checksum(d),
            }
            for d in docs
        ],
    }
    return yaml.safe_dump_all([manifest, *docs], sort_keys=True, default_flow_style=False)


class CoeffCache:
    """Cache file at a single path; tables in memory are always rebuilt from scratch."""

    def __init__(self, path: Path):
        self.path = Path(path).resolve()

    def build(self, max_k: int, method: str = "closed") -> list[ManifestEntry]:
        """Write every even and odd table with ``k <= max_k`` (atomic replace)."""
        if max_k < 0:
            raise ValueError(f"max_k must be >= 0, got {max_k!r}")
        tables = [coeff_table(q, kind, method) for q in queries_up_to(max_k) for kind in KINDS]
        text = dump_cache(tables)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=".rotinv-", suffix=".yaml")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
            os.replace(tmp, self.path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
        _logger.info("wrote %d tables to %s", len(tables), self.path)
        return self.inspect()

    def _documents(self) -> list[Any]:
        if not self.path.is_file():
            raise FileNotFoundError(f"no cache at {self.path}")
        text = self.path.read_text(encoding="utf-8")
        try:
            return [d for d in yaml.safe_load_all(text) if d is not None]
        except yaml.YAMLError as exc:
            raise CacheCorruptError("manifest", f"not valid YAML: {exc}") from exc

    def _manifest(self, docs: list[Any]) -> list[ManifestEntry]:
        if not docs:
            return []
        head = docs[0]
        if not isinstance(head, dict) or head.get("kind") != "manifest":
            raise CacheCorruptError("manifest", "first document is not a manifest")
        if head.get("version") != CACHE_VERSION:
            raise CacheCorruptError("manifest", f"unsupported version {head.get('version')!r}")
        try:
            return [
                ManifestEntry(str(e["key"]), int(e["entries"]), str(e["sha256"]))
                for e in head.get("documents") or []
            ]
        except (KeyError, TypeError, ValueError) as exc:
            raise CacheCorruptError("manifest", f"malformed entry: {exc}") from exc

    def inspect(self) -> list[ManifestEntry]:
        """Manifest entries; an empty file has an empty manifest."""
        return self._manifest(self._documents())

    def load(self) -> list[CoeffTable]:
        """All tables, each checked against its manifest checksum and index domain."""
        docs = self._documents()
        manifest = self._manifest(docs)
        bodies = docs[1:]
        if len(bodies) != len(manifest):
            raise CacheCorruptError(
                "manifest", f"lists {len(manifest)} documents, file has {len(bodies)}"
            )
        tables: list[CoeffTable] = []
        for entry, doc in zip(manifest, bodies):
            if not isinstance(doc, dict):
                raise CacheCorruptError(entry.key, "document is not a mapping")
            if _checksum(doc) != entry.sha256:
                raise CacheCorruptError(entry.key, "checksum mismatch")
            table = table_from_document(doc)
            if table_key(table.kind, table.query) != entry.key:
                raise CacheCorruptError(entry.key, "document does not match its manifest key")
            tables.append(table)
        _logger.debug("loaded %d tables from %s", len(tables), self.path)
        return tables

    def seed_memo(self) -> int:
        """Preload the table memo from the cache; returns the number of tables."""
        tables = self.load()
        seed_table(tables)
        return len(tables)
