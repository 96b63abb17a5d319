"""Namespaced JSON key-value persistence.

Every mutation goes through one lock, and multi-step updates run inside
:meth:`KVStore.transaction`, which is atomic for both backends.
"""

from __future__ import annotations

import json
import sqlite3
import threading
from abc import ABC, abstractmethod
from contextlib import contextmanager
from copy import deepcopy
from pathlib import Path
from typing import Any, Iterator


class KVStore(ABC):
    def __init__(self) -> None:
        self._lock = threading.RLock()

    @abstractmethod
    def get(self, ns: str, key: str, default: Any = None) -> Any: ...

    @abstractmethod
    def put(self, ns: str, key: str, value: Any) -> None: ...

    @abstractmethod
    def delete(self, ns: str, key: str) -> None: ...

    @abstractmethod
    def items(self, ns: str) -> list[tuple[str, Any]]:
        """All entries of a namespace in key order."""

    @contextmanager
    def transaction(self) -> Iterator[KVStore]:
        with self._lock:
            self._begin()
            try:
                yield self
            except BaseException:
                self._rollback()
                raise
            else:
                self._commit()

    def _begin(self) -> None:
        pass

    def _commit(self) -> None:
        pass

    def _rollback(self) -> None:
        pass

    def close(self) -> None:
        pass


class MemoryStore(KVStore):
    def __init__(self) -> None:
        super().__init__()
        self._data: dict[str, dict[str, Any]] = {}
        self._snapshot: dict | None = None
        self._depth = 0

    def get(self, ns, key, default=None):
        with self._lock:
            return deepcopy(self._data.get(ns, {}).get(key, default))

    def put(self, ns, key, value):
        with self._lock:
            self._data.setdefault(ns, {})[key] = deepcopy(value)

    def delete(self, ns, key):
        with self._lock:
            self._data.get(ns, {}).pop(key, None)

    def items(self, ns):
        with self._lock:
            return [(k, deepcopy(v)) for k, v in sorted(self._data.get(ns, {}).items())]

    def _begin(self):
        if self._depth == 0:
            self._snapshot = deepcopy(self._data)
        self._depth += 1

    def _commit(self):
        self._depth -= 1
        if self._depth == 0:
            self._snapshot = None

    def _rollback(self):
        self._depth -= 1
        if self._depth == 0 and self._snapshot is not None:
            self._data = self._snapshot
            self._snapshot = None


class SqliteStore(KVStore):
    """File-backed store; survives process restarts."""

    def __init__(self, path: str | Path) -> None:
        super().__init__()
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._conn = sqlite3.connect(str(self.path), check_same_thread=False, isolation_level=None)
        self._conn.execute("PRAGMA journal_mode=WAL")
        self._conn.execute("PRAGMA synchronous=FULL")
        self._conn.execute(
            "CREATE TABLE IF NOT EXISTS kv (ns TEXT NOT NULL, key TEXT NOT NULL, value TEXT NOT NULL, PRIMARY KEY (ns, key))"
        )
        self._depth = 0

    def get(self, ns, key, default=None):
        with self._lock:
            row = self._conn.execute("SELECT value FROM kv WHERE ns=? AND key=?", (ns, key)).fetchone()
        return default if row is None else json.loads(row[0])

    def put(self, ns, key, value):
        blob = json.dumps(value, ensure_ascii=False, sort_keys=True)
        with self._lock:
            self._conn.execute("INSERT OR REPLACE INTO kv (ns, key, value) VALUES (?, ?, ?)", (ns, key, blob))

    def delete(self, ns, key):
        with self._lock:
            self._conn.execute("DELETE FROM kv WHERE ns=? AND key=?", (ns, key))

    def items(self, ns):
        with self._lock:
            rows = self._conn.execute("SELECT key, value FROM kv WHERE ns=? ORDER BY key", (ns,)).fetchall()
        return [(k, json.loads(v)) for k, v in rows]

    def _begin(self):
        if self._depth == 0:
            self._conn.execute("BEGIN IMMEDIATE")
        self._depth += 1

    def _commit(self):
        self._depth -= 1
        if self._depth == 0:
            self._conn.execute("COMMIT")

    def _rollback(self):
        self._depth -= 1
        if self._depth == 0:
            self._conn.execute("ROLLBACK")

    def close(self) -> None:
        with self._lock:
            self._conn.close()


def open_store(spec: str | Path | None) -> KVStore:
    """``None`` or ``":memory:"`` gives a memory store, anything else a sqlite file."""
    if spec is None or str(spec) == ":memory:":
        return MemoryStore()
    return SqliteStore(spec)
