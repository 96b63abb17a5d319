from __future__ import annotations

import hashlib
import json
import threading
import unicodedata
import warnings
from dataclasses import asdict, dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator

from wxtrans.errors import ConflictError, InvalidArgument, NotFoundError
from wxtrans.metrics.edit import fuzz_ratio

DEFAULT_FUZZY_THRESHOLD = 85


class Status(str, Enum):
    MACHINE = "machine"
    EDITED = "edited"
    REVIEWED = "reviewed"


class Origin(str, Enum):
    ENGINE = "engine"
    MEMORY = "memory"
    HUMAN = "human"


class AlreadyReviewedWarning(UserWarning):
    pass


def utcnow() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


def normalize_source(text: str) -> str:
    """NFC, whitespace collapsed, case kept."""
    return " ".join(unicodedata.normalize("NFC", text).split())


def parse_lang_pair(value) -> tuple[str, str]:
    if isinstance(value, str):
        parts = value.replace("_", "-").split("-")
        if len(parts) != 2:
            raise InvalidArgument(f"bad language pair {value!r}; expected e.g. 'en-es'")
        value = parts
    src, tgt = (str(v).strip().lower() for v in value)
    if not src or not tgt or src == tgt:
        raise InvalidArgument(f"language pair needs two distinct codes, got {src!r}, {tgt!r}")
    return src, tgt


def format_lang_pair(pair: tuple[str, str]) -> str:
    return f"{pair[0]}-{pair[1]}"


@dataclass(frozen=True)
class Segment:
    source: str
    target: str
    lang_pair: tuple[str, str]
    status: Status = Status.MACHINE
    origin: Origin = Origin.ENGINE
    id: str = ""
    created: str = ""
    updated: str = ""
    supersedes: str | None = None
    superseded_by: str | None = None
    reviewer: str | None = None

    def __post_init__(self) -> None:
        if not self.source.strip():
            raise InvalidArgument("segment source must be nonempty")
        object.__setattr__(self, "lang_pair", parse_lang_pair(self.lang_pair))
        object.__setattr__(self, "status", Status(self.status))
        object.__setattr__(self, "origin", Origin(self.origin))

    @property
    def normalized_source(self) -> str:
        return normalize_source(self.source)

    def content_id(self) -> str:
        key = "\x1f".join([self.normalized_source, format_lang_pair(self.lang_pair), self.target])
        return hashlib.sha1(key.encode("utf-8")).hexdigest()[:16]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lang_pair"] = list(self.lang_pair)
        d["status"] = self.status.value
        d["origin"] = self.origin.value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> Segment:
        return cls(**d)


@dataclass
class LookupResult:
    exact: Segment | None = None
    fuzzy: list[tuple[Segment, int]] = field(default_factory=list)


class TranslationMemory:
    """Reviewed-segment store with exact and fuzzy lookup.

    Writers are serialized by a lock; readers take a snapshot of the index
    under the same lock, so a lookup never sees a half-applied insert.
    """

    def __init__(self, segments: Iterable[Segment] = (), clock=utcnow):
        self._lock = threading.RLock()
        self._clock = clock
        self._segments: dict[str, Segment] = {}
        self._order: dict[str, int] = {}
        self._by_source: dict[tuple[str, tuple[str, str]], list[str]] = {}
        for seg in segments:
            self._put(seg)

    def __len__(self) -> int:
        return len(self._segments)

    def __iter__(self) -> Iterator[Segment]:
        with self._lock:
            return iter(list(self._segments.values()))

    def get(self, seg_id: str) -> Segment:
        try:
            return self._segments[seg_id]
        except KeyError:
            raise NotFoundError(f"no segment {seg_id!r}") from None

    def _put(self, seg: Segment) -> None:
        if seg.id not in self._segments:
            self._order[seg.id] = len(self._order)
            self._by_source.setdefault((seg.normalized_source, seg.lang_pair), []).append(seg.id)
        self._segments[seg.id] = seg

    def _live_reviewed(self, key) -> list[Segment]:
        segs = (self._segments[i] for i in self._by_source.get(key, ()))
        return [s for s in segs if s.status is Status.REVIEWED and s.superseded_by is None]

    def insert(self, seg: Segment) -> str:
        """Add ``seg`` and return its id; identical content returns the existing id."""
        with self._lock:
            seg_id = seg.id or seg.content_id()
            if seg_id in self._segments:
                existing = self._segments[seg_id]
                if seg.status is Status.REVIEWED and existing.status is not Status.REVIEWED:
                    self._segments[seg_id] = replace(
                        existing, status=Status.REVIEWED, reviewer=seg.reviewer, updated=self._clock()
                    )
                return seg_id
            key = (seg.normalized_source, seg.lang_pair)
            live = self._live_reviewed(key)
            if live and seg.supersedes is None and any(s.target != seg.target for s in live):
                raise ConflictError(
                    f"reviewed translation already exists for {seg.normalized_source!r}; use revise()"
                )
            now = self._clock()
            new = replace(seg, id=seg_id, created=seg.created or now, updated=seg.updated or now)
            if new.supersedes is not None:
                old = self.get(new.supersedes)
                self._segments[old.id] = replace(old, superseded_by=new.id, updated=now)
            self._put(new)
            return seg_id

    def mark_reviewed(self, seg_id: str, reviewer: str) -> Segment:
        with self._lock:
            seg = self.get(seg_id)
            if seg.status is Status.REVIEWED:
                warnings.warn(f"segment {seg_id} is already reviewed", AlreadyReviewedWarning, stacklevel=2)
                return seg
            key = (seg.normalized_source, seg.lang_pair)
            if any(s.target != seg.target for s in self._live_reviewed(key)):
                raise ConflictError(f"another reviewed translation exists for {seg.normalized_source!r}")
            updated = replace(seg, status=Status.REVIEWED, reviewer=reviewer, updated=self._clock())
            self._segments[seg_id] = updated
            return updated

    def revise(self, seg_id: str, new_target: str, reviewer: str) -> Segment:
        """Supersede a reviewed segment with a new reviewed revision."""
        with self._lock:
            old = self.get(seg_id)
            new = Segment(
                source=old.source,
                target=new_target,
                lang_pair=old.lang_pair,
                status=Status.REVIEWED,
                origin=Origin.HUMAN,
                supersedes=old.id,
                reviewer=reviewer,
            )
            return self.get(self.insert(new))

    def lookup(self, source: str, lang_pair, fuzzy_threshold: float = DEFAULT_FUZZY_THRESHOLD) -> LookupResult:
        if not 0 <= fuzzy_threshold <= 100:
            raise InvalidArgument("fuzzy_threshold must be within [0, 100]")
        pair = parse_lang_pair(lang_pair)
        query = normalize_source(source)
        with self._lock:
            candidates = [
                s
                for s in self._segments.values()
                if s.lang_pair == pair and s.status is Status.REVIEWED and s.superseded_by is None
            ]
            exact_hits = self._live_reviewed((query, pair))
            order = dict(self._order)
        exact = max(exact_hits, key=lambda s: (s.updated, order[s.id])) if exact_hits else None
        scored = [(s, fuzz_ratio(query, s.normalized_source)) for s in candidates]
        fuzzy = [(s, r) for s, r in scored if r >= fuzzy_threshold]
        fuzzy.sort(key=lambda sr: (sr[1], sr[0].updated, order[sr[0].id]), reverse=True)
        return LookupResult(exact, fuzzy)

    def export_jsonl(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for seg in self:
                fh.write(json.dumps(seg.to_dict(), ensure_ascii=False) + "\n")

    @classmethod
    def import_jsonl(cls, path: str | Path) -> TranslationMemory:
        segs = []
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    segs.append(Segment.from_dict(json.loads(line)))
                except (ValueError, TypeError) as exc:
                    raise InvalidArgument(f"{path}:{lineno}: {exc}") from exc
        return cls(segs)


# module-level verbs mirroring the operation names


def tm_insert(tm: TranslationMemory, seg: Segment) -> str:
    return tm.insert(seg)


def tm_lookup(tm: TranslationMemory, source: str, lang_pair, fuzzy_threshold: float = DEFAULT_FUZZY_THRESHOLD) -> LookupResult:
    return tm.lookup(source, lang_pair, fuzzy_threshold)


def mark_reviewed(tm: TranslationMemory, seg_id: str, reviewer: str) -> Segment:
    return tm.mark_reviewed(seg_id, reviewer)
