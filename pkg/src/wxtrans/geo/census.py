"""Language-spoken-at-home tables and the national priority-language filter."""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Mapping, TextIO

from wxtrans.errors import InvalidArgument

LANGUAGE_HEADER = ["geo_id", "geo_level", "language", "total_speakers", "lep_speakers"]

PRIORITY_RATIO = 0.35
PRIORITY_MIN_LEP = 200_000


class GeoLevel(str, Enum):
    COUNTY = "county"
    TRACT = "tract"


class ParseError(InvalidArgument):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class UndefinedRatioWarning(UserWarning):
    pass


@dataclass(frozen=True)
class LepRecord:
    geo_id: str
    geo_level: GeoLevel
    language: str
    total_speakers: int
    lep_speakers: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "geo_level", GeoLevel(self.geo_level))
        if not self.geo_id or not self.language:
            raise InvalidArgument("geo_id and language must be nonempty")
        if not 0 <= self.lep_speakers <= self.total_speakers:
            raise InvalidArgument(
                f"{self.geo_id}/{self.language}: need 0 <= lep ({self.lep_speakers}) <= total ({self.total_speakers})"
            )


@dataclass(frozen=True)
class RejectedRow:
    line: int
    reason: str
    row: tuple[str, ...]


@dataclass
class LanguageTable:
    records: list[LepRecord] = field(default_factory=list)
    rejected: list[RejectedRow] = field(default_factory=list)

    def __iter__(self) -> Iterator[LepRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def level(self, level: GeoLevel | str) -> list[LepRecord]:
        lv = GeoLevel(level)
        return [r for r in self.records if r.geo_level is lv]


def _count(text: str, line: int, name: str) -> int:
    try:
        value = int(text.strip().replace(",", "").replace("_", ""))
    except ValueError:
        raise ParseError(line, f"{name} {text!r} is not an integer") from None
    if value < 0:
        raise ParseError(line, f"{name} is negative")
    return value


def _open_text(source) -> TextIO:
    if isinstance(source, (str, Path)):
        return open(source, encoding="utf-8", newline="")
    return source


def load_language_table(source: str | Path | TextIO) -> LanguageTable:
    """Parse ``geo_id,geo_level,language,total_speakers,lep_speakers`` rows.

    Rows with lep > total are rejected with a diagnostic and skipped; any
    other malformed row aborts with its line number.
    """
    fh = _open_text(source)
    try:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != LANGUAGE_HEADER:
            raise ParseError(1, f"header must be {','.join(LANGUAGE_HEADER)}")
        table = LanguageTable()
        seen: dict[tuple[str, str], int] = {}
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(LANGUAGE_HEADER):
                raise ParseError(line, f"expected {len(LANGUAGE_HEADER)} fields, got {len(row)}")
            geo_id, level, language = (c.strip() for c in row[:3])
            if not geo_id or not language:
                raise ParseError(line, "geo_id and language must be nonempty")
            try:
                level = GeoLevel(level)
            except ValueError:
                raise ParseError(line, f"geo_level {level!r} is not county or tract") from None
            total = _count(row[3], line, "total_speakers")
            lep = _count(row[4], line, "lep_speakers")
            key = (geo_id, language)
            if key in seen:
                raise ParseError(line, f"duplicate row for {geo_id}/{language} (first on line {seen[key]})")
            seen[key] = line
            if lep > total:
                table.rejected.append(RejectedRow(line, f"lep_speakers {lep} > total_speakers {total}", tuple(row)))
                continue
            table.records.append(LepRecord(geo_id, level, language, total, lep))
        return table
    finally:
        if fh is not source:
            fh.close()


def parse_language_table(text: str) -> LanguageTable:
    return load_language_table(io.StringIO(text))


def aggregate_national(records: Iterable[LepRecord], level: GeoLevel | str = GeoLevel.COUNTY) -> dict[str, tuple[int, int]]:
    """Per-language (total, lep) sums over one geography level."""
    lv = GeoLevel(level)
    out: dict[str, list[int]] = {}
    for r in records:
        if r.geo_level is not lv:
            continue
        acc = out.setdefault(r.language, [0, 0])
        acc[0] += r.total_speakers
        acc[1] += r.lep_speakers
    return {k: (v[0], v[1]) for k, v in out.items()}


@dataclass(frozen=True)
class PriorityLanguage:
    language: str
    lep_total: int
    total: int
    ratio: float


def select_priority_languages(
    data: Iterable[LepRecord] | Mapping[str, tuple[int, int]],
    ratio_threshold: float = PRIORITY_RATIO,
    min_lep: int = PRIORITY_MIN_LEP,
) -> list[PriorityLanguage]:
    """Languages whose LEP share exceeds ``ratio_threshold`` and whose LEP
    count is at least ``min_lep``, largest LEP population first."""
    totals = data if isinstance(data, Mapping) else aggregate_national(data)
    out = []
    for language, (total, lep) in totals.items():
        if total == 0:
            warnings.warn(f"{language}: total speakers is 0, ratio undefined; skipped", UndefinedRatioWarning, stacklevel=2)
            continue
        ratio = lep / total
        if ratio > ratio_threshold and lep >= min_lep:
            out.append(PriorityLanguage(language, lep, total, ratio))
    out.sort(key=lambda p: (-p.lep_total, p.language))
    return out
