from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from wxtrans.errors import InvalidArgument
from wxtrans.tmem.memory import format_lang_pair, parse_lang_pair

TERMBASE_HEADER = ["source_term", "approved", "variants", "notes", "lang_pair"]


@dataclass(frozen=True)
class TermEntry:
    source_term: str
    approved: str
    lang_pair: tuple[str, str]
    variants: tuple[tuple[str, str], ...] = ()
    notes: str = ""

    def __post_init__(self) -> None:
        if not self.approved.strip():
            raise InvalidArgument(f"approved translation for {self.source_term!r} is empty")
        if not self.source_term.strip():
            raise InvalidArgument("source_term is empty")
        object.__setattr__(self, "lang_pair", parse_lang_pair(self.lang_pair))
        variants = tuple((t, r) for t, r in self.variants if t.casefold() != self.approved.casefold())
        object.__setattr__(self, "variants", variants)

    def accepted_forms(self) -> list[str]:
        return [self.approved, *(t for t, _ in self.variants)]


@dataclass(frozen=True)
class TermViolation:
    entry: TermEntry
    # (start, end) character spans of the term in the source
    positions: tuple[tuple[int, int], ...] = field(default=())

    def message(self) -> str:
        return (
            f"source term {self.entry.source_term!r} not rendered as "
            f"{self.entry.approved!r} or a listed variant"
        )


def _term_pattern(term: str) -> re.Pattern:
    words = [re.escape(w) for w in term.split()]
    return re.compile(r"(?<!\w)" + r"\s+".join(words) + r"(?!\w)", re.IGNORECASE)


def termbase_check(
    translation: str,
    termbase: Iterable[TermEntry],
    source: str,
    lang_pair=None,
) -> list[TermViolation]:
    """Entries whose source term occurs in ``source`` but whose approved form
    (or a variant) is absent from ``translation``.

    Source matching is case-insensitive on token boundaries; the translation
    check is a case-insensitive substring test.
    """
    pair = parse_lang_pair(lang_pair) if lang_pair is not None else None
    haystack = translation.casefold()
    out = []
    for entry in termbase:
        if pair is not None and entry.lang_pair != pair:
            continue
        spans = tuple(m.span() for m in _term_pattern(entry.source_term).finditer(source))
        if not spans:
            continue
        if any(form.casefold() in haystack for form in entry.accepted_forms()):
            continue
        out.append(TermViolation(entry, spans))
    return out


def _parse_variants(text: str) -> tuple[tuple[str, str], ...]:
    out = []
    for item in filter(None, (p.strip() for p in text.split(";"))):
        term, _, region = item.rpartition("@")
        if not term:
            term, region = region, ""
        out.append((term.strip(), region.strip()))
    return tuple(out)


def load_termbase(source: str | Path | io.TextIOBase) -> list[TermEntry]:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8", newline="") as fh:
            return load_termbase(fh)
    reader = csv.reader(source)
    header = next(reader, None)
    if header != TERMBASE_HEADER:
        raise InvalidArgument(f"termbase header must be {','.join(TERMBASE_HEADER)}, got {header}")
    entries = []
    for lineno, row in enumerate(reader, 2):
        if not row:
            continue
        if len(row) != len(TERMBASE_HEADER):
            raise InvalidArgument(f"termbase line {lineno}: expected 5 fields, got {len(row)}")
        src, approved, variants, notes, pair = row
        try:
            entries.append(TermEntry(src, approved, pair, _parse_variants(variants), notes))
        except InvalidArgument as exc:
            raise InvalidArgument(f"termbase line {lineno}: {exc}") from exc
    return entries


def dump_termbase(entries: Iterable[TermEntry], dest: str | Path | io.TextIOBase) -> None:
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            return dump_termbase(entries, fh)
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(TERMBASE_HEADER)
    for e in entries:
        variants = ";".join(f"{t}@{r}" if r else t for t, r in e.variants)
        writer.writerow([e.source_term, e.approved, variants, e.notes, format_lang_pair(e.lang_pair)])
