"""Split a raw text product into translatable sentences and a verbatim frame.

Concatenating the ``text`` of every part reproduces the input exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

FRAME = "frame"
GAP = "gap"
SENTENCE = "sentence"

DEFAULT_FRAME_PATTERNS: tuple[str, ...] = (
    # upper-case code lines: ZCZC MIATWOAT ALL, TTAA00 KNHC 041200, FLZ069-070-041600-
    r"^(?=.*[A-Z0-9])[^a-z]*[^a-z.!?\s]\s*$",
    r"^\s*(\$\$|&&)\s*$",
    # issuance time: 800 AM EDT Thu Jul 4 2024
    r"^\s*\d{1,4}\s+(AM|PM)\s+[A-Z]{2,5}\s+\w{3}\s+\w{3}\s+\d{1,2}\s+\d{4}\s*$",
    r"^\s*(NWS|National Weather Service)\b",
    r"^\s*[-=_*]{3,}\s*$",
    r"^\s*Forecaster\s+\S",
)

_END = re.compile(r"[.!?](?=\s)")
_LIST_MARKER = re.compile(r"(?:^|\n)[ \t]*\d+$")


@dataclass(frozen=True)
class Part:
    kind: str
    text: str


@dataclass(frozen=True)
class SegmentedText:
    parts: tuple[Part, ...]

    @property
    def sentences(self) -> list[str]:
        return [p.text for p in self.parts if p.kind == SENTENCE]

    @property
    def frame(self) -> list[str]:
        return [p.text for p in self.parts if p.kind == FRAME]

    def reassemble(self, translations: Sequence[str] | None = None) -> str:
        """Rebuild the text, optionally swapping in one translation per sentence."""
        if translations is None:
            return "".join(p.text for p in self.parts)
        it = iter(translations)
        out = []
        for p in self.parts:
            out.append(next(it) if p.kind == SENTENCE else p.text)
        leftover = next(it, None)
        if leftover is not None:
            raise ValueError("more translations than sentences")
        return "".join(out)


def compile_frame_patterns(patterns: Iterable[str] | None) -> list[re.Pattern]:
    return [re.compile(p) for p in (DEFAULT_FRAME_PATTERNS if patterns is None else patterns)]


def is_frame_line(line: str, patterns: Sequence[re.Pattern]) -> bool:
    content = line.rstrip("\r\n")
    return any(p.search(content) for p in patterns)


def _sentence_ends(block: str) -> list[int]:
    ends = []
    for m in _END.finditer(block):
        k = m.start()
        if block[k] == "." and k > 0 and block[k - 1] == ".":
            continue  # "..." separates clauses
        if block[k] == "." and _LIST_MARKER.search(block, 0, k):
            continue  # "1. " list numbering
        ends.append(k + 1)
    return ends


def _split_block(block: str) -> list[Part]:
    cuts = [0, *_sentence_ends(block), len(block)]
    parts: list[Part] = []
    for a, z in zip(cuts, cuts[1:]):
        piece = block[a:z]
        if not piece:
            continue
        core = piece.strip()
        if not core:
            parts.append(Part(GAP, piece))
            continue
        lead = len(piece) - len(piece.lstrip())
        trail = len(piece.rstrip())
        if lead:
            parts.append(Part(GAP, piece[:lead]))
        parts.append(Part(SENTENCE, piece[lead:trail]))
        if trail < len(piece):
            parts.append(Part(GAP, piece[trail:]))
    return parts


def segment_text(body: str, frame_patterns: Iterable[str] | None = None) -> SegmentedText:
    patterns = compile_frame_patterns(frame_patterns)
    parts: list[Part] = []
    block: list[str] = []

    def flush() -> None:
        if block:
            parts.extend(_split_block("".join(block)))
            block.clear()

    for line in body.splitlines(keepends=True):
        if not line.strip():
            flush()
            parts.append(Part(GAP, line))
        elif is_frame_line(line, patterns):
            flush()
            parts.append(Part(FRAME, line))
        else:
            block.append(line)
    flush()
    return SegmentedText(tuple(parts))


def frame_header_length(body: str, frame_patterns: Iterable[str] | None = None) -> int:
    """Character length of the leading run of frame and blank lines."""
    patterns = compile_frame_patterns(frame_patterns)
    n = 0
    for line in body.splitlines(keepends=True):
        if line.strip() and not is_frame_line(line, patterns):
            break
        n += len(line)
    return n
