"""Swap numbers, times, station codes and URLs for indexed placeholders.

Text that already looks like a placeholder is itself protected, which makes
``restore(*protect(s)) == s`` hold for every string.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

PLACEHOLDER = "⟦{}⟧"
_PLACEHOLDER_RE = re.compile(r"⟦(\d+)⟧")

# Alternation order is priority order at a given start position.
_PROTECT_RE = re.compile(
    "|".join(
        [
            r"⟦\d+⟧",
            r"(?:https?://|www\.)\S+?(?=[.,;:!?)\]]*(?:\s|$))",
            r"\b[\w-]+(?:\.[\w-]+)*\.(?:gov|com|org|net|edu|mil)\b(?:/\S*?(?=[.,;:!?)\]]*(?:\s|$)))?",
            r"\b\d{1,2}:\d{2}(?:\s?[AaPp]\.?[Mm]\b\.?)?",
            r"\b\d{1,4}\s?(?:AM|PM|am|pm)\b",
            r"\b[KPT][A-Z]{3}\b",
            r"\b[A-Z]{2}[ZC]\d{3}\b",
            r"\d+(?:[.,]\d+)*",
        ]
    )
)


@dataclass(frozen=True)
class Protected:
    text: str
    table: tuple[str, ...]

    def restore(self, translated: str | None = None) -> str:
        return restore_tokens(self.text if translated is None else translated, self.table)


def protect_tokens(sentence: str) -> Protected:
    table: list[str] = []

    def sub(m: re.Match) -> str:
        table.append(m.group(0))
        return PLACEHOLDER.format(len(table) - 1)

    return Protected(_PROTECT_RE.sub(sub, sentence), tuple(table))


def restore_tokens(text: str, table) -> str:
    def sub(m: re.Match) -> str:
        i = int(m.group(1))
        return table[i] if i < len(table) else m.group(0)

    return _PLACEHOLDER_RE.sub(sub, text)


def missing_placeholders(text: str, table) -> list[int]:
    """Indices of placeholders absent from an engine's output."""
    present = {int(i) for i in _PLACEHOLDER_RE.findall(text)}
    return [i for i in range(len(table)) if i not in present]
