"""Reduce translated text to 7-bit ASCII for legacy dissemination channels.

Mapping table (version 1): explicit overrides first, then canonical
decomposition with combining marks removed, then compatibility
decomposition. Mapped characters are not counted as loss; anything still
outside ASCII is replaced by '?' (strip policy) or rejected.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from enum import Enum

from wxtrans.errors import InvalidArgument, NonRepresentableError

MAPPING_VERSION = 1
REPLACEMENT = "?"

OVERRIDES: dict[str, str] = {
    "ñ": "n", "Ñ": "N", "ü": "u", "Ü": "U", "ß": "ss", "ẞ": "SS",
    "æ": "ae", "Æ": "AE", "œ": "oe", "Œ": "OE", "ø": "o", "Ø": "O",
    "ł": "l", "Ł": "L", "đ": "d", "Đ": "D", "ð": "d", "Ð": "D",
    "þ": "th", "Þ": "Th", "ı": "i", "ŀ": "l", "Ŀ": "L",
    "¿": "", "¡": "", "º": "o", "ª": "a", "°": "",
    " ": " ", " ": " ", " ": " ", " ": " ",
    "‘": "'", "’": "'", "‚": "'", "‛": "'", "“": '"', "”": '"', "„": '"',
    "«": '"', "»": '"', "‹": "'", "›": "'",
    "–": "-", "—": "-", "‐": "-", "‑": "-", "−": "-",
    "…": "...", "•": "*", "·": ".",
}


class AsciiPolicy(str, Enum):
    STRIP_DIACRITICS = "strip_diacritics"
    REJECT_NON_LATIN = "reject_non_latin"


@dataclass(frozen=True)
class AsciiResult:
    text: str
    lossy: bool
    dropped: list[str] = field(default_factory=list)


def _map_char(ch: str) -> str | None:
    if ch < "\x80":
        return ch
    if ch in OVERRIDES:
        return OVERRIDES[ch]
    base = "".join(c for c in unicodedata.normalize("NFD", ch) if not unicodedata.combining(c))
    if base and base.isascii():
        return base
    compat = "".join(c for c in unicodedata.normalize("NFKD", ch) if not unicodedata.combining(c))
    if compat and compat.isascii():
        return compat
    return None


def ascii_safe(text: str, policy: AsciiPolicy | str = AsciiPolicy.STRIP_DIACRITICS) -> AsciiResult:
    try:
        policy = AsciiPolicy(policy)
    except ValueError:
        raise InvalidArgument(f"unknown policy {policy!r}; use strip_diacritics or reject_non_latin") from None
    out: list[str] = []
    dropped: list[str] = []
    for ch in text:
        mapped = _map_char(ch)
        if mapped is None:
            dropped.append(ch)
            out.append(REPLACEMENT)
        else:
            out.append(mapped)
    if dropped and policy is AsciiPolicy.REJECT_NON_LATIN:
        raise NonRepresentableError(list(dict.fromkeys(dropped)))
    return AsciiResult("".join(out), bool(dropped), dropped)
