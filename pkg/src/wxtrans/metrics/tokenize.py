from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from wxtrans.errors import InvalidArgument
from wxtrans.metrics.config import CasePolicy

TERMINAL_PUNCT = ".,;:!?"

# NWS products use "..." as a clause separator; the Unicode ellipsis too.
_ELLIPSIS = re.compile(r"\.{3,}|…")


@dataclass(frozen=True)
class TokenSequence:
    tokens: tuple[str, ...]
    original: str

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __getitem__(self, idx):
        return self.tokens[idx]

    def joined(self) -> str:
        return " ".join(self.tokens)


def _split_token(tok: str) -> list[str]:
    end = len(tok)
    while end > 0 and tok[end - 1] in TERMINAL_PUNCT:
        end -= 1
    if end == 0:
        return list(tok)
    return [tok[:end], *tok[end:]]


def tokenize(text: str, case_policy: CasePolicy | str = CasePolicy.PRESERVE) -> TokenSequence:
    """Whitespace tokenizer with terminal punctuation split off.

    >>> tokenize("Formation chance...low...20 percent").tokens
    ('Formation', 'chance', 'low', '20', 'percent')
    """
    if CasePolicy(case_policy) is CasePolicy.LOWERCASE:
        body = text.lower()
    else:
        body = text
    body = _ELLIPSIS.sub(" ", body)
    tokens: list[str] = []
    for raw in body.split():
        tokens.extend(_split_token(raw))
    return TokenSequence(tuple(tokens), text)


def extract_ngrams(seq: TokenSequence | Sequence, n: int) -> Counter:
    """Multiset of contiguous length-``n`` subsequences, as tuples."""
    if n < 1:
        raise InvalidArgument(f"n-gram order must be >= 1, got {n}")
    items = seq.tokens if isinstance(seq, TokenSequence) else tuple(seq)
    return Counter(items[i : i + n] for i in range(len(items) - n + 1))
