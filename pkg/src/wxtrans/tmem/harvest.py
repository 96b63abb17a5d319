from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from wxtrans.errors import InvalidArgument
from wxtrans.metrics.tokenize import tokenize


@dataclass(frozen=True)
class HarvestCandidate:
    phrase: str
    frequency: int
    documents: int


def _is_wordlike(tok: str) -> bool:
    return any(ch.isalpha() for ch in tok)


def harvest_terms(
    corpus: Iterable[str],
    stoplist: Iterable[str] = (),
    min_freq: int = 2,
    max_len: int = 3,
) -> list[HarvestCandidate]:
    """Frequent 1-3 word phrases in ``corpus``.

    Phrases are lowercased; a phrase may not start or end with a stopword
    and may not contain punctuation or bare numbers. Ranked by frequency,
    then document count, then alphabetically.
    """
    if min_freq < 1:
        raise InvalidArgument("min_freq must be >= 1")
    stop = {w.casefold() for w in stoplist}
    freq: Counter = Counter()
    docs: Counter = Counter()
    for doc in corpus:
        tokens = tokenize(doc, "lowercase").tokens
        seen = set()
        for n in range(1, max_len + 1):
            for i in range(len(tokens) - n + 1):
                gram = tokens[i : i + n]
                if not all(_is_wordlike(t) for t in gram):
                    continue
                if gram[0] in stop or gram[-1] in stop:
                    continue
                phrase = " ".join(gram)
                freq[phrase] += 1
                seen.add(phrase)
        docs.update(seen)
    out = [HarvestCandidate(p, f, docs[p]) for p, f in freq.items() if f >= min_freq]
    out.sort(key=lambda c: (-c.frequency, -c.documents, c.phrase))
    return out
