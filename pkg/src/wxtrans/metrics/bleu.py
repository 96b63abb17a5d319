from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from wxtrans.errors import InvalidArgument
from wxtrans.metrics.config import MetricConfig, Smoothing
from wxtrans.metrics.tokenize import tokenize


@dataclass
class BleuStats:
    """Sufficient statistics; add them up across segments for corpus BLEU."""

    matches: list[int]
    totals: list[int]
    hyp_len: int = 0
    ref_len: int = 0
    # segments whose tokens equal one of their references, out of all segments
    exact: int = 0
    segments: int = 0

    def __add__(self, other: BleuStats) -> BleuStats:
        return BleuStats(
            [a + b for a, b in zip(self.matches, other.matches)],
            [a + b for a, b in zip(self.totals, other.totals)],
            self.hyp_len + other.hyp_len,
            self.ref_len + other.ref_len,
            self.exact + other.exact,
            self.segments + other.segments,
        )


def _all_ngrams(tokens: tuple, max_n: int) -> Counter:
    """n-grams of every order 1..max_n in one multiset (order = tuple length)."""
    size = len(tokens)
    return Counter([tokens[i : i + n] for n in range(1, max_n + 1) for i in range(size - n + 1)])


def _closest_ref_len(hyp_len: int, ref_lens: Sequence[int]) -> int:
    return min(ref_lens, key=lambda r: (abs(r - hyp_len), r))


def bleu_stats(hyp: str, refs: Sequence[str], config: MetricConfig | None = None) -> BleuStats:
    cfg = config or MetricConfig()
    if isinstance(refs, str):
        refs = [refs]
    if not refs:
        raise InvalidArgument("BLEU needs at least one reference")
    case = cfg.case("bleu")
    hyp_toks = tokenize(hyp, case)
    ref_toks = [tokenize(r, case) for r in refs]
    max_n = cfg.bleu_max_order
    hyp_ngrams = _all_ngrams(hyp_toks.tokens, max_n)
    clip = _all_ngrams(ref_toks[0].tokens, max_n)
    for r in ref_toks[1:]:
        clip |= _all_ngrams(r.tokens, max_n)
    matches = [0] * max_n
    for gram, count in (hyp_ngrams & clip).items():
        matches[len(gram) - 1] += count
    totals = [max(len(hyp_toks) - n + 1, 0) for n in range(1, max_n + 1)]
    exact = int(any(hyp_toks.tokens == r.tokens for r in ref_toks))
    ref_len = _closest_ref_len(len(hyp_toks), [len(r) for r in ref_toks])
    return BleuStats(matches, totals, len(hyp_toks), ref_len, exact, 1)


def bleu_from_stats(stats: BleuStats, config: MetricConfig | None = None) -> float:
    cfg = config or MetricConfig()
    if stats.segments and stats.exact == stats.segments:
        # exact reproduction scores 100 even below max order, where BLEU is undefined
        return 100.0
    if stats.hyp_len == 0 or stats.matches[0] == 0:
        return 0.0
    log_sum = 0.0
    order = 0
    exp_factor = 1
    for m, t in zip(stats.matches, stats.totals):
        if t == 0:
            if cfg.bleu_effective_order:
                break
            # no n-grams of this order at all: precision is zero, whatever the smoothing
            return 0.0
        order += 1
        if m > 0:
            log_sum += math.log(m / t)
        elif cfg.bleu_smoothing is Smoothing.EXPONENTIAL:
            exp_factor *= 2
            log_sum += math.log(1.0 / (exp_factor * t))
        elif cfg.bleu_smoothing is Smoothing.EPSILON:
            log_sum += math.log(cfg.bleu_epsilon / t)
        else:
            return 0.0
    if stats.hyp_len < stats.ref_len:
        bp = math.exp(1.0 - stats.ref_len / stats.hyp_len)
    else:
        bp = 1.0
    return 100.0 * bp * math.exp(log_sum / order)


def bleu(hyp: str, refs: Sequence[str], config: MetricConfig | None = None) -> float:
    """Sentence BLEU on a 0-100 scale."""
    return bleu_from_stats(bleu_stats(hyp, refs, config), config)


def corpus_bleu(hyps: Sequence[str], refs: Sequence[Sequence[str]], config: MetricConfig | None = None) -> float:
    """Corpus BLEU: counts pooled over all pairs before the geometric mean."""
    if len(hyps) != len(refs):
        raise InvalidArgument("hypothesis and reference counts differ")
    if not hyps:
        return 0.0
    total = None
    for h, r in zip(hyps, refs):
        st = bleu_stats(h, r, config)
        total = st if total is None else total + st
    return bleu_from_stats(total, config)
