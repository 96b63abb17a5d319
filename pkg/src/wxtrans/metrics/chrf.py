from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from wxtrans.errors import InvalidArgument
from wxtrans.metrics.config import CasePolicy, MetricConfig
from wxtrans.metrics.tokenize import tokenize


@dataclass
class ChrfStats:
    # one (hyp_count, ref_count, matches) triple per order: chars first, then words
    orders: list[tuple[int, int, int]]

    def __add__(self, other: ChrfStats) -> ChrfStats:
        return ChrfStats([tuple(a + b for a, b in zip(x, y)) for x, y in zip(self.orders, other.orders)])


def _order_counts(items, max_order: int) -> Counter:
    # keys of different orders never collide: their lengths differ
    size = len(items)
    return Counter([items[i : i + n] for n in range(1, max_order + 1) for i in range(size - n + 1)])


def _per_order(hyp, ref, max_order: int) -> list[tuple[int, int, int]]:
    common = _order_counts(hyp, max_order) & _order_counts(ref, max_order)
    matched = [0] * (max_order + 1)
    for gram, count in common.items():
        matched[len(gram)] += count
    return [
        (max(len(hyp) - n + 1, 0), max(len(ref) - n + 1, 0), matched[n])
        for n in range(1, max_order + 1)
    ]


def chrf_stats(hyp: str, ref: str, config: MetricConfig | None = None) -> ChrfStats:
    cfg = config or MetricConfig()
    if cfg.case("chrf") is CasePolicy.LOWERCASE:
        hyp, ref = hyp.lower(), ref.lower()
    hyp_chars = "".join(hyp.split())
    ref_chars = "".join(ref.split())
    orders = _per_order(hyp_chars, ref_chars, cfg.chrf_char_order)
    orders += _per_order(tokenize(hyp).tokens, tokenize(ref).tokens, cfg.chrf_word_order)
    return ChrfStats(orders)


def chrf_from_stats(stats: ChrfStats, config: MetricConfig | None = None) -> float:
    """F-beta over precision and recall averaged across the effective orders."""
    cfg = config or MetricConfig()
    prec = rec = 0.0
    effective = 0
    for n_hyp, n_ref, n_match in stats.orders:
        if n_hyp > 0 and n_ref > 0:
            prec += n_match / n_hyp
            rec += n_match / n_ref
            effective += 1
    if effective == 0:
        # both sides empty counts as a perfect match; one side empty as none
        if all(h == 0 and r == 0 for h, r, _ in stats.orders):
            return 100.0
        return 0.0
    prec /= effective
    rec /= effective
    if prec + rec == 0:
        return 0.0
    b2 = cfg.chrf_beta**2
    return 100.0 * (1 + b2) * prec * rec / (b2 * prec + rec)


def chrf_pp(hyp: str, ref: str, config: MetricConfig | None = None) -> float:
    """chrF++ on a 0-100 scale (character orders plus word orders)."""
    return chrf_from_stats(chrf_stats(hyp, ref, config), config)


def corpus_chrf_pp(hyps: Sequence[str], refs: Sequence[str], config: MetricConfig | None = None) -> float:
    if len(hyps) != len(refs):
        raise InvalidArgument("hypothesis and reference counts differ")
    if not hyps:
        return 0.0
    total = None
    for h, r in zip(hyps, refs):
        st = chrf_stats(h, r, config)
        total = st if total is None else total + st
    return chrf_from_stats(total, config)
