"""Translation-quality metrics: BLEU, Fuzz, chrF++, TER and an external scorer."""

from __future__ import annotations

from wxtrans.metrics.bleu import BleuStats, bleu, bleu_stats, corpus_bleu
from wxtrans.metrics.chrf import chrf_pp, chrf_stats, corpus_chrf_pp
from wxtrans.metrics.classify import BENCHMARKS, METRIC_NAMES, MetricScores, Rating, classify
from wxtrans.metrics.config import CasePolicy, MetricConfig, Smoothing
from wxtrans.metrics.edit import fuzz_ratio, indel_distance, lcs_length, levenshtein
from wxtrans.metrics.external import ExternalScore, ExternalScorer, JsonTransport, external_score
from wxtrans.metrics.ter import corpus_ter, ter, ter_stats
from wxtrans.metrics.tokenize import TokenSequence, extract_ngrams, tokenize


def score_pair(
    hyp: str,
    ref: str,
    config: MetricConfig | None = None,
    src: str | None = None,
    scorer: ExternalScorer | None = None,
) -> MetricScores:
    """All metrics for one hypothesis against one reference.

    The external score is only computed when both ``scorer`` and ``src``
    are given; scorer errors propagate.
    """
    cfg = config or MetricConfig()
    fz_h, fz_r = hyp, ref
    if cfg.case("fuzz") is CasePolicy.LOWERCASE:
        fz_h, fz_r = hyp.lower(), ref.lower()
    comet = comet_name = None
    if scorer is not None and scorer.configured and src is not None:
        ext = external_score(src, hyp, ref, scorer)
        comet, comet_name = ext.score, ext.scorer
    return MetricScores(
        bleu=bleu(hyp, [ref], cfg),
        fuzz=fuzz_ratio(fz_h, fz_r),
        chrf_pp=chrf_pp(hyp, ref, cfg),
        ter=ter(hyp, [ref], cfg),
        comet=comet,
        comet_scorer=comet_name,
    )


__all__ = [
    "BENCHMARKS",
    "METRIC_NAMES",
    "BleuStats",
    "CasePolicy",
    "ExternalScore",
    "ExternalScorer",
    "JsonTransport",
    "MetricConfig",
    "MetricScores",
    "Rating",
    "Smoothing",
    "TokenSequence",
    "bleu",
    "bleu_stats",
    "chrf_pp",
    "chrf_stats",
    "classify",
    "corpus_bleu",
    "corpus_chrf_pp",
    "corpus_ter",
    "external_score",
    "extract_ngrams",
    "fuzz_ratio",
    "indel_distance",
    "lcs_length",
    "levenshtein",
    "score_pair",
    "ter",
    "ter_stats",
    "tokenize",
]
