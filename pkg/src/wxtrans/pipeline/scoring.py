"""Score back-translations against the original source, per segment and per job."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from wxtrans.errors import InvalidArgument, ScorerFailure, ScorerUnavailable
from wxtrans.metrics import (
    MetricConfig,
    MetricScores,
    corpus_bleu,
    corpus_chrf_pp,
    corpus_ter,
    fuzz_ratio,
    score_pair,
)
from wxtrans.metrics.config import CasePolicy
from wxtrans.metrics.external import ExternalScorer
from wxtrans.pipeline.product import TranslationJob
from wxtrans.pipeline.translate import BackPair
from wxtrans.tmem.memory import format_lang_pair


@dataclass(frozen=True)
class SegmentScore:
    """One scored segment together with the job metadata report cards filter on."""

    job_id: str
    index: int
    product_id: str
    product_type: str
    lang_pair: str
    issued_at: str
    source: str
    translated: str
    back: str
    scores: MetricScores

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__ if k != "scores"}
        d["scores"] = self.scores.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> SegmentScore:
        d = dict(d)
        d["scores"] = MetricScores.from_dict(d["scores"])
        return cls(**d)


@dataclass(frozen=True)
class JobReport:
    job_id: str
    segments: tuple[SegmentScore, ...]
    job_scores: MetricScores | None
    warnings: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "job_id": self.job_id,
            "segments": [s.to_dict() for s in self.segments],
            "job_scores": None if self.job_scores is None else self.job_scores.to_dict(),
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, d: dict) -> JobReport:
        js = d.get("job_scores")
        return cls(
            job_id=d["job_id"],
            segments=tuple(SegmentScore.from_dict(s) for s in d["segments"]),
            job_scores=None if js is None else MetricScores.from_dict(js),
            warnings=tuple(d.get("warnings", ())),
        )


def _external(scorer, pairs: Sequence[BackPair]) -> tuple[list[float | None], list[str], str | None]:
    if scorer is None or not scorer.configured or not pairs:
        return [None] * len(pairs), [], None
    try:
        # the translated sentence is the source the back-translation came from
        results = scorer.score_many([(p.translated, p.back, p.original) for p in pairs])
    except (ScorerUnavailable, ScorerFailure) as exc:
        return [None] * len(pairs), [f"external scorer unavailable, comet omitted: {exc}"], None
    values: list[float | None] = []
    notes = []
    for p, r in zip(pairs, results):
        if 0.0 <= r.score <= 1.0:
            values.append(r.score)
        else:
            values.append(None)
            notes.append(f"segment {p.index}: external score {r.score} outside [0, 1], omitted")
    return values, notes, results[0].scorer if results else None


def score_job(
    job: TranslationJob,
    pairs: Sequence[BackPair],
    config: MetricConfig | None = None,
    scorer: ExternalScorer | None = None,
) -> JobReport:
    """Score each (original, back-translation) pair: hyp = back, ref = original.

    External-scorer problems never fail the job; the comet column is left
    empty and a warning recorded instead.
    """
    cfg = config or MetricConfig()
    expected = [(r.index, r.source) for r in job.sentences]
    got = [(p.index, p.original) for p in pairs]
    if expected != got:
        raise InvalidArgument(f"back-translation pairs are not aligned with job {job.job_id}")
    comets, warnings, scorer_name = _external(scorer, pairs)
    segments = []
    for p, comet in zip(pairs, comets):
        s = score_pair(p.back, p.original, cfg)
        if comet is not None:
            s = MetricScores(s.bleu, s.fuzz, s.chrf_pp, s.ter, comet, scorer_name)
        segments.append(
            SegmentScore(
                job_id=job.job_id,
                index=p.index,
                product_id=job.product_id,
                product_type=job.product_type,
                lang_pair=format_lang_pair(job.lang_pair),
                issued_at=job.issued_at,
                source=p.original,
                translated=p.translated,
                back=p.back,
                scores=s,
            )
        )
    return JobReport(job.job_id, tuple(segments), _job_level(pairs, comets, scorer_name, cfg), tuple(warnings))


def _job_level(pairs, comets, scorer_name, cfg: MetricConfig) -> MetricScores | None:
    if not pairs:
        return None
    return corpus_scores([p.back for p in pairs], [p.original for p in pairs], cfg, comets, scorer_name)


def corpus_scores(
    hyps: Sequence[str],
    refs: Sequence[str],
    config: MetricConfig | None = None,
    comets: Sequence[float | None] = (),
    scorer_name: str | None = None,
) -> MetricScores:
    """Corpus-level row: pooled BLEU/chrF++/TER, Fuzz on the joined texts,
    COMET as the mean when every segment has one."""
    cfg = config or MetricConfig()
    fa, fb = " ".join(hyps), " ".join(refs)
    if cfg.case("fuzz") is CasePolicy.LOWERCASE:
        fa, fb = fa.lower(), fb.lower()
    comet = None
    if comets and all(c is not None for c in comets):
        comet = sum(comets) / len(comets)
    return MetricScores(
        bleu=corpus_bleu(hyps, [[r] for r in refs], cfg),
        fuzz=fuzz_ratio(fa, fb),
        chrf_pp=corpus_chrf_pp(hyps, refs, cfg),
        ter=corpus_ter(hyps, [[r] for r in refs], cfg),
        comet=comet,
        comet_scorer=scorer_name if comet is not None else None,
    )


def score_against_reference(
    hyps: Sequence[str],
    refs: Sequence[str],
    config: MetricConfig | None = None,
    srcs: Sequence[str] | None = None,
    scorer: ExternalScorer | None = None,
) -> list[MetricScores]:
    """Direct machine-vs-human-reference scoring, one row per pair."""
    if len(hyps) != len(refs) or (srcs is not None and len(srcs) != len(hyps)):
        raise InvalidArgument("hyps, refs and srcs must have equal length")
    return [
        score_pair(h, r, config, None if srcs is None else srcs[i], scorer)
        for i, (h, r) in enumerate(zip(hyps, refs))
    ]
