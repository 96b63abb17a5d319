"""Memory-first product translation, disclaimers and back-translation."""

from __future__ import annotations

import json
import time
import uuid
from dataclasses import dataclass, fields, replace
from datetime import datetime, timedelta, timezone
from functools import lru_cache
from importlib import resources
from typing import Iterable, Mapping

from wxtrans.errors import ConfigurationError, EngineError, InvalidArgument
from wxtrans.pipeline.engines import Engine
from wxtrans.pipeline.product import Product, SentenceRecord, TranslationJob
from wxtrans.pipeline.protect import missing_placeholders, protect_tokens
from wxtrans.pipeline.segment import frame_header_length, segment_text
from wxtrans.tmem.memory import Origin, Segment, Status, TranslationMemory, format_lang_pair
from wxtrans.tmem.termbase import TermEntry, termbase_check

MEMORY_EXACT = "memory-exact"
ENGINE = "engine"


@lru_cache(maxsize=1)
def shipped_disclaimers() -> dict[str, str]:
    raw = resources.files("wxtrans.data").joinpath("disclaimers.json").read_text(encoding="utf-8")
    data = json.loads(raw)
    data.pop("_comment", None)
    return data


@dataclass(frozen=True)
class PipelineConfig:
    target_lang: str = "es"
    disclaimers: Mapping[str, str] | None = None  # None: shipped table
    attach_disclaimer: bool = True
    deadline_minutes: float = 60.0
    frame_patterns: tuple[str, ...] | None = None
    record_machine_segments: bool = True

    def disclaimer_table(self) -> Mapping[str, str]:
        return shipped_disclaimers() if self.disclaimers is None else self.disclaimers

    @classmethod
    def from_dict(cls, d: dict) -> PipelineConfig:
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ConfigurationError(f"unknown pipeline config keys: {sorted(extra)}")
        d = dict(d)
        if d.get("frame_patterns") is not None:
            d["frame_patterns"] = tuple(d["frame_patterns"])
        return cls(**d)


class JobFailed(EngineError):
    """Raised when any sentence fails; nothing from the job is kept."""

    def __init__(self, message: str, job: TranslationJob):
        super().__init__(message, job.diagnostics)
        self.job = job


def attach_disclaimer(
    body: str,
    language: str,
    disclaimers: Mapping[str, str] | None = None,
    frame_patterns: Iterable[str] | None = None,
) -> str:
    table = shipped_disclaimers() if disclaimers is None else disclaimers
    text = table.get(language.lower())
    if not text:
        raise ConfigurationError(f"no disclaimer configured for language {language!r}")
    if text in body:
        return body
    cut = frame_header_length(body, frame_patterns)
    head, rest = body[:cut], body[cut:]
    if head and not head.endswith("\n"):
        head += "\n"
    return f"{head}{text}\n\n{rest}"


def strip_disclaimer(body: str, language: str, disclaimers: Mapping[str, str] | None = None) -> str:
    table = shipped_disclaimers() if disclaimers is None else disclaimers
    text = table.get(language.lower(), "")
    return body.replace(f"{text}\n\n", "", 1) if text else body


def _now() -> datetime:
    return datetime.now(timezone.utc)


def _translate_sentence(engine: Engine, sentence: str, pair) -> tuple[str, list[str]]:
    prot = protect_tokens(sentence)
    out = engine.translate(prot.text, pair)
    lost = missing_placeholders(out, prot.table)
    notes = [f"placeholder dropped by engine: {prot.table[i]!r}" for i in lost]
    return prot.restore(out), notes


def translate_product(
    product: Product,
    engine: Engine,
    tm: TranslationMemory | None = None,
    termbase: Iterable[TermEntry] = (),
    config: PipelineConfig | None = None,
    now=_now,
    job_id: str | None = None,
) -> tuple[TranslationJob, Product]:
    """Translate every sentence, reusing reviewed memory before calling ``engine``.

    Frame lines pass through untouched. On any engine failure the whole job
    fails and no machine segment reaches the memory.
    """
    cfg = config or PipelineConfig()
    pair = (product.language, cfg.target_lang.lower())
    if pair[0] == pair[1]:
        raise InvalidArgument(f"source and target language are both {pair[0]!r}")
    if not engine.supports(pair):
        raise InvalidArgument(f"engine {engine.engine_id} does not support {format_lang_pair(pair)}")
    if cfg.attach_disclaimer and not cfg.disclaimer_table().get(pair[1]):
        raise ConfigurationError(f"no disclaimer configured for language {pair[1]!r}")
    terms = list(termbase)
    job_id = job_id or uuid.uuid4().hex
    deadline = product.issued_at + timedelta(minutes=cfg.deadline_minutes)
    started = time.perf_counter()
    seg = segment_text(product.body, cfg.frame_patterns)

    records: list[SentenceRecord] = []
    new_segments: list[Segment] = []
    for index, sentence in enumerate(seg.sentences):
        notes: list[str] = []
        hit = tm.lookup(sentence, pair, fuzzy_threshold=100).exact if tm is not None else None
        if hit is not None:
            target, provenance, seg_id = hit.target, MEMORY_EXACT, hit.id
        else:
            try:
                target, notes = _translate_sentence(engine, sentence, pair)
            except Exception as exc:  # noqa: BLE001 - any engine fault fails the job
                elapsed = time.perf_counter() - started
                failed = TranslationJob(
                    job_id=job_id,
                    product_id=product.product_id,
                    product_type=product.product_type,
                    office=product.office,
                    issued_at=product.issued_at.isoformat(),
                    lang_pair=pair,
                    engine_id=engine.engine_id,
                    sentences=tuple(records),
                    processing_time=elapsed,
                    status="failed",
                    deadline=deadline.isoformat(),
                    diagnostics={
                        "sentence_index": index,
                        "sentence": sentence,
                        "error": f"{type(exc).__name__}: {exc}",
                        "engine_diagnostics": getattr(exc, "diagnostics", None),
                    },
                )
                raise JobFailed(f"job {job_id} failed on sentence {index}: {exc}", failed) from exc
            provenance = ENGINE
            machine = Segment(sentence, target, pair, status=Status.MACHINE, origin=Origin.ENGINE)
            seg_id = machine.content_id()
            new_segments.append(machine)
        for v in termbase_check(target, terms, sentence, pair):
            notes.append(v.message())
        records.append(SentenceRecord(index, sentence, target, provenance, seg_id, tuple(notes)))

    body = seg.reassemble([r.target for r in records])
    if cfg.attach_disclaimer:
        body = attach_disclaimer(body, pair[1], cfg.disclaimer_table(), cfg.frame_patterns)
    if tm is not None and cfg.record_machine_segments:
        for s in new_segments:
            tm.insert(s)
    elapsed = time.perf_counter() - started

    finished = now()
    exceeded = finished > deadline
    job_warnings = [f"sentence {r.index}: {w}" for r in records for w in r.warnings]
    if exceeded:
        job_warnings.append(f"dissemination deadline {deadline.isoformat()} exceeded")
    job = TranslationJob(
        job_id=job_id,
        product_id=product.product_id,
        product_type=product.product_type,
        office=product.office,
        issued_at=product.issued_at.isoformat(),
        lang_pair=pair,
        engine_id=engine.engine_id,
        sentences=tuple(records),
        processing_time=elapsed,
        warnings=tuple(job_warnings),
        deadline=deadline.isoformat(),
        deadline_exceeded=exceeded,
    )
    translated = product.with_body(body, pair[1], [r.segment_id for r in records])
    return job, translated


@dataclass(frozen=True)
class BackPair:
    index: int
    original: str
    translated: str
    back: str


def back_translate(job: TranslationJob, reverse_engine: Engine) -> list[BackPair]:
    """Send each translated sentence back to the source language."""
    if reverse_engine.engine_id == job.engine_id:
        raise InvalidArgument(
            f"reverse engine must differ from the forward engine ({job.engine_id!r})"
        )
    if job.status != "completed":
        raise InvalidArgument(f"job {job.job_id} is {job.status}; nothing to back-translate")
    pair = (job.lang_pair[1], job.lang_pair[0])
    if not reverse_engine.supports(pair):
        raise InvalidArgument(f"engine {reverse_engine.engine_id} does not support {format_lang_pair(pair)}")
    out = []
    for rec in job.sentences:
        back, _ = _translate_sentence(reverse_engine, rec.target, pair)
        out.append(BackPair(rec.index, rec.source, rec.target, back))
    return out


def with_status(job: TranslationJob, status: str) -> TranslationJob:
    return replace(job, status=status)
