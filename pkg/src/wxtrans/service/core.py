"""Job execution and queries behind the HTTP API, independent of the web framework."""

from __future__ import annotations

import io
import json
import logging
import os
import threading
import uuid
import warnings
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from wxtrans.errors import (
    ConfigurationError,
    EngineUnavailable,
    InvalidArgument,
    NotFoundError,
)
from wxtrans.geo import (
    CwaStats,
    allocate_to_cwa,
    load_overlaps,
    parse_language_table,
    select_priority_languages,
    top_languages,
)
from wxtrans.geo.census import aggregate_national
from wxtrans.metrics import ExternalScorer, MetricConfig, Rating
from wxtrans.pipeline import (
    DictionaryEngine,
    Engine,
    EngineRegistry,
    ExternalEngine,
    IdentityEngine,
    JobFailed,
    PipelineConfig,
    Product,
    SegmentScore,
    back_translate,
    report_card,
    score_job,
    translate_product,
)
from wxtrans.service.feedback import FeedbackService, ReviewReason
from wxtrans.service.store import KVStore, open_store
from wxtrans.tmem import Segment, TermEntry, TranslationMemory, load_termbase

log = logging.getLogger(__name__)

NS_JOB = "job"
NS_SCORE = "segment_score"
NS_TM = "tm"
NS_CWA = "lep_cwa"
NS_NATIONAL = "lep_national"

QUEUED, RUNNING, COMPLETED, FAILED = "queued", "running", "completed", "failed"


def _utcnow() -> str:
    return datetime.now(timezone.utc).isoformat()


def engine_from_spec(engine_id: str, spec: str) -> Engine:
    """Build an engine from a spec string.

    ``identity`` echoes its input; ``dict:FILE`` loads a JSON object with
    ``lang_pair``, ``sentences`` and ``terms``; anything else is an external
    engine command or URL.
    """
    spec = spec.strip()
    if spec == "identity":
        return IdentityEngine(engine_id)
    if spec.startswith("dict:"):
        path = Path(spec[5:])
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise ConfigurationError(f"cannot read dictionary engine {path}: {exc}") from None
        unknown = set(data) - {"lang_pair", "sentences", "terms"}
        if unknown or "lang_pair" not in data:
            raise ConfigurationError(f"{path}: dictionary engine needs lang_pair; unknown keys {sorted(unknown)}")
        return DictionaryEngine(engine_id, data["lang_pair"], data.get("sentences"), data.get("terms"))
    return ExternalEngine.from_spec(engine_id, spec)


@dataclass
class ServiceSettings:
    """Runtime settings; :meth:`from_env` reads the ``WXTRANS_*`` variables."""

    store: str = ":memory:"
    bind: str = "127.0.0.1:8080"
    token: str | None = None
    engine: str | None = None
    reverse_engine: str | None = None
    scorer: str | None = None
    tm_path: str | None = None
    termbase_path: str | None = None

    @classmethod
    def from_env(cls, env=None) -> ServiceSettings:
        env = os.environ if env is None else env
        return cls(
            store=env.get("WXTRANS_STORE", "wxtrans.db"),
            bind=env.get("WXTRANS_BIND", "127.0.0.1:8080"),
            token=env.get("WXTRANS_TOKEN") or None,
            engine=env.get("WXTRANS_ENGINE") or None,
            reverse_engine=env.get("WXTRANS_REVERSE_ENGINE") or None,
            scorer=env.get("WXTRANS_SCORER") or None,
            tm_path=env.get("WXTRANS_TM") or None,
            termbase_path=env.get("WXTRANS_TERMBASE") or None,
        )

    def host_port(self) -> tuple[str, int]:
        host, _, port = self.bind.rpartition(":")
        try:
            return host or "127.0.0.1", int(port)
        except ValueError:
            raise ConfigurationError(f"bad bind address {self.bind!r}; expected host:port") from None


class ServiceCore:
    """Jobs, scores, feedback, review queue and LEP data over one store.

    Jobs run one at a time (the memory is shared); every other call is a
    short store transaction.
    """

    def __init__(
        self,
        store: KVStore,
        engine: Engine | None = None,
        reverse_engine: Engine | None = None,
        scorer: ExternalScorer | None = None,
        tm: TranslationMemory | None = None,
        termbase: list[TermEntry] | None = None,
        metric_config: MetricConfig | None = None,
        pipeline_config: PipelineConfig | None = None,
    ):
        self.store = store
        self.engines = EngineRegistry([e for e in (engine, reverse_engine) if e is not None])
        self.engine_id = engine.engine_id if engine else None
        self.reverse_id = reverse_engine.engine_id if reverse_engine else None
        self.scorer = scorer
        self.termbase = termbase or []
        self.metric_config = metric_config or MetricConfig()
        self.pipeline_config = pipeline_config or PipelineConfig()
        self.feedback = FeedbackService(store)
        self._job_lock = threading.Lock()
        self.tm = tm if tm is not None else TranslationMemory()
        for _, d in store.items(NS_TM):
            seg = Segment.from_dict(d)
            if not any(s.id == seg.id for s in self.tm):
                self.tm._put(seg)
        self.recover()

    @classmethod
    def from_settings(cls, settings: ServiceSettings) -> ServiceCore:
        engine = engine_from_spec("forward", settings.engine) if settings.engine else None
        reverse = engine_from_spec("reverse", settings.reverse_engine) if settings.reverse_engine else None
        scorer = ExternalScorer.from_spec(settings.scorer) if settings.scorer else None
        tm = TranslationMemory.import_jsonl(settings.tm_path) if settings.tm_path else None
        termbase = load_termbase(settings.termbase_path) if settings.termbase_path else None
        return cls(open_store(settings.store), engine, reverse, scorer, tm, termbase)

    # jobs

    def recover(self) -> list[str]:
        """Mark jobs left unfinished by a previous process as failed."""
        stale = []
        with self.store.transaction():
            for job_id, rec in self.store.items(NS_JOB):
                if rec["status"] in (QUEUED, RUNNING):
                    rec.update(status=FAILED, error="interrupted by service restart", finished=_utcnow())
                    self.store.put(NS_JOB, job_id, rec)
                    stale.append(job_id)
        return stale

    def submit_job(self, payload: dict) -> str:
        if not isinstance(payload, dict):
            raise InvalidArgument("job body must be a JSON object")
        unknown = set(payload) - {"product", "target_lang"}
        if unknown:
            raise InvalidArgument(f"unknown job fields: {sorted(unknown)}")
        if "product" not in payload:
            raise InvalidArgument("job body needs a 'product' object")
        try:
            product = Product.from_dict(payload["product"])
        except TypeError as exc:
            raise InvalidArgument(f"bad product: {exc}") from None
        target = str(payload.get("target_lang", "es")).lower()
        if self.engine_id is None:
            raise EngineUnavailable("no translation engine configured")
        engine = self.engines.get(self.engine_id)
        if not engine.supports((product.language, target)):
            raise InvalidArgument(f"engine does not support {product.language}-{target}")
        job_id = uuid.uuid4().hex
        self.store.put(NS_JOB, job_id, {
            "job_id": job_id, "status": QUEUED, "submitted": _utcnow(),
            "product": product.to_dict(), "target_lang": target,
        })
        return job_id

    def run_job(self, job_id: str) -> dict:
        with self._job_lock:
            rec = self.get_job(job_id)
            if rec["status"] != QUEUED:
                return rec
            rec["status"] = RUNNING
            self.store.put(NS_JOB, job_id, rec)
            try:
                rec.update(self._execute(job_id, rec))
            except Exception as exc:  # noqa: BLE001 - recorded on the job
                log.exception("job %s failed", job_id)
                rec.update(status=FAILED, error=f"{type(exc).__name__}: {exc}")
                if isinstance(exc, JobFailed):
                    rec["job"] = exc.job.to_dict()
            rec["finished"] = _utcnow()
            self.store.put(NS_JOB, job_id, rec)
            return rec

    def _execute(self, job_id: str, rec: dict) -> dict:
        product = Product.from_dict(rec["product"])
        cfg = PipelineConfig(**{**self.pipeline_config.__dict__, "target_lang": rec["target_lang"]})
        before = {s.id for s in self.tm}
        job, translated = translate_product(
            product, self.engines.get(self.engine_id), self.tm, self.termbase, cfg, job_id=job_id,
        )
        out: dict = {"job": job.to_dict(), "translated_product": translated.to_dict(), "warnings": list(job.warnings)}
        report = None
        if self.reverse_id is not None:
            pairs = back_translate(job, self.engines.get(self.reverse_id))
            report = score_job(job, pairs, self.metric_config, self.scorer)
            out["report"] = report.to_dict()
            out["warnings"] += list(report.warnings)
        else:
            out["warnings"].append("no reverse engine configured; back-translation scoring skipped")
        with self.store.transaction():
            for s in self.tm:
                if s.id not in before:
                    self.store.put(NS_TM, s.id, s.to_dict())
            if report is not None:
                for seg in report.segments:
                    self.store.put(NS_SCORE, f"{job_id}:{seg.index:06d}", seg.to_dict())
            self.feedback.register_product(translated.product_id, {
                "job_id": job_id, "product_type": translated.product_type, "language": translated.language,
            })
            self._route_reviews(job, translated, report)
        out["status"] = COMPLETED
        return out

    def _route_reviews(self, job, translated, report) -> None:
        violations = [f"sentence {r.index}: {w}" for r in job.sentences for w in r.warnings if w.startswith("source term ")]
        if violations:
            self.feedback.open_review(translated.product_id, ReviewReason.TERMBASE_VIOLATION,
                                      translated.language, details=violations)
        if report is None:
            return
        bad = []
        for seg in report.segments:
            deciding = "comet" if seg.scores.comet is not None else "chrf_pp"
            if seg.scores.ratings.get(deciding) is Rating.BAD:
                bad.append(f"sentence {seg.index}: {deciding} {getattr(seg.scores, deciding):.3f} rated bad")
        if bad:
            self.feedback.open_review(translated.product_id, ReviewReason.BAD_RATING, translated.language, details=bad)

    def get_job(self, job_id: str) -> dict:
        rec = self.store.get(NS_JOB, job_id)
        if rec is None:
            raise NotFoundError(f"unknown job {job_id!r}")
        return rec

    def segment_scores(self) -> list[SegmentScore]:
        return [SegmentScore.from_dict(d) for _, d in self.store.items(NS_SCORE)]

    def report_card(self, product_type=None, lang=None, since=None, until=None):
        return report_card(self.segment_scores(), product_type, lang, since, until)

    # LEP data

    def import_lep(self, county_csv: str, overlaps_csv: str, tract_csv: str | None = None,
                   areas: dict | None = None) -> dict:
        counties = parse_language_table(county_csv)
        tracts = parse_language_table(tract_csv) if tract_csv else None
        overlaps = load_overlaps(io.StringIO(overlaps_csv))
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            stats = allocate_to_cwa(counties.records, overlaps, tracts.records if tracts else None, areas)
        national = aggregate_national(counties.records)
        with self.store.transaction():
            for key, _ in self.store.items(NS_CWA):
                self.store.delete(NS_CWA, key)
            for key, _ in self.store.items(NS_NATIONAL):
                self.store.delete(NS_NATIONAL, key)
            for cwa, s in stats.items():
                self.store.put(NS_CWA, cwa, s.to_dict())
            for lang, (total, lep) in national.items():
                self.store.put(NS_NATIONAL, lang, [total, lep])
        return {
            "cwas": sorted(stats),
            "languages": len(national),
            "rejected_rows": [r.__dict__ for r in counties.rejected],
            "warnings": [str(w.message) for w in caught],
        }

    def priority_languages(self, ratio: float = 0.35, min_lep: int = 200_000) -> list[dict]:
        national = {k: (v[0], v[1]) for k, v in self.store.items(NS_NATIONAL)}
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            chosen = select_priority_languages(national, ratio, min_lep)
        return [p.__dict__ for p in chosen]

    def cwa_stats(self, cwa_id: str) -> dict:
        d = self.store.get(NS_CWA, cwa_id.upper())
        if d is None:
            raise NotFoundError(f"unknown CWA {cwa_id!r}")
        s = CwaStats.from_dict(d)
        top, other = top_languages(s)
        return {
            **s.to_dict(),
            "top_languages": [{"language": t.language, "lep": t.lep, "pct": float(t.pct)} for t in top],
            "other": {"lep": other.lep, "pct": float(other.pct)},
        }

    def cwa_ids(self) -> list[str]:
        return [k for k, _ in self.store.items(NS_CWA)]

    def close(self) -> None:
        self.store.close()
