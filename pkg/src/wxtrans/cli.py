"""``wxtrans`` command line.

Exit codes: 0 ok, 1 operation error, 2 usage error (bad flags, unreadable
inputs, invalid config). Every subcommand accepts ``--json``; the JSON and
the text output are rendered from the same values.

Config file (JSON, ``--config``) keys, all optional:

    tm, termbase, templates      paths (must exist)
    metric_config                object of MetricConfig fields
    engine, reverse_engine       engine specs: identity | dict:FILE | command | URL
    scorer                       external scorer command or URL
    target_lang                  default target language
    disclaimers                  {language: text}
    store, bind, token           service settings

Command-line flags override config values.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

from wxtrans.errors import ConfigurationError, WxTransError
from wxtrans.metrics import ExternalScorer, MetricConfig, MetricScores
from wxtrans.metrics.classify import METRIC_NAMES

# display precision per metric; JSON carries the same rounded values
PRECISION = {"bleu": 3, "fuzz": 0, "chrf_pp": 3, "comet": 3, "ter": 2}
LABELS = {"bleu": "BLEU", "fuzz": "Fuzz", "chrf_pp": "chrF++", "comet": "COMET", "ter": "TER"}
ABSENT = "—"


class UsageError(Exception):
    """Bad invocation; exits with status 2."""


@dataclass
class RunConfig:
    tm: str | None = None
    termbase: str | None = None
    templates: str | None = None
    metric_config: dict = field(default_factory=dict)
    engine: str | None = None
    reverse_engine: str | None = None
    scorer: str | None = None
    target_lang: str = "es"
    disclaimers: dict = field(default_factory=dict)
    store: str | None = None
    bind: str | None = None
    token: str | None = None

    @classmethod
    def load(cls, path: str | None) -> RunConfig:
        if path is None:
            return cls()
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
        except ValueError as exc:
            raise UsageError(f"config {path} is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise UsageError(f"config {path} must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise UsageError(f"config {path}: unknown keys {unknown}")
        cfg = cls(**data)
        for key in ("tm", "termbase", "templates"):
            value = getattr(cfg, key)
            if value is not None and not Path(value).is_file():
                raise UsageError(f"config {path}: {key} file {value} does not exist")
        try:
            cfg.metrics()
        except (WxTransError, TypeError, ValueError) as exc:
            raise UsageError(f"config {path}: bad metric_config: {exc}") from None
        return cfg

    def metrics(self) -> MetricConfig:
        if not self.metric_config:
            return MetricConfig()
        return MetricConfig.from_dict(self.metric_config)


# helpers

def _read_text(path: str, what: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {what} {path}: {exc.strerror}") from None


def _read_lines(path: str, what: str) -> list[str]:
    return _read_text(path, what).splitlines()


def _read_json(path: str, what: str) -> Any:
    try:
        return json.loads(_read_text(path, what))
    except ValueError as exc:
        raise UsageError(f"{what} {path} is not valid JSON: {exc}") from None


def _emit(args, payload: Any, text: str) -> None:
    if args.json:
        print(json.dumps(payload, ensure_ascii=False, indent=2))
    else:
        print(text)


def _rounded(scores: MetricScores) -> dict:
    out = {}
    for name in METRIC_NAMES:
        v = getattr(scores, name)
        out[name] = None if v is None else (int(v) if PRECISION[name] == 0 else round(v, PRECISION[name]))
    return out


def _score_row(label: str, scores: MetricScores) -> dict:
    return {"label": label, "scores": _rounded(scores), "ratings": {k: v.value for k, v in scores.ratings.items()}}


def _score_table(rows: list[dict]) -> str:
    width = max([len("segment")] + [len(r["label"]) for r in rows])
    head = "segment".ljust(width) + "".join(f"  {LABELS[m]:>20}" for m in METRIC_NAMES)
    lines = [head]
    for r in rows:
        cells = []
        for m in METRIC_NAMES:
            v = r["scores"][m]
            cells.append(ABSENT if v is None else f"{v} ({r['ratings'][m]})")
        lines.append(r["label"].ljust(width) + "".join(f"  {c:>20}" for c in cells))
    return "\n".join(lines)


def _scorer(args, cfg: RunConfig) -> ExternalScorer | None:
    spec = getattr(args, "scorer", None) or cfg.scorer
    return ExternalScorer.from_spec(spec) if spec else None


# subcommands

def cmd_score(args, cfg: RunConfig) -> int:
    from wxtrans.errors import ScorerFailure, ScorerUnavailable
    from wxtrans.pipeline.scoring import corpus_scores, score_against_reference

    mcfg = cfg.metrics()
    if args.job:
        return _score_stored_job(args, cfg)
    if not args.hyp or not args.ref:
        raise UsageError("score needs --hyp and --ref (or --job with --store)")
    hyps = _read_lines(args.hyp, "hypothesis file")
    refs = _read_lines(args.ref, "reference file")
    srcs = _read_lines(args.src, "source file") if args.src else None
    if len(hyps) != len(refs) or (srcs is not None and len(srcs) != len(hyps)):
        raise UsageError("hypothesis, reference and source files must have the same number of lines")
    scorer = _scorer(args, cfg)
    notes = []
    if scorer is not None and srcs is None:
        notes.append("no --src given; COMET omitted")
        scorer = None
    try:
        segs = score_against_reference(hyps, refs, mcfg, srcs, scorer)
    except (ScorerUnavailable, ScorerFailure) as exc:
        notes.append(f"external scorer unavailable, COMET omitted: {exc}")
        segs = score_against_reference(hyps, refs, mcfg)
    rows = [_score_row(str(i + 1), s) for i, s in enumerate(segs)]
    if len(segs) > 1:
        comets = [s.comet for s in segs]
        rows.append(_score_row("corpus", corpus_scores(hyps, refs, mcfg, comets, segs[0].comet_scorer)))
    text = _score_table(rows) + "".join(f"\nwarning: {n}" for n in notes)
    _emit(args, {"rows": rows, "warnings": notes}, text)
    return 0


def _score_stored_job(args, cfg: RunConfig) -> int:
    from wxtrans.errors import NotFoundError
    from wxtrans.service.core import NS_JOB
    from wxtrans.service.store import SqliteStore

    store_path = args.store or cfg.store
    if not store_path or not Path(store_path).is_file():
        raise UsageError("--job needs an existing --store database")
    store = SqliteStore(store_path)
    try:
        rec = store.get(NS_JOB, args.job)
    finally:
        store.close()
    if rec is None:
        raise NotFoundError(f"unknown job {args.job!r}")
    if "report" not in rec:
        raise WxTransError(f"job {args.job} has no scores (status {rec['status']})")
    from wxtrans.pipeline import JobReport

    report = JobReport.from_dict(rec["report"])
    rows = [_score_row(str(s.index + 1), s.scores) for s in report.segments]
    if report.job_scores is not None and len(report.segments) > 1:
        rows.append(_score_row("job", report.job_scores))
    _emit(args, {"rows": rows, "warnings": list(report.warnings)}, _score_table(rows))
    return 0


def _engine(spec: str | None, engine_id: str, what: str):
    from wxtrans.service.core import engine_from_spec

    if not spec:
        raise UsageError(f"no {what} configured; pass --{what.replace('_', '-')} or set it in --config")
    return engine_from_spec(engine_id, spec)


def _load_tm(path: str | None):
    from wxtrans.tmem import TranslationMemory

    if path and Path(path).is_file():
        return TranslationMemory.import_jsonl(path)
    return TranslationMemory()


def cmd_translate(args, cfg: RunConfig) -> int:
    from wxtrans.pipeline import JobFailed, PipelineConfig, load_product, translate_product
    from wxtrans.tmem import load_termbase

    if not Path(args.product).is_file():
        raise UsageError(f"cannot read product {args.product}")
    product = load_product(args.product, product_type=args.type, office=args.office,
                           language=args.lang, issued_at=args.issued)
    engine = _engine(args.engine or cfg.engine, "forward", "engine")
    tm_path = args.tm or cfg.tm
    tm = _load_tm(tm_path)
    tb_path = args.termbase or cfg.termbase
    termbase = load_termbase(tb_path) if tb_path else []
    pcfg = PipelineConfig(
        target_lang=args.target or cfg.target_lang,
        disclaimers=cfg.disclaimers or None,
        attach_disclaimer=not args.no_disclaimer,
    )
    try:
        job, translated = translate_product(product, engine, tm, termbase, pcfg)
    except JobFailed as exc:
        if args.job_out:
            Path(args.job_out).write_text(json.dumps(exc.job.to_dict(), ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
        raise
    if tm_path:
        tm.export_jsonl(tm_path)
    if args.job_out:
        Path(args.job_out).write_text(json.dumps(job.to_dict(), ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    if args.out:
        Path(args.out).write_text(translated.body, encoding="utf-8", newline="")
    payload = {"job": job.to_dict(), "body": translated.body}
    text = translated.body if not args.out else f"wrote {args.out} ({len(job.sentences)} sentences)"
    for w in job.warnings:
        text += f"\nwarning: {w}"
    _emit(args, payload, text)
    return 0


def cmd_backscore(args, cfg: RunConfig) -> int:
    from wxtrans.pipeline import TranslationJob, back_translate, score_job

    job = TranslationJob.from_dict(_read_json(args.job, "job file"))
    reverse = _engine(args.reverse_engine or cfg.reverse_engine, "reverse", "reverse_engine")
    pairs = back_translate(job, reverse)
    report = score_job(job, pairs, cfg.metrics(), _scorer(args, cfg))
    if args.out:
        Path(args.out).write_text(json.dumps(report.to_dict(), ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    rows = [_score_row(str(s.index + 1), s.scores) for s in report.segments]
    if report.job_scores is not None and len(report.segments) > 1:
        rows.append(_score_row("job", report.job_scores))
    back = [{"index": p.index, "original": p.original, "translated": p.translated, "back": p.back} for p in pairs]
    text = _score_table(rows) + "".join(f"\nwarning: {w}" for w in report.warnings)
    _emit(args, {"rows": rows, "back_translations": back, "warnings": list(report.warnings)}, text)
    return 0


def _load_segment_scores(paths: list[str]):
    from wxtrans.pipeline import JobReport, SegmentScore

    out = []
    for path in paths:
        raw = _read_text(path, "scores file")
        try:
            if path.endswith(".jsonl"):
                out += [SegmentScore.from_dict(json.loads(line)) for line in raw.splitlines() if line.strip()]
            else:
                out += list(JobReport.from_dict(json.loads(raw)).segments)
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"{path}: not a job report or segment-score JSONL: {exc}") from None
    return out


def cmd_report(args, cfg: RunConfig) -> int:
    from wxtrans.pipeline import report_card, report_csv, report_html

    card = report_card(_load_segment_scores(args.scores), args.type, args.lang, args.since, args.until, args.worst)
    if args.html:
        Path(args.html).write_text(report_html(card), encoding="utf-8")
    if args.csv:
        Path(args.csv).write_text(report_csv(card), encoding="utf-8", newline="")
    d = card.to_dict()
    lines = [f"segments: {card.count}"]
    for name, summary in d["metrics"].items():
        hist = d["histogram"].get(name, {})
        lines.append(
            f"{LABELS[name]:<7} mean {summary['mean']}  median {summary['median']}  "
            + "  ".join(f"{k} {v}" for k, v in hist.items())
        )
    _emit(args, d, "\n".join(lines))
    return 0


def cmd_tm(args, cfg: RunConfig) -> int:
    from wxtrans.tmem import Origin, Segment, Status, format_lang_pair

    tm_path = args.tm or cfg.tm
    if not tm_path:
        raise UsageError("tm commands need --tm or a tm path in --config")
    tm = _load_tm(tm_path)
    if args.tm_cmd == "insert":
        seg = Segment(args.source, args.target, args.pair, status=Status(args.status), origin=Origin(args.origin))
        seg_id = tm.insert(seg)
        tm.export_jsonl(tm_path)
        _emit(args, {"id": seg_id}, seg_id)
    elif args.tm_cmd == "review":
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            seg = tm.mark_reviewed(args.id, args.reviewer)
        tm.export_jsonl(tm_path)
        notes = [str(w.message) for w in caught]
        _emit(args, {"segment": seg.to_dict(), "warnings": notes},
              f"{seg.id} {seg.status.value}" + "".join(f"\nwarning: {n}" for n in notes))
    else:
        res = tm.lookup(args.source, args.pair, args.threshold)
        payload = {
            "exact": None if res.exact is None else res.exact.to_dict(),
            "fuzzy": [{"score": r, "segment": s.to_dict()} for s, r in res.fuzzy],
        }
        lines = []
        if res.exact is not None:
            lines.append(f"exact  {res.exact.id}  {res.exact.target}")
        lines += [f"{r:>5}  {s.id}  {s.source} => {s.target}  [{format_lang_pair(s.lang_pair)}]" for s, r in res.fuzzy]
        _emit(args, payload, "\n".join(lines) if lines else "no matches")
    return 0


def cmd_harvest(args, cfg: RunConfig) -> int:
    from wxtrans.tmem import harvest_terms

    corpus = [_read_text(p, "corpus file") for p in args.corpus]
    stop = _read_lines(args.stoplist, "stoplist") if args.stoplist else []
    found = harvest_terms(corpus, [s.strip() for s in stop if s.strip()], args.min_freq, args.max_len)
    if args.top:
        found = found[: args.top]
    rows = [asdict(c) for c in found]
    _emit(args, rows, "\n".join(f"{c.frequency:>6} {c.documents:>5}  {c.phrase}" for c in found))
    return 0


def cmd_synth(args, cfg: RunConfig) -> int:
    from wxtrans.pipeline import generate_synthetic, load_templates

    path = args.templates or cfg.templates
    sentences = generate_synthetic(load_templates(path), args.n, args.seed)
    _emit(args, sentences, "\n".join(sentences))
    return 0


def _read_areas(path: str | None) -> dict | None:
    if path is None:
        return None
    data = _read_json(path, "areas file")
    if not isinstance(data, dict):
        raise UsageError("areas file must map CWA ids to areas")
    return {str(k): float(v) for k, v in data.items()}


def _allocate(args):
    from wxtrans.geo import allocate_to_cwa, load_language_table, load_overlaps

    for p in filter(None, (args.counties, args.overlaps, args.tracts)):
        if not Path(p).is_file():
            raise UsageError(f"cannot read {p}")
    counties = load_language_table(args.counties)
    tracts = load_language_table(args.tracts) if args.tracts else None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        stats = allocate_to_cwa(counties.records, load_overlaps(args.overlaps),
                                tracts.records if tracts else None, _read_areas(args.areas))
    return stats, [str(w.message) for w in caught]


def cmd_geo(args, cfg: RunConfig) -> int:
    from wxtrans.geo import export_dashboard, load_language_table, rank_wfos, select_priority_languages

    if args.geo_cmd == "priority":
        if not Path(args.input).is_file():
            raise UsageError(f"cannot read {args.input}")
        table = load_language_table(args.input)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            chosen = select_priority_languages(table.records, args.ratio, args.min_lep)
        rows = [{"language": p.language, "lep": p.lep_total, "total": p.total, "ratio": round(p.ratio, 4)} for p in chosen]
        notes = [str(w.message) for w in caught] + [f"line {r.line}: {r.reason}" for r in table.rejected]
        text = "\n".join(f"{r['language']:<24} {r['lep']:>12} {r['total']:>12} {r['ratio']:>8}" for r in rows)
        _emit(args, {"languages": rows, "warnings": notes}, text + "".join(f"\nwarning: {n}" for n in notes))
    elif args.geo_cmd == "allocate":
        stats, notes = _allocate(args)
        if args.out:
            export_dashboard(stats, args.out)
        payload = {"cwas": {k: v.to_dict() for k, v in stats.items()}, "warnings": notes}
        text = "\n".join(f"{s.cwa_id:<6} languages {s.distinct_language_count:>3}  population {s.population:>10}  lep {s.lep_total:>10}"
                         for s in stats.values())
        _emit(args, payload, text + "".join(f"\nwarning: {n}" for n in notes))
    else:
        stats, notes = _allocate(args)
        resources, hazards = _read_factors(args.factors)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            ranked = rank_wfos(stats, resources, hazards, args.weights)
        notes += [str(w.message) for w in caught]
        rows = [{"rank": r.rank, "cwa_id": r.cwa_id, "score": round(r.score, 6)} for r in ranked]
        text = "\n".join(f"{r['rank']:>3}  {r['cwa_id']:<6} {r['score']}" for r in rows)
        _emit(args, {"ranking": rows, "warnings": notes}, text + "".join(f"\nwarning: {n}" for n in notes))
    return 0


def _read_factors(path: str) -> tuple[dict, dict]:
    import csv
    import io

    rows = list(csv.DictReader(io.StringIO(_read_text(path, "factors file"))))
    if not rows or not {"cwa_id", "resources", "hazards"} <= set(rows[0]):
        raise UsageError("factors file needs columns cwa_id,resources,hazards")
    try:
        return ({r["cwa_id"]: float(r["resources"]) for r in rows if r["resources"] != ""},
                {r["cwa_id"]: float(r["hazards"]) for r in rows if r["hazards"] != ""})
    except ValueError as exc:
        raise UsageError(f"factors file: {exc}") from None


def cmd_diet(args, cfg: RunConfig) -> int:
    from wxtrans.pipeline import balanced_diet_select, load_catalog

    data = _read_json(args.catalog, "catalog")
    sel = balanced_diet_select(load_catalog(data), args.month, args.k)
    payload = {
        "month": sel.month, "method": sel.method, "covered": sel.covered, "coverable": sel.coverable,
        "products": [e.product_id for e in sel.entries],
    }
    text = "\n".join(payload["products"]) + f"\ncovered {sel.covered}/{sel.coverable} cells ({sel.method})"
    _emit(args, payload, text)
    return 0


def cmd_ascii(args, cfg: RunConfig) -> int:
    from wxtrans.service import ascii_safe

    res = ascii_safe(_read_text(args.input, "input"), args.policy)
    if args.out:
        Path(args.out).write_bytes(res.text.encode("ascii"))
    if args.json:
        _emit(args, {"text": res.text, "lossy": res.lossy, "dropped": res.dropped}, "")
    elif not args.out:
        sys.stdout.buffer.write(res.text.encode("ascii"))
        sys.stdout.flush()
    if res.lossy:
        print(f"warning: {len(res.dropped)} character(s) replaced by '?'", file=sys.stderr)
    return 0


def cmd_serve(args, cfg: RunConfig) -> int:  # pragma: no cover - blocking
    from wxtrans.service.api import serve
    from wxtrans.service.core import ServiceSettings

    env = ServiceSettings.from_env()
    settings = ServiceSettings(
        store=args.store or cfg.store or env.store,
        bind=args.bind or cfg.bind or env.bind,
        token=args.token or cfg.token or env.token,
        engine=args.engine or cfg.engine or env.engine,
        reverse_engine=args.reverse_engine or cfg.reverse_engine or env.reverse_engine,
        scorer=args.scorer or cfg.scorer or env.scorer,
        tm_path=cfg.tm or env.tm_path,
        termbase_path=cfg.termbase or env.termbase_path,
    )
    settings.host_port()
    serve(settings)
    return 0


def _weights(text: str) -> list[float]:
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("weights are four comma-separated numbers") from None
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("weights are four comma-separated numbers")
    return parts


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run config")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="wxtrans", description="Weather-product translation quality toolkit")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("score", parents=[common], help="score hypotheses against references")
    s.add_argument("--hyp", help="hypothesis file, one segment per line")
    s.add_argument("--ref", help="reference file, one segment per line")
    s.add_argument("--src", help="source file (needed for COMET)")
    s.add_argument("--scorer", help="external scorer command or URL")
    s.add_argument("--job", help="job id to read scores for from --store")
    s.add_argument("--store", help="service store database")
    s.set_defaults(func=cmd_score)

    t = sub.add_parser("translate", parents=[common], help="translate a product file")
    t.add_argument("product")
    t.add_argument("--target")
    t.add_argument("--engine")
    t.add_argument("--type", help="product type when the header does not say")
    t.add_argument("--office")
    t.add_argument("--lang", default="en", help="source language")
    t.add_argument("--issued", help="issuance time, ISO 8601")
    t.add_argument("--tm", help="translation memory JSONL (updated in place)")
    t.add_argument("--termbase")
    t.add_argument("--no-disclaimer", action="store_true")
    t.add_argument("--out", help="write the translated product here")
    t.add_argument("--job-out", help="write the job record JSON here")
    t.set_defaults(func=cmd_translate)

    b = sub.add_parser("backscore", parents=[common], help="back-translate a job and score it")
    b.add_argument("job", help="job JSON written by translate --job-out")
    b.add_argument("--reverse-engine")
    b.add_argument("--scorer")
    b.add_argument("--out", help="write the job report JSON here")
    b.set_defaults(func=cmd_backscore)

    r = sub.add_parser("report", parents=[common], help="aggregate scores into a report card")
    r.add_argument("scores", nargs="+", help="job report JSON files or segment-score JSONL files")
    r.add_argument("--type")
    r.add_argument("--lang", help="language pair (en-es) or target code (es)")
    r.add_argument("--since")
    r.add_argument("--until")
    r.add_argument("--worst", type=int, default=5)
    r.add_argument("--html")
    r.add_argument("--csv")
    r.set_defaults(func=cmd_report)

    m = sub.add_parser("tm", help="translation memory")
    msub = m.add_subparsers(dest="tm_cmd", required=True)
    ins = msub.add_parser("insert", parents=[common])
    ins.add_argument("--tm")
    ins.add_argument("--source", required=True)
    ins.add_argument("--target", required=True)
    ins.add_argument("--pair", required=True)
    ins.add_argument("--status", default="machine", choices=["machine", "edited", "reviewed"])
    ins.add_argument("--origin", default="human", choices=["engine", "memory", "human"])
    look = msub.add_parser("lookup", parents=[common])
    look.add_argument("--tm")
    look.add_argument("--source", required=True)
    look.add_argument("--pair", required=True)
    look.add_argument("--threshold", type=float, default=75.0)
    rev = msub.add_parser("review", parents=[common])
    rev.add_argument("--tm")
    rev.add_argument("--id", required=True)
    rev.add_argument("--reviewer", required=True)
    m.set_defaults(func=cmd_tm)

    h = sub.add_parser("harvest", parents=[common], help="frequent candidate terms in a corpus")
    h.add_argument("corpus", nargs="+")
    h.add_argument("--stoplist")
    h.add_argument("--min-freq", type=int, default=2)
    h.add_argument("--max-len", type=int, default=3)
    h.add_argument("--top", type=int)
    h.set_defaults(func=cmd_harvest)

    y = sub.add_parser("synth", parents=[common], help="synthetic template sentences")
    y.add_argument("--n", type=int, default=200)
    y.add_argument("--seed", type=int, default=0)
    y.add_argument("--templates")
    y.set_defaults(func=cmd_synth)

    g = sub.add_parser("geo", help="LEP analysis")
    gsub = g.add_subparsers(dest="geo_cmd", required=True)
    gp = gsub.add_parser("priority", parents=[common])
    gp.add_argument("--in", dest="input", required=True, help="language table CSV")
    gp.add_argument("--ratio", type=float, default=0.35)
    gp.add_argument("--min-lep", type=int, default=200_000)
    for name in ("allocate", "rank"):
        ga = gsub.add_parser(name, parents=[common])
        ga.add_argument("--counties", required=True)
        ga.add_argument("--overlaps", required=True)
        ga.add_argument("--tracts")
        ga.add_argument("--areas", help="JSON {cwa_id: area}")
        if name == "allocate":
            ga.add_argument("--out", help="directory for dashboard CSV and JSON")
        else:
            ga.add_argument("--factors", required=True, help="CSV cwa_id,resources,hazards")
            ga.add_argument("--weights", type=_weights, help="four comma-separated weights")
    g.set_defaults(func=cmd_geo)

    d = sub.add_parser("diet", parents=[common], help="balanced monthly job selection")
    d.add_argument("--catalog", required=True, help="JSON list of {product_id, season, hazard, region}")
    d.add_argument("--month", type=int, required=True)
    d.add_argument("--k", type=int, required=True)
    d.set_defaults(func=cmd_diet)

    a = sub.add_parser("ascii-safe", parents=[common], help="reduce text to ASCII")
    a.add_argument("--in", dest="input", default="-")
    a.add_argument("--out")
    a.add_argument("--policy", default="strip_diacritics", choices=["strip_diacritics", "reject_non_latin"])
    a.set_defaults(func=cmd_ascii)

    v = sub.add_parser("serve", parents=[common], help="run the HTTP service")
    v.add_argument("--store")
    v.add_argument("--bind")
    v.add_argument("--token")
    v.add_argument("--engine")
    v.add_argument("--reverse-engine")
    v.add_argument("--scorer")
    v.set_defaults(func=cmd_serve)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors this way
        return int(exc.code or 0)
    try:
        cfg = RunConfig.load(args.config)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"wxtrans: error: {exc}", file=sys.stderr)
        return 2
    except ConfigurationError as exc:
        print(f"wxtrans: configuration error: {exc}", file=sys.stderr)
        return 2
    except WxTransError as exc:
        print(f"wxtrans: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
