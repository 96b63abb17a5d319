"""Report cards: unweighted aggregates over scored segments, plus file renderers."""

from __future__ import annotations

import csv
import html
import io
import statistics
from dataclasses import dataclass
from typing import Iterable

from wxtrans.errors import InvalidArgument
from wxtrans.metrics.classify import METRIC_NAMES, Rating
from wxtrans.pipeline.product import parse_timestamp
from wxtrans.pipeline.scoring import SegmentScore
from wxtrans.tmem.memory import format_lang_pair, parse_lang_pair


@dataclass(frozen=True)
class MetricSummary:
    count: int
    mean: float
    median: float


@dataclass(frozen=True)
class ReportCard:
    filters: dict
    count: int
    metrics: dict[str, MetricSummary]
    histogram: dict[str, dict[str, int]]
    worst: tuple[SegmentScore, ...] = ()
    worst_by: str | None = None

    def to_dict(self) -> dict:
        return {
            "filters": self.filters,
            "count": self.count,
            "metrics": {k: v.__dict__ for k, v in self.metrics.items()},
            "histogram": self.histogram,
            "worst_by": self.worst_by,
            "worst": [w.to_dict() for w in self.worst],
        }


@dataclass(frozen=True)
class ReportFilter:
    product_type: str | None = None
    lang_pair: str | None = None
    since: str | None = None  # inclusive
    until: str | None = None  # exclusive

    def __post_init__(self) -> None:
        if self.product_type:
            object.__setattr__(self, "product_type", self.product_type.upper())
        if self.lang_pair:
            # a bare code such as "es" selects every pair with that target
            lp = self.lang_pair.strip().lower()
            if "-" in lp or "_" in lp:
                lp = format_lang_pair(parse_lang_pair(lp))
            elif not lp.isalpha():
                raise InvalidArgument(f"bad language filter {self.lang_pair!r}")
            object.__setattr__(self, "lang_pair", lp)

    def matches(self, s: SegmentScore) -> bool:
        if self.product_type and s.product_type != self.product_type:
            return False
        if self.lang_pair:
            got = s.lang_pair if "-" in self.lang_pair else s.lang_pair.rsplit("-", 1)[-1]
            if got != self.lang_pair:
                return False
        if self.since or self.until:
            t = parse_timestamp(s.issued_at)
            if self.since and t < parse_timestamp(self.since):
                return False
            if self.until and t >= parse_timestamp(self.until):
                return False
        return True

    def as_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v}


def report_card(
    records: Iterable[SegmentScore],
    product_type: str | None = None,
    lang_pair: str | None = None,
    since: str | None = None,
    until: str | None = None,
    worst_k: int = 5,
) -> ReportCard:
    """Aggregate every matching segment with equal weight."""
    flt = ReportFilter(product_type, lang_pair, since, until)
    chosen = [s for s in records if flt.matches(s)]
    metrics: dict[str, MetricSummary] = {}
    hist: dict[str, dict[str, int]] = {}
    for name in METRIC_NAMES:
        vals = [getattr(s.scores, name) for s in chosen if getattr(s.scores, name) is not None]
        if not vals:
            continue
        metrics[name] = MetricSummary(len(vals), statistics.fmean(vals), statistics.median(vals))
        counts = {r.value: 0 for r in Rating}
        for s in chosen:
            r = s.scores.ratings.get(name)
            if r is not None:
                counts[r.value] += 1
        hist[name] = counts
    worst_by = None
    worst: list[SegmentScore] = []
    if chosen:
        worst_by = "comet" if all(s.scores.comet is not None for s in chosen) else "chrf_pp"
        worst = sorted(chosen, key=lambda s: (getattr(s.scores, worst_by), s.job_id, s.index))[:worst_k]
    return ReportCard(flt.as_dict(), len(chosen), metrics, hist, tuple(worst), worst_by)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.3f}"
    return str(v)


def report_csv(card: ReportCard) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["metric", "count", "mean", "median", "good", "needs_review", "bad"])
    for name in METRIC_NAMES:
        m = card.metrics.get(name)
        if m is None:
            continue
        h = card.histogram[name]
        w.writerow([name, m.count, _fmt(m.mean), _fmt(m.median), h["good"], h["needs_review"], h["bad"]])
    return buf.getvalue()


def report_html(card: ReportCard, title: str = "Translation report card") -> str:
    """Self-contained HTML page; no external assets."""
    e = html.escape
    filt = ", ".join(f"{k}={v}" for k, v in card.filters.items()) or "all segments"
    rows = []
    for name in METRIC_NAMES:
        m = card.metrics.get(name)
        if m is None:
            continue
        h = card.histogram[name]
        rows.append(
            f"<tr><th>{e(name)}</th><td>{m.count}</td><td>{_fmt(m.mean)}</td><td>{_fmt(m.median)}</td>"
            f"<td class=good>{h['good']}</td><td class=review>{h['needs_review']}</td>"
            f"<td class=bad>{h['bad']}</td></tr>"
        )
    worst = "".join(
        f"<tr><td>{e(w.job_id)}</td><td>{w.index}</td><td>{e(w.product_type)}</td>"
        f"<td>{e(w.lang_pair)}</td><td>{e(w.source)}</td><td>{e(w.back)}</td>"
        f"<td>{_fmt(getattr(w.scores, card.worst_by))}</td></tr>"
        for w in card.worst
    )
    return f"""<!DOCTYPE html>
<html lang="en"><head><meta charset="utf-8"><title>{e(title)}</title>
<style>
body{{font-family:sans-serif;margin:2em}} table{{border-collapse:collapse;margin-bottom:2em}}
td,th{{border:1px solid #999;padding:4px 8px;text-align:left}}
.good{{background:#d4f4d4}} .review{{background:#fff3c4}} .bad{{background:#f8d0d0}}
</style></head><body>
<h1>{e(title)}</h1>
<p>Filter: {e(filt)}. Segments: {card.count}.</p>
<table><tr><th>metric</th><th>count</th><th>mean</th><th>median</th><th>good</th><th>needs review</th><th>bad</th></tr>
{"".join(rows)}
</table>
<h2>Worst segments{f" by {e(card.worst_by)}" if card.worst_by else ""}</h2>
<table><tr><th>job</th><th>#</th><th>type</th><th>pair</th><th>source</th><th>back-translation</th><th>score</th></tr>
{worst}
</table>
</body></html>
"""
