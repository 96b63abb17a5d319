"""Dashboard files: a per-CWA CSV and a GeoJSON-properties JSON keyed by CWA id."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from decimal import ROUND_FLOOR, Decimal
from pathlib import Path
from typing import Mapping

from wxtrans.geo.allocate import CwaStats

TOP_N = 5
_CENT = Decimal("0.01")


def _pct(part: int, whole: int) -> Decimal:
    if whole <= 0:
        return Decimal("0.00")
    return (Decimal(100) * part / whole).quantize(_CENT, rounding=ROUND_FLOOR)


@dataclass(frozen=True)
class LanguageShare:
    language: str
    lep: int
    pct: Decimal


def top_languages(stats: CwaStats, n: int = TOP_N) -> tuple[list[LanguageShare], LanguageShare]:
    """Largest LEP languages and an "other" bucket.

    Shares are floored to 0.01; when other languages exist, the "other"
    bucket closes the gap to 100, so the shares never exceed 100 in total.
    """
    lep_total = stats.lep_total
    ranked = sorted(((lang, lep) for lang, (_, lep) in stats.languages.items() if lep > 0), key=lambda t: (-t[1], t[0]))
    top = [LanguageShare(lang, lep, _pct(lep, lep_total)) for lang, lep in ranked[:n]]
    other_lep = sum(lep for _, lep in ranked[n:])
    other_pct = Decimal(100) - sum((s.pct for s in top), Decimal(0)) if other_lep else Decimal("0.00")
    return top, LanguageShare("other", other_lep, other_pct.quantize(_CENT))


def dashboard_csv(stats: Mapping[str, CwaStats], n: int = TOP_N) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["cwa_id", "distinct_languages", "population", "lep_total"]
    for i in range(1, n + 1):
        header += [f"language_{i}", f"lep_{i}", f"pct_{i}"]
    header += ["other_lep", "other_pct"]
    w.writerow(header)
    for cwa in sorted(stats):
        s = stats[cwa]
        top, other = top_languages(s, n)
        row = [cwa, s.distinct_language_count, s.population, s.lep_total]
        for i in range(n):
            row += [top[i].language, top[i].lep, str(top[i].pct)] if i < len(top) else ["", "", ""]
        row += [other.lep, str(other.pct)]
        w.writerow(row)
    return buf.getvalue()


def dashboard_properties(stats: Mapping[str, CwaStats], n: int = TOP_N) -> str:
    props = {}
    for cwa in sorted(stats):
        s = stats[cwa]
        top, other = top_languages(s, n)
        props[cwa] = {
            "cwa_id": cwa,
            "distinct_languages": s.distinct_language_count,
            "population": s.population,
            "lep_total": s.lep_total,
            "lep_density": s.lep_density,
            "top_languages": [{"language": t.language, "lep": t.lep, "pct": float(t.pct)} for t in top],
            "other": {"lep": other.lep, "pct": float(other.pct)},
        }
    return json.dumps(props, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def export_dashboard(stats: Mapping[str, CwaStats], out_dir: str | Path, n: int = TOP_N) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "cwa_languages.csv"
    json_path = out / "cwa_properties.json"
    csv_path.write_text(dashboard_csv(stats, n), encoding="utf-8", newline="")
    json_path.write_text(dashboard_properties(stats, n), encoding="utf-8", newline="")
    return csv_path, json_path
