"""County-to-CWA allocation with tract override and conserving integer rounding."""

from __future__ import annotations

import csv
import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence, TextIO

from wxtrans.errors import InvalidArgument
from wxtrans.geo.census import GeoLevel, LepRecord, ParseError, _open_text

OVERLAP_HEADER = ["county_id", "cwa_id", "fraction", "tract_ids"]
FRACTION_TOLERANCE = 1e-9


def _fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(str(value).strip())


@dataclass(frozen=True)
class CwaOverlap:
    county_id: str
    cwa_id: str
    fraction: Fraction
    tract_ids: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        try:
            frac = _fraction(self.fraction)
        except (ValueError, ZeroDivisionError):
            raise InvalidArgument(f"bad fraction {self.fraction!r}") from None
        if not 0 <= frac <= 1:
            raise InvalidArgument(f"{self.county_id}->{self.cwa_id}: fraction {frac} outside [0, 1]")
        object.__setattr__(self, "fraction", frac)
        object.__setattr__(self, "tract_ids", tuple(self.tract_ids))


def validate_overlaps(overlaps: Sequence[CwaOverlap]) -> None:
    sums: dict[str, Fraction] = defaultdict(Fraction)
    pairs = set()
    for o in overlaps:
        if (o.county_id, o.cwa_id) in pairs:
            raise InvalidArgument(f"duplicate overlap {o.county_id}->{o.cwa_id}")
        pairs.add((o.county_id, o.cwa_id))
        sums[o.county_id] += o.fraction
    bad = sorted(c for c, s in sums.items() if abs(float(s) - 1.0) > FRACTION_TOLERANCE)
    if bad:
        raise InvalidArgument(f"overlap fractions do not sum to 1 for counties: {', '.join(bad)}")


def load_overlaps(source: str | Path | TextIO) -> list[CwaOverlap]:
    """Parse ``county_id,cwa_id,fraction,tract_ids`` (tract ids ``;``-separated)."""
    fh = _open_text(source)
    try:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != OVERLAP_HEADER:
            raise ParseError(1, f"header must be {','.join(OVERLAP_HEADER)}")
        out = []
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(OVERLAP_HEADER):
                raise ParseError(line, f"expected {len(OVERLAP_HEADER)} fields, got {len(row)}")
            tracts = tuple(t.strip() for t in row[3].split(";") if t.strip())
            try:
                out.append(CwaOverlap(row[0].strip(), row[1].strip(), row[2], tracts))
            except InvalidArgument as exc:
                raise ParseError(line, str(exc)) from None
    finally:
        if fh is not source:
            fh.close()
    validate_overlaps(out)
    return out


@dataclass
class CwaStats:
    cwa_id: str
    languages: dict[str, tuple[int, int]] = field(default_factory=dict)  # language -> (total, lep)
    area: float | None = None

    @property
    def distinct_language_count(self) -> int:
        return sum(1 for total, _ in self.languages.values() if total > 0)

    @property
    def population(self) -> int:
        return sum(total for total, _ in self.languages.values())

    @property
    def lep_total(self) -> int:
        return sum(lep for _, lep in self.languages.values())

    @property
    def lep_density(self) -> float | None:
        """LEP speakers per unit area; ``None`` when the area is unknown."""
        if not self.area:
            return None
        return self.lep_total / self.area

    def to_dict(self) -> dict:
        return {
            "cwa_id": self.cwa_id,
            "languages": {k: list(v) for k, v in sorted(self.languages.items())},
            "area": self.area,
            "distinct_language_count": self.distinct_language_count,
            "population": self.population,
            "lep_total": self.lep_total,
            "lep_density": self.lep_density,
        }

    @classmethod
    def from_dict(cls, d: dict) -> CwaStats:
        return cls(d["cwa_id"], {k: (int(v[0]), int(v[1])) for k, v in d["languages"].items()}, d.get("area"))


def largest_remainder(n: int, weights: Sequence[tuple[str, Fraction]]) -> dict[str, int]:
    """Split integer ``n`` in proportion to ``weights`` so the parts sum to ``n``.

    Leftover units go to the largest fractional remainders; ties go to the
    key that sorts first.
    """
    total = sum(w for _, w in weights)
    if total <= 0:
        raise InvalidArgument("weights must have a positive sum")
    quotas = [(k, n * w / total) for k, w in weights]
    out = {k: int(q) for k, q in quotas}  # floor: quotas are nonnegative
    left = n - sum(out.values())
    order = sorted(quotas, key=lambda kq: (-(kq[1] - int(kq[1])), kq[0]))
    for k, _ in order[:left]:
        out[k] += 1
    return out


def _tract_weights(parts, tracts, language):
    lep_w, non_w = [], []
    for o in parts:
        cells = [tracts[t].get(language, (0, 0)) for t in o.tract_ids]
        lep_w.append((o.cwa_id, Fraction(sum(lep for _, lep in cells))))
        non_w.append((o.cwa_id, Fraction(sum(total - lep for total, lep in cells))))
    return lep_w, non_w


def allocate_to_cwa(
    county_records: Iterable[LepRecord],
    overlaps: Sequence[CwaOverlap],
    tract_records: Iterable[LepRecord] | None = None,
    areas: Mapping[str, float] | None = None,
) -> dict[str, CwaStats]:
    """Distribute each county's per-language counts to the CWAs overlapping it.

    A split county whose overlaps all list tracts with records uses tract sums
    as weights; otherwise the overlap fractions are the weights. LEP and
    non-LEP counts are rounded separately with largest remainders, so every
    language's national total is conserved and lep <= total everywhere.
    """
    validate_overlaps(overlaps)
    by_county: dict[str, dict[str, tuple[int, int]]] = defaultdict(dict)
    for r in county_records:
        if r.geo_level is not GeoLevel.COUNTY:
            continue
        by_county[r.geo_id][r.language] = (r.total_speakers, r.lep_speakers)
    tracts: dict[str, dict[str, tuple[int, int]]] = defaultdict(dict)
    for r in tract_records or ():
        if r.geo_level is GeoLevel.TRACT:
            tracts[r.geo_id][r.language] = (r.total_speakers, r.lep_speakers)

    county_overlaps: dict[str, list[CwaOverlap]] = defaultdict(list)
    for o in overlaps:
        county_overlaps[o.county_id].append(o)
    missing = sorted(set(county_overlaps) - set(by_county))
    if missing:
        raise InvalidArgument(f"counties referenced by overlaps but missing from records: {', '.join(missing)}")
    unmapped = sorted(set(by_county) - set(county_overlaps))
    if unmapped:
        raise InvalidArgument(f"counties with records but no CWA overlap: {', '.join(unmapped)}")

    stats: dict[str, CwaStats] = {}
    for o in overlaps:
        stats.setdefault(o.cwa_id, CwaStats(o.cwa_id, area=(areas or {}).get(o.cwa_id)))
    acc: dict[str, dict[str, list[int]]] = defaultdict(lambda: defaultdict(lambda: [0, 0]))

    for county in sorted(county_overlaps):
        parts = sorted(county_overlaps[county], key=lambda o: o.cwa_id)
        use_tracts = len(parts) > 1 and all(o.tract_ids and all(t in tracts for t in o.tract_ids) for o in parts)
        if tracts and len(parts) > 1 and not use_tracts and any(o.tract_ids for o in parts):
            warnings.warn(f"county {county}: tract records incomplete; using overlap fractions", stacklevel=2)
        for language, (total, lep) in sorted(by_county[county].items()):
            frac_w = [(o.cwa_id, o.fraction) for o in parts]
            lep_w = nonlep_w = frac_w
            if use_tracts:
                t_lep, t_non = _tract_weights(parts, tracts, language)
                if sum(w for _, w in t_lep) > 0:
                    lep_w = t_lep
                if sum(w for _, w in t_non) > 0:
                    nonlep_w = t_non
            lep_split = largest_remainder(lep, lep_w) if lep else {c: 0 for c, _ in frac_w}
            non = total - lep
            non_split = largest_remainder(non, nonlep_w) if non else {c: 0 for c, _ in frac_w}
            for cwa, _ in frac_w:
                a = acc[cwa][language]
                a[0] += lep_split[cwa] + non_split[cwa]
                a[1] += lep_split[cwa]

    for cwa, langs in acc.items():
        stats[cwa].languages = {lang: (v[0], v[1]) for lang, v in sorted(langs.items())}
    return dict(sorted(stats.items()))
