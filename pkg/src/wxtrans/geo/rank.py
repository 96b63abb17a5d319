"""Weighted, min-max normalized ranking of forecast offices."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from wxtrans.errors import InvalidArgument
from wxtrans.geo.allocate import CwaStats

FACTORS = ("distinct_languages", "lep_density", "resources", "hazards")
DEFAULT_WEIGHTS = {f: 0.25 for f in FACTORS}


class MissingFactorWarning(UserWarning):
    pass


@dataclass(frozen=True)
class RankedWfo:
    rank: int
    cwa_id: str
    score: float
    factors: dict[str, float]
    normalized: dict[str, float]


def _weights(weights) -> dict[str, Fraction]:
    if weights is None:
        weights = DEFAULT_WEIGHTS
    if not isinstance(weights, Mapping):
        weights = dict(zip(FACTORS, weights, strict=True)) if len(weights) == len(FACTORS) else None
        if weights is None:
            raise InvalidArgument(f"need {len(FACTORS)} weights: {', '.join(FACTORS)}")
    unknown = set(weights) - set(FACTORS)
    if unknown:
        raise InvalidArgument(f"unknown ranking factors: {sorted(unknown)}")
    w = {f: Fraction(repr(float(weights.get(f, 0.0)))) for f in FACTORS}
    if any(v < 0 for v in w.values()):
        raise InvalidArgument("weights must be nonnegative")
    if abs(float(sum(w.values())) - 1.0) > 1e-9:
        raise InvalidArgument(f"weights must sum to 1, got {float(sum(w.values()))}")
    return w


def _exact(value) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


def rank_wfos(
    stats: Mapping[str, CwaStats] | Sequence[CwaStats],
    resources: Mapping[str, float],
    hazards: Mapping[str, float],
    weights: Mapping[str, float] | Sequence[float] | None = None,
) -> list[RankedWfo]:
    """Rank CWAs by ``sum(w_f * minmax(f))`` over the four factors.

    Every factor is oriented so larger means higher priority. A CWA missing
    any factor is left out with a warning. Arithmetic is exact, so equal
    inputs give equal scores and ties fall to alphabetical CWA order.
    """
    w = _weights(weights)
    items = stats.values() if isinstance(stats, Mapping) else stats
    raw: dict[str, dict[str, Fraction]] = {}
    for s in items:
        values = {
            "distinct_languages": s.distinct_language_count,
            "lep_density": s.lep_density,
            "resources": resources.get(s.cwa_id),
            "hazards": hazards.get(s.cwa_id),
        }
        missing = [f for f, v in values.items() if v is None]
        if missing:
            warnings.warn(f"{s.cwa_id}: missing {', '.join(missing)}; excluded from ranking", MissingFactorWarning, stacklevel=2)
            continue
        raw[s.cwa_id] = {f: _exact(v) for f, v in values.items()}
    if not raw:
        return []
    lo = {f: min(v[f] for v in raw.values()) for f in FACTORS}
    hi = {f: max(v[f] for v in raw.values()) for f in FACTORS}
    scored = []
    for cwa, vals in raw.items():
        norm = {f: (vals[f] - lo[f]) / (hi[f] - lo[f]) if hi[f] > lo[f] else Fraction(0) for f in FACTORS}
        score = sum(w[f] * norm[f] for f in FACTORS)
        scored.append((score, cwa, vals, norm))
    scored.sort(key=lambda t: (-t[0], t[1]))
    return [
        RankedWfo(
            rank=i,
            cwa_id=cwa,
            score=float(score),
            factors={f: float(v) for f, v in vals.items()},
            normalized={f: float(v) for f, v in norm.items()},
        )
        for i, (score, cwa, vals, norm) in enumerate(scored, 1)
    ]
