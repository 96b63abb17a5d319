"""Pick a small set of past jobs spanning seasons, hazards and regions.

Each catalog entry covers the cells ``season x hazard x region`` spanned by
its value sets. Selection is greedy set cover; when greedy leaves cells
uncovered within ``k`` picks on a small catalog, an exhaustive search finds
a cover of size <= k if one exists.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from wxtrans.errors import InvalidArgument

EXACT_SEARCH_LIMIT = 16


class Season(str, Enum):
    WINTER = "winter"
    SPRING = "spring"
    SUMMER = "summer"
    FALL = "fall"


class Hazard(str, Enum):
    TROPICAL = "tropical"
    WINTER_STORM = "winter_storm"
    SEVERE = "severe"
    FLOOD = "flood"
    HEAT = "heat"
    FIRE = "fire"
    MARINE = "marine"
    WIND = "wind"
    ROUTINE = "routine"


class Region(str, Enum):
    # NWS administrative regions
    EASTERN = "eastern"
    CENTRAL = "central"
    SOUTHERN = "southern"
    WESTERN = "western"
    ALASKA = "alaska"
    PACIFIC = "pacific"


def _values(enum, raw, label: str) -> frozenset:
    items = [raw] if isinstance(raw, (str, Enum)) else list(raw)
    if not items:
        raise InvalidArgument(f"{label} must have at least one value")
    try:
        return frozenset(enum(v) for v in items)
    except ValueError as exc:
        raise InvalidArgument(f"bad {label}: {exc}") from None


@dataclass(frozen=True)
class JobCatalogEntry:
    product_id: str
    season: frozenset
    hazard: frozenset
    region: frozenset

    def __init__(self, product_id: str, season, hazard, region):
        object.__setattr__(self, "product_id", product_id)
        object.__setattr__(self, "season", _values(Season, season, "season"))
        object.__setattr__(self, "hazard", _values(Hazard, hazard, "hazard"))
        object.__setattr__(self, "region", _values(Region, region, "region"))

    @property
    def cells(self) -> frozenset:
        return frozenset(product(self.season, self.hazard, self.region))

    def to_dict(self) -> dict:
        return {
            "product_id": self.product_id,
            "season": sorted(v.value for v in self.season),
            "hazard": sorted(v.value for v in self.hazard),
            "region": sorted(v.value for v in self.region),
        }


@dataclass(frozen=True)
class DietSelection:
    month: int
    entries: tuple[JobCatalogEntry, ...]
    covered: int
    coverable: int
    method: str  # "greedy" | "exact"

    @property
    def complete(self) -> bool:
        return self.covered == self.coverable


def _greedy(catalog: Sequence[JobCatalogEntry], k: int, prior: Counter) -> list[int]:
    uncovered = set().union(*(e.cells for e in catalog))
    regions = Counter(prior)
    chosen: list[int] = []
    while uncovered and len(chosen) < k:
        best = None
        best_key = None
        for i, e in enumerate(catalog):
            if i in chosen:
                continue
            gain = len(e.cells & uncovered)
            if gain == 0:
                continue
            key = (-gain, sum(regions[r] for r in e.region), i)
            if best_key is None or key < best_key:
                best, best_key = i, key
        if best is None:
            break
        chosen.append(best)
        uncovered -= catalog[best].cells
        regions.update(catalog[best].region)
    return chosen


def _exact(catalog: Sequence[JobCatalogEntry], k: int, target: frozenset) -> list[int] | None:
    for size in range(1, min(k, len(catalog)) + 1):
        for combo in combinations(range(len(catalog)), size):
            if frozenset().union(*(catalog[i].cells for i in combo)) == target:
                return list(combo)
    return None


def balanced_diet_select(
    catalog: Sequence[JobCatalogEntry],
    month: int,
    k: int,
    prior_regions: Mapping[str, int] | None = None,
) -> DietSelection:
    """Choose up to ``k`` entries covering as many cells as possible.

    ``month`` (1-12) labels the training round; ``prior_regions`` counts
    earlier selections per region and steers ties toward neglected regions.
    """
    if not catalog:
        raise InvalidArgument("catalog is empty")
    if k < 1:
        raise InvalidArgument("k must be >= 1")
    if not 1 <= int(month) <= 12:
        raise InvalidArgument(f"month must be 1-12, got {month}")
    prior = Counter({Region(r): n for r, n in (prior_regions or {}).items()})
    target = frozenset().union(*(e.cells for e in catalog))
    picked = _greedy(catalog, k, prior)
    method = "greedy"
    covered = frozenset().union(*(catalog[i].cells for i in picked)) if picked else frozenset()
    if covered != target and len(catalog) <= EXACT_SEARCH_LIMIT:
        exact = _exact(catalog, k, target)
        if exact is not None:
            picked, covered, method = exact, target, "exact"
    return DietSelection(int(month), tuple(catalog[i] for i in picked), len(covered), len(target), method)


def load_catalog(rows: Iterable[Mapping]) -> list[JobCatalogEntry]:
    """Entries from dicts; multi-valued dimensions may be lists or ``;``-joined strings."""
    out = []
    for row in rows:
        def dim(name):
            v = row.get(name)
            if isinstance(v, str):
                return [p.strip() for p in v.split(";") if p.strip()]
            return v or []

        out.append(JobCatalogEntry(row["product_id"], dim("season"), dim("hazard"), dim("region")))
    return out
