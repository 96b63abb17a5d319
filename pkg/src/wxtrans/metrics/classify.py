from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum

from wxtrans.errors import InvalidArgument


class Rating(str, Enum):
    GOOD = "good"
    NEEDS_REVIEW = "needs_review"
    BAD = "bad"


@dataclass(frozen=True)
class Benchmark:
    good: float
    bad: float
    higher_is_better: bool = True

    def rate(self, value: float) -> Rating:
        if self.higher_is_better:
            if value > self.good:
                return Rating.GOOD
            if value < self.bad:
                return Rating.BAD
        else:
            if value < self.good:
                return Rating.GOOD
            if value > self.bad:
                return Rating.BAD
        return Rating.NEEDS_REVIEW


# thresholds are exclusive; boundary values go to human review
BENCHMARKS: dict[str, Benchmark] = {
    "bleu": Benchmark(good=90, bad=50),
    "fuzz": Benchmark(good=90, bad=50),
    "chrf_pp": Benchmark(good=90, bad=50),
    "comet": Benchmark(good=0.7, bad=0.3),
    "ter": Benchmark(good=15, bad=30, higher_is_better=False),
}

METRIC_NAMES = ("bleu", "fuzz", "chrf_pp", "comet", "ter")


@dataclass(frozen=True)
class MetricScores:
    bleu: float
    fuzz: int
    chrf_pp: float
    ter: float
    comet: float | None = None
    comet_scorer: str | None = None

    def __post_init__(self) -> None:
        for name in ("bleu", "fuzz", "chrf_pp"):
            v = getattr(self, name)
            if not 0 <= v <= 100:
                raise InvalidArgument(f"{name}={v} outside [0, 100]")
        if self.ter < 0:
            raise InvalidArgument(f"ter={self.ter} is negative")
        if self.comet is not None and not 0 <= self.comet <= 1:
            raise InvalidArgument(f"comet={self.comet} outside [0, 1]")

    def values(self) -> dict[str, float]:
        """Metric values that are present, in table order."""
        return {m: getattr(self, m) for m in METRIC_NAMES if getattr(self, m) is not None}

    @property
    def ratings(self) -> dict[str, Rating]:
        return classify(self)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ratings"] = {k: v.value for k, v in self.ratings.items()}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> MetricScores:
        return cls(**{k: v for k, v in d.items() if k != "ratings"})


def classify(scores: MetricScores) -> dict[str, Rating]:
    return {name: BENCHMARKS[name].rate(value) for name, value in scores.values().items()}
