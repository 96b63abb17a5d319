from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace
from enum import Enum
from importlib import resources
from pathlib import Path

from wxtrans.errors import InvalidArgument


class Smoothing(str, Enum):
    NONE = "none"
    EPSILON = "epsilon"
    EXPONENTIAL = "exponential"


class CasePolicy(str, Enum):
    PRESERVE = "preserve"
    LOWERCASE = "lowercase"


def _default_case() -> dict[str, CasePolicy]:
    return {
        "bleu": CasePolicy.PRESERVE,
        "chrf": CasePolicy.PRESERVE,
        "fuzz": CasePolicy.PRESERVE,
        "ter": CasePolicy.LOWERCASE,
    }


@dataclass(frozen=True)
class MetricConfig:
    """Knobs for every metric in :mod:`wxtrans.metrics`.

    ``bleu_effective_order`` is off by default: a hypothesis shorter than
    ``bleu_max_order`` tokens then scores 0, which is what reproduces the
    French back-translation row of the reference benchmark.
    """

    bleu_max_order: int = 4
    bleu_smoothing: Smoothing = Smoothing.EXPONENTIAL
    bleu_epsilon: float = 0.1
    bleu_effective_order: bool = False
    chrf_char_order: int = 6
    chrf_word_order: int = 2
    chrf_beta: float = 2.0
    case_policy: dict[str, CasePolicy] = field(default_factory=_default_case)
    ter_shifts_enabled: bool = True
    ter_max_shift_iterations: int = 10
    ter_max_shift_size: int = 10
    ter_max_shift_distance: int = 50

    def __post_init__(self) -> None:
        for name in ("bleu_max_order", "chrf_char_order", "chrf_word_order"):
            if getattr(self, name) < 1:
                raise InvalidArgument(f"{name} must be >= 1")
        if self.chrf_beta <= 0:
            raise InvalidArgument("chrf_beta must be > 0")
        object.__setattr__(self, "bleu_smoothing", Smoothing(self.bleu_smoothing))
        merged = _default_case()
        for metric, policy in self.case_policy.items():
            if metric not in merged:
                raise InvalidArgument(f"unknown metric in case_policy: {metric}")
            merged[metric] = CasePolicy(policy)
        object.__setattr__(self, "case_policy", merged)

    def case(self, metric: str) -> CasePolicy:
        return self.case_policy[metric]

    def with_(self, **changes) -> MetricConfig:
        return replace(self, **changes)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["bleu_smoothing"] = self.bleu_smoothing.value
        d["case_policy"] = {k: v.value for k, v in self.case_policy.items()}
        return d

    @classmethod
    def from_dict(cls, data: dict) -> MetricConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidArgument(f"unknown metric config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path: str | Path) -> MetricConfig:
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    @classmethod
    def pinned(cls) -> MetricConfig:
        """The shipped configuration that reproduces the benchmark table."""
        text = resources.files("wxtrans.data").joinpath("metric_config.json").read_text("utf-8")
        data = json.loads(text)
        data.pop("_comment", None)
        return cls.from_dict(data)
