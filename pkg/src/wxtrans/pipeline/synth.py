"""Template-driven synthetic sentences for engine training corpora."""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from wxtrans.errors import InvalidArgument

_MARKER = re.compile(r"\[([^\[\]]+)\]")


@dataclass(frozen=True)
class SyntheticTemplate:
    pattern: str
    slots: Mapping[str, tuple[str, ...]]

    def __post_init__(self) -> None:
        slots = {k: tuple(str(v) for v in vals) for k, vals in self.slots.items()}
        for name, vals in slots.items():
            if not vals:
                raise InvalidArgument(f"slot [{name}] has no values")
        missing = [m for m in self.markers if m not in slots]
        if missing:
            raise InvalidArgument(f"markers without slots: {missing}")
        object.__setattr__(self, "slots", slots)

    @property
    def markers(self) -> list[str]:
        """Marker names in order of first appearance."""
        return list(dict.fromkeys(_MARKER.findall(self.pattern)))

    def fill(self, rng: random.Random) -> str:
        chosen = {name: rng.choice(self.slots[name]) for name in self.markers}
        return _MARKER.sub(lambda m: chosen[m.group(1)], self.pattern)

    @classmethod
    def from_dict(cls, d: dict) -> SyntheticTemplate:
        extra = set(d) - {"pattern", "slots"}
        if extra:
            raise InvalidArgument(f"unknown template keys: {sorted(extra)}")
        return cls(d["pattern"], d.get("slots", {}))


def generate_synthetic(templates: Sequence[SyntheticTemplate], n: int, seed: int = 0) -> list[str]:
    """``n`` sentences, templates taken round-robin, one draw per marker."""
    if n < 0:
        raise InvalidArgument("n must be >= 0")
    if not templates:
        raise InvalidArgument("at least one template is required")
    rng = random.Random(seed)
    return [templates[i % len(templates)].fill(rng) for i in range(n)]


def load_templates(path: str | Path | None = None) -> list[SyntheticTemplate]:
    """Read a JSON list of ``{pattern, slots}``; ``None`` loads the shipped set."""
    if path is None:
        raw = resources.files("wxtrans.data").joinpath("synthetic_templates.json").read_text(encoding="utf-8")
    else:
        raw = Path(path).read_text(encoding="utf-8")
    data = json.loads(raw)
    if isinstance(data, dict):
        data = data.get("templates", [])
    return [SyntheticTemplate.from_dict(d) for d in data]
