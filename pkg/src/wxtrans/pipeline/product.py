from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

from wxtrans.errors import InvalidArgument

# NWS text product codes the pipeline accepts; extend with register_product_type.
PRODUCT_TYPES: set[str] = {
    "AFD", "CWF", "FFA", "FFW", "HLS", "HWO", "NPW", "RFW", "SPS", "SVR",
    "TCD", "TCM", "TCP", "TCU", "TOR", "TWD", "TWO", "WSW", "ZFP",
}


def register_product_type(code: str) -> None:
    code = code.strip().upper()
    if not re.fullmatch(r"[A-Z]{3}", code):
        raise InvalidArgument(f"product type must be three letters, got {code!r}")
    PRODUCT_TYPES.add(code)


def _aware(ts: datetime) -> datetime:
    return ts if ts.tzinfo else ts.replace(tzinfo=timezone.utc)


def parse_timestamp(value) -> datetime:
    if isinstance(value, datetime):
        return _aware(value)
    try:
        return _aware(datetime.fromisoformat(str(value).replace("Z", "+00:00")))
    except ValueError:
        raise InvalidArgument(f"bad timestamp {value!r}; expected ISO 8601") from None


@dataclass(frozen=True)
class Product:
    product_type: str
    office: str
    language: str
    issued_at: datetime
    body: str
    segments: tuple[str, ...] = ()
    file_name: str = ""

    def __post_init__(self) -> None:
        code = self.product_type.strip().upper()
        if code not in PRODUCT_TYPES:
            raise InvalidArgument(f"unregistered product type {self.product_type!r}")
        if not self.body.strip():
            raise InvalidArgument("product body must be nonempty")
        object.__setattr__(self, "product_type", code)
        object.__setattr__(self, "language", self.language.strip().lower())
        object.__setattr__(self, "issued_at", parse_timestamp(self.issued_at))
        object.__setattr__(self, "segments", tuple(self.segments))

    @property
    def product_id(self) -> str:
        if self.file_name:
            return self.file_name
        return f"{self.product_type}{self.office}-{self.issued_at:%Y%m%dT%H%MZ}-{self.language}"

    def with_body(self, body: str, language: str, segments=()) -> Product:
        name = self.file_name
        if name:
            stem, dot, ext = name.rpartition(".")
            name = f"{stem}.{language}.{ext}" if dot else f"{name}.{language}"
        return replace(self, body=body, language=language, segments=tuple(segments), file_name=name)

    def to_dict(self) -> dict:
        return {
            "product_type": self.product_type,
            "office": self.office,
            "language": self.language,
            "issued_at": self.issued_at.isoformat(),
            "body": self.body,
            "segments": list(self.segments),
            "file_name": self.file_name,
        }

    @classmethod
    def from_dict(cls, d: dict) -> Product:
        known = {"product_type", "office", "language", "issued_at", "body", "segments", "file_name"}
        extra = set(d) - known
        if extra:
            raise InvalidArgument(f"unknown product fields: {sorted(extra)}")
        return cls(**d)


_WMO_RE = re.compile(r"^[A-Z]{4}\d{2} ([A-Z]{4}) \d{6}")
_PIL_RE = re.compile(r"^([A-Z]{3})([A-Z0-9]{2,3})\s*$")


def sniff_header(body: str) -> dict:
    """Best-effort product type and office from WMO/AWIPS header lines."""
    found: dict = {}
    for line in body.splitlines()[:12]:
        line = line.strip()
        m = _WMO_RE.match(line)
        if m and "office" not in found:
            found["office"] = m.group(1)
            continue
        m = _PIL_RE.match(line)
        if m and m.group(1) in PRODUCT_TYPES and "product_type" not in found:
            found["product_type"] = m.group(1)
    return found


def load_product(
    path: str | Path,
    product_type: str | None = None,
    office: str | None = None,
    language: str = "en",
    issued_at=None,
) -> Product:
    path = Path(path)
    body = path.read_text(encoding="utf-8")
    sniffed = sniff_header(body)
    product_type = product_type or sniffed.get("product_type")
    if not product_type:
        raise InvalidArgument(f"{path}: cannot infer product type; pass it explicitly")
    return Product(
        product_type=product_type,
        office=office or sniffed.get("office", "UNKN"),
        language=language,
        issued_at=parse_timestamp(issued_at) if issued_at else datetime.now(timezone.utc),
        body=body,
        file_name=path.name,
    )


@dataclass(frozen=True)
class SentenceRecord:
    index: int
    source: str
    target: str
    provenance: str  # "memory-exact" | "engine"
    segment_id: str = ""
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class TranslationJob:
    job_id: str
    product_id: str
    product_type: str
    office: str
    issued_at: str
    lang_pair: tuple[str, str]
    engine_id: str
    sentences: tuple[SentenceRecord, ...]
    processing_time: float
    status: str = "completed"
    warnings: tuple[str, ...] = ()
    deadline: str = ""
    deadline_exceeded: bool = False
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.processing_time < 0:
            raise InvalidArgument("processing_time must be >= 0")

    @property
    def provenance(self) -> list[str]:
        return [s.provenance for s in self.sentences]

    def to_dict(self) -> dict:
        return {
            "job_id": self.job_id,
            "product_id": self.product_id,
            "product_type": self.product_type,
            "office": self.office,
            "issued_at": self.issued_at,
            "lang_pair": list(self.lang_pair),
            "engine_id": self.engine_id,
            "sentences": [
                {**s.__dict__, "warnings": list(s.warnings)} for s in self.sentences
            ],
            "processing_time": self.processing_time,
            "status": self.status,
            "warnings": list(self.warnings),
            "deadline": self.deadline,
            "deadline_exceeded": self.deadline_exceeded,
            "diagnostics": self.diagnostics,
        }

    @classmethod
    def from_dict(cls, d: dict) -> TranslationJob:
        d = dict(d)
        d["lang_pair"] = tuple(d["lang_pair"])
        d["sentences"] = tuple(
            SentenceRecord(**{**s, "warnings": tuple(s.get("warnings", ()))}) for s in d["sentences"]
        )
        d["warnings"] = tuple(d.get("warnings", ()))
        return cls(**d)
