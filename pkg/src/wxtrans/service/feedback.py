"""Public thumbs-up/down feedback and the human review queue it feeds."""

from __future__ import annotations

import uuid
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from enum import Enum

from wxtrans.errors import ConflictError, InvalidArgument, NotFoundError
from wxtrans.pipeline.product import parse_timestamp
from wxtrans.service.store import KVStore

NS_NONCE = "feedback_nonce"
NS_TALLY = "feedback_tally"
NS_REVIEW = "review"
NS_OPEN = "review_open"
NS_PRODUCT = "product"


class FeedbackRating(str, Enum):
    UP = "up"
    DOWN = "down"


class ReviewReason(str, Enum):
    NEGATIVE_FEEDBACK = "negative_feedback"
    TERMBASE_VIOLATION = "termbase_violation"
    BAD_RATING = "bad_rating"


class ReviewState(str, Enum):
    OPEN = "open"
    CORRECTED = "corrected"
    DISMISSED = "dismissed"


def _utcnow() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass(frozen=True)
class FeedbackEvent:
    file_name: str
    message_type: str
    language: str
    timestamp: str
    rating: FeedbackRating
    nonce: str

    def __post_init__(self) -> None:
        for name in ("file_name", "message_type", "language", "nonce"):
            v = getattr(self, name)
            if not isinstance(v, str) or not v.strip():
                raise InvalidArgument(f"feedback {name} must be a nonempty string")
        try:
            object.__setattr__(self, "rating", FeedbackRating(self.rating))
        except ValueError:
            raise InvalidArgument(f"rating must be 'up' or 'down', got {self.rating!r}") from None
        object.__setattr__(self, "timestamp", parse_timestamp(self.timestamp).astimezone(timezone.utc).isoformat())
        object.__setattr__(self, "language", self.language.lower())
        object.__setattr__(self, "message_type", self.message_type.upper())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["rating"] = self.rating.value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> FeedbackEvent:
        if not isinstance(d, dict):
            raise InvalidArgument("feedback body must be a JSON object")
        unknown = set(d) - set(cls.__dataclass_fields__)
        missing = set(cls.__dataclass_fields__) - set(d)
        if unknown or missing:
            raise InvalidArgument(f"feedback fields: unknown {sorted(unknown)}, missing {sorted(missing)}")
        return cls(**d)


@dataclass(frozen=True)
class ReviewItem:
    item_id: str
    product_ref: str
    reason: ReviewReason
    state: ReviewState
    created: str
    updated: str
    language: str = ""
    segment_index: int | None = None
    orphan: bool = False
    feedback_nonces: tuple[str, ...] = ()
    details: tuple[str, ...] = ()
    note: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        d["reason"] = self.reason.value
        d["state"] = self.state.value
        d["feedback_nonces"] = list(self.feedback_nonces)
        d["details"] = list(self.details)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ReviewItem:
        d = dict(d)
        d["reason"] = ReviewReason(d["reason"])
        d["state"] = ReviewState(d["state"])
        d["feedback_nonces"] = tuple(d.get("feedback_nonces", ()))
        d["details"] = tuple(d.get("details", ()))
        return cls(**d)


@dataclass(frozen=True)
class FeedbackResult:
    duplicate: bool
    orphan: bool
    tally: dict[str, int]
    review_item: ReviewItem | None = None
    warnings: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "duplicate": self.duplicate,
            "orphan": self.orphan,
            "tally": dict(self.tally),
            "review_item": None if self.review_item is None else self.review_item.to_dict(),
            "warnings": list(self.warnings),
        }


def _tally_key(file_name: str, language: str) -> str:
    return f"{file_name}|{language.lower()}"


def _open_key(product_ref: str, reason: ReviewReason) -> str:
    return f"{product_ref}|{reason.value}"


class FeedbackService:
    """Feedback tallies and review items on top of a :class:`KVStore`.

    Each ingest is one store transaction, so concurrent posts cannot lose a
    counter update or create a second open item for the same product.
    """

    def __init__(self, store: KVStore, clock=_utcnow):
        self.store = store
        self.clock = clock

    def register_product(self, file_name: str, meta: dict | None = None) -> None:
        self.store.put(NS_PRODUCT, file_name, meta or {})

    def known_product(self, file_name: str) -> bool:
        return self.store.get(NS_PRODUCT, file_name) is not None

    def tally(self, file_name: str, language: str) -> dict[str, int]:
        return self.store.get(NS_TALLY, _tally_key(file_name, language), {"up": 0, "down": 0})

    def tallies(self) -> dict[str, dict[str, int]]:
        return dict(self.store.items(NS_TALLY))

    def ingest(self, event: FeedbackEvent) -> FeedbackResult:
        with self.store.transaction() as st:
            key = _tally_key(event.file_name, event.language)
            seen = st.get(NS_NONCE, event.nonce)
            if seen is not None:
                warnings = ()
                if event.timestamp < seen["timestamp"]:
                    warnings = (f"nonce {event.nonce!r} replayed with an earlier timestamp",)
                return FeedbackResult(True, seen.get("orphan", False), self.tally(event.file_name, event.language),
                                      None, warnings)
            orphan = not self.known_product(event.file_name)
            counts = st.get(NS_TALLY, key, {"up": 0, "down": 0})
            counts[event.rating.value] += 1
            st.put(NS_TALLY, key, counts)
            item = None
            if event.rating is FeedbackRating.DOWN:
                item = self._open_or_link(
                    event.file_name, ReviewReason.NEGATIVE_FEEDBACK, language=event.language,
                    orphan=orphan, nonce=event.nonce,
                )
            st.put(NS_NONCE, event.nonce, {
                **event.to_dict(),
                "orphan": orphan,
                "review_item": None if item is None else item.item_id,
            })
            return FeedbackResult(False, orphan, counts, item)

    def open_review(self, product_ref: str, reason: ReviewReason | str, language: str = "",
                    segment_index: int | None = None, details=()) -> ReviewItem:
        """Open an item, or add details to the one already open for (product, reason)."""
        with self.store.transaction():
            return self._open_or_link(product_ref, ReviewReason(reason), language=language,
                                      segment_index=segment_index, details=tuple(details))

    def _open_or_link(self, product_ref, reason, language="", orphan=False, nonce=None,
                      segment_index=None, details=()) -> ReviewItem:
        now = self.clock()
        existing = self.store.get(NS_OPEN, _open_key(product_ref, reason))
        if existing is not None:
            item = ReviewItem.from_dict(self.store.get(NS_REVIEW, existing))
            nonces = item.feedback_nonces + ((nonce,) if nonce else ())
            item = ReviewItem(**{**item.__dict__, "feedback_nonces": nonces,
                                 "details": item.details + tuple(details), "updated": now})
        else:
            item = ReviewItem(
                item_id=uuid.uuid4().hex, product_ref=product_ref, reason=reason, state=ReviewState.OPEN,
                created=now, updated=now, language=language, segment_index=segment_index, orphan=orphan,
                feedback_nonces=(nonce,) if nonce else (), details=tuple(details),
            )
            self.store.put(NS_OPEN, _open_key(product_ref, reason), item.item_id)
        self.store.put(NS_REVIEW, item.item_id, item.to_dict())
        return item

    def get_item(self, item_id: str) -> ReviewItem:
        d = self.store.get(NS_REVIEW, item_id)
        if d is None:
            raise NotFoundError(f"unknown review item {item_id!r}")
        return ReviewItem.from_dict(d)

    def items(self, state: ReviewState | str | None = None) -> list[ReviewItem]:
        out = [ReviewItem.from_dict(d) for _, d in self.store.items(NS_REVIEW)]
        if state is not None:
            out = [i for i in out if i.state is ReviewState(state)]
        return sorted(out, key=lambda i: (i.created, i.item_id))

    def next_review(self) -> ReviewItem | None:
        """Oldest open item."""
        items = self.items(ReviewState.OPEN)
        return items[0] if items else None

    def resolve(self, item_id: str, state: ReviewState | str, note: str = "") -> ReviewItem:
        try:
            state = ReviewState(state)
        except ValueError:
            raise InvalidArgument(f"unknown review state {state!r}") from None
        if state is ReviewState.OPEN:
            raise InvalidArgument("items can only move to corrected or dismissed")
        with self.store.transaction():
            item = self.get_item(item_id)
            if item.state is not ReviewState.OPEN:
                raise ConflictError(f"review item {item_id} is already {item.state.value}")
            item = ReviewItem(**{**item.__dict__, "state": state, "note": note, "updated": self.clock()})
            self.store.put(NS_REVIEW, item_id, item.to_dict())
            self.store.delete(NS_OPEN, _open_key(item.product_ref, item.reason))
        return item
