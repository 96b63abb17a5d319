"""Persistence, feedback/review queue, ASCII transform and the HTTP API."""

from wxtrans.service.asciisafe import MAPPING_VERSION, AsciiPolicy, AsciiResult, ascii_safe
from wxtrans.service.core import ServiceCore, ServiceSettings, engine_from_spec
from wxtrans.service.feedback import (
    FeedbackEvent,
    FeedbackRating,
    FeedbackResult,
    FeedbackService,
    ReviewItem,
    ReviewReason,
    ReviewState,
)
from wxtrans.service.store import KVStore, MemoryStore, SqliteStore, open_store

__all__ = [
    "MAPPING_VERSION",
    "AsciiPolicy",
    "AsciiResult",
    "FeedbackEvent",
    "FeedbackRating",
    "FeedbackResult",
    "FeedbackService",
    "KVStore",
    "MemoryStore",
    "ReviewItem",
    "ReviewReason",
    "ReviewState",
    "ServiceCore",
    "ServiceSettings",
    "SqliteStore",
    "ascii_safe",
    "engine_from_spec",
    "open_store",
]
