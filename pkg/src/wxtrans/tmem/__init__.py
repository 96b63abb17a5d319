"""Translation memory, termbase and term harvesting."""

from wxtrans.tmem.harvest import HarvestCandidate, harvest_terms
from wxtrans.tmem.memory import (
    DEFAULT_FUZZY_THRESHOLD,
    AlreadyReviewedWarning,
    LookupResult,
    Origin,
    Segment,
    Status,
    TranslationMemory,
    format_lang_pair,
    mark_reviewed,
    normalize_source,
    parse_lang_pair,
    tm_insert,
    tm_lookup,
)
from wxtrans.tmem.termbase import TermEntry, TermViolation, dump_termbase, load_termbase, termbase_check

__all__ = [
    "DEFAULT_FUZZY_THRESHOLD",
    "AlreadyReviewedWarning",
    "HarvestCandidate",
    "LookupResult",
    "Origin",
    "Segment",
    "Status",
    "TermEntry",
    "TermViolation",
    "TranslationMemory",
    "dump_termbase",
    "format_lang_pair",
    "harvest_terms",
    "load_termbase",
    "mark_reviewed",
    "normalize_source",
    "parse_lang_pair",
    "termbase_check",
    "tm_insert",
    "tm_lookup",
]
