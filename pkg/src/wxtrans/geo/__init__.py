"""LEP statistics: census tables, priority languages, CWA allocation, WFO ranking, dashboard export."""

from wxtrans.geo.allocate import CwaOverlap, CwaStats, allocate_to_cwa, largest_remainder, load_overlaps, validate_overlaps
from wxtrans.geo.census import (
    LANGUAGE_HEADER,
    GeoLevel,
    LanguageTable,
    LepRecord,
    ParseError,
    PriorityLanguage,
    RejectedRow,
    UndefinedRatioWarning,
    aggregate_national,
    load_language_table,
    parse_language_table,
    select_priority_languages,
)
from wxtrans.geo.export import dashboard_csv, dashboard_properties, export_dashboard, top_languages
from wxtrans.geo.rank import DEFAULT_WEIGHTS, FACTORS, MissingFactorWarning, RankedWfo, rank_wfos

__all__ = [
    "DEFAULT_WEIGHTS",
    "FACTORS",
    "LANGUAGE_HEADER",
    "CwaOverlap",
    "CwaStats",
    "GeoLevel",
    "LanguageTable",
    "LepRecord",
    "MissingFactorWarning",
    "ParseError",
    "PriorityLanguage",
    "RankedWfo",
    "RejectedRow",
    "UndefinedRatioWarning",
    "aggregate_national",
    "allocate_to_cwa",
    "dashboard_csv",
    "dashboard_properties",
    "export_dashboard",
    "largest_remainder",
    "load_language_table",
    "load_overlaps",
    "parse_language_table",
    "rank_wfos",
    "select_priority_languages",
    "top_languages",
    "validate_overlaps",
]
