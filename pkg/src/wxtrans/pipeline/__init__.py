"""Product pipeline: segment, protect, translate, back-translate, score, report."""

from wxtrans.pipeline.diet import DietSelection, Hazard, JobCatalogEntry, Region, Season, balanced_diet_select, load_catalog
from wxtrans.pipeline.engines import DictionaryEngine, Engine, EngineRegistry, ExternalEngine, IdentityEngine
from wxtrans.pipeline.product import (
    PRODUCT_TYPES,
    Product,
    SentenceRecord,
    TranslationJob,
    load_product,
    register_product_type,
    sniff_header,
)
from wxtrans.pipeline.protect import Protected, protect_tokens, restore_tokens
from wxtrans.pipeline.report import ReportCard, report_card, report_csv, report_html
from wxtrans.pipeline.scoring import JobReport, SegmentScore, score_against_reference, score_job
from wxtrans.pipeline.segment import SegmentedText, segment_text
from wxtrans.pipeline.synth import SyntheticTemplate, generate_synthetic, load_templates
from wxtrans.pipeline.translate import (
    ENGINE,
    MEMORY_EXACT,
    BackPair,
    JobFailed,
    PipelineConfig,
    attach_disclaimer,
    back_translate,
    shipped_disclaimers,
    strip_disclaimer,
    translate_product,
)

__all__ = [
    "ENGINE",
    "MEMORY_EXACT",
    "PRODUCT_TYPES",
    "BackPair",
    "DictionaryEngine",
    "DietSelection",
    "Engine",
    "EngineRegistry",
    "ExternalEngine",
    "Hazard",
    "IdentityEngine",
    "JobCatalogEntry",
    "JobFailed",
    "JobReport",
    "PipelineConfig",
    "Product",
    "Protected",
    "Region",
    "ReportCard",
    "Season",
    "SegmentScore",
    "SegmentedText",
    "SentenceRecord",
    "SyntheticTemplate",
    "TranslationJob",
    "attach_disclaimer",
    "back_translate",
    "balanced_diet_select",
    "generate_synthetic",
    "load_catalog",
    "load_product",
    "load_templates",
    "protect_tokens",
    "register_product_type",
    "report_card",
    "report_csv",
    "report_html",
    "restore_tokens",
    "score_against_reference",
    "score_job",
    "segment_text",
    "shipped_disclaimers",
    "sniff_header",
    "strip_disclaimer",
    "translate_product",
]
