"""Deduplicate bibliographic exports and screen articles with an LLM endpoint."""

from .dedup import DedupReport, deduplicate, remove_incomplete, run_stage_one
from .ingest import ColumnMap, IngestReport, merge_sources, read_records
from .parser import (
    Acceptance,
    Methodology,
    MethodologyKind,
    ParseError,
    ScreeningDecision,
    map_methodology,
    parse_decision,
    render_decision,
)
from .records import ArticleRecord, author_title_key, fingerprint, is_complete, normalize_doi
from .report import SummaryReport, compute_summary, render_summary, write_results_table
from .state import RunJournal, journal_append, journal_load

__version__ = "0.1.0"

__all__ = [
    "Acceptance",
    "ArticleRecord",
    "ColumnMap",
    "DedupReport",
    "IngestReport",
    "Methodology",
    "MethodologyKind",
    "ParseError",
    "RunJournal",
    "ScreeningDecision",
    "SummaryReport",
    "author_title_key",
    "compute_summary",
    "deduplicate",
    "fingerprint",
    "is_complete",
    "journal_append",
    "journal_load",
    "map_methodology",
    "merge_sources",
    "normalize_doi",
    "parse_decision",
    "read_records",
    "remove_incomplete",
    "render_decision",
    "render_summary",
    "run_stage_one",
    "write_results_table",
]
