"""Stage one: drop incomplete records, then exact-match deduplication.

DOI-bearing records are deduplicated on their canonical DOI and DOI-less
records on the author/title key. The two partitions are never compared
with each other, and the first occurrence always wins.
"""

from __future__ import annotations

import csv
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass
from pathlib import Path

from .ingest import merge_sources
from .io import atomic_write
from .records import ArticleRecord, fingerprint, identity_key, is_complete


@dataclass(frozen=True)
class DedupReport:
    total_processed: int = 0
    removed_empty: int = 0
    removed_duplicates: int = 0
    kept: int = 0

    def __post_init__(self) -> None:
        if min(self.total_processed, self.removed_empty, self.removed_duplicates, self.kept) < 0:
            raise ValueError("counts must be non-negative")
        if self.total_processed != self.kept + self.removed_empty + self.removed_duplicates:
            raise ValueError(
                "total_processed must equal kept + removed_empty + removed_duplicates"
            )

    def to_dict(self) -> dict[str, int]:
        return asdict(self)


@dataclass(frozen=True)
class RemovedRecord:
    record: ArticleRecord
    keeper_fingerprint: str


def remove_incomplete(records: Sequence[ArticleRecord]) -> tuple[list[ArticleRecord], int]:
    kept = [r for r in records if is_complete(r)]
    return kept, len(records) - len(kept)


def deduplicate(
    records: Iterable[ArticleRecord], strip_doi_prefixes: bool = True
) -> tuple[list[ArticleRecord], list[RemovedRecord]]:
    """Keep the first record per identity key.

    The ``doi:``/``at:`` prefixes on the identity key keep the DOI and
    author/title partitions disjoint, so one dictionary serves both.
    """
    keepers: dict[str, str] = {}
    kept: list[ArticleRecord] = []
    removed: list[RemovedRecord] = []
    for record in records:
        key = identity_key(record, strip_doi_prefixes=strip_doi_prefixes)
        if key in keepers:
            removed.append(RemovedRecord(record, keepers[key]))
            continue
        keepers[key] = fingerprint(record, strip_doi_prefixes=strip_doi_prefixes)
        kept.append(record)
    return kept, removed


def run_stage_one(
    corpora: Iterable[Sequence[ArticleRecord]], strip_doi_prefixes: bool = True
) -> tuple[list[ArticleRecord], DedupReport, list[RemovedRecord]]:
    """Merge, drop incomplete records, deduplicate.

    Returns the kept records, the count report and the removed duplicates
    (for the optional audit file).
    """
    merged = merge_sources(corpora)
    complete, removed_empty = remove_incomplete(merged)
    kept, removed = deduplicate(complete, strip_doi_prefixes=strip_doi_prefixes)
    report = DedupReport(
        total_processed=len(merged),
        removed_empty=removed_empty,
        removed_duplicates=len(removed),
        kept=len(kept),
    )
    return kept, report, removed


RECORD_COLUMNS = ["Authors", "Article Title", "Abstract", "DOI", "Publication Year", "Record Source"]


def _extra_columns(records: Iterable[ArticleRecord]) -> list[str]:
    seen: dict[str, None] = {}
    for record in records:
        for name in record.extras:
            if name not in RECORD_COLUMNS:
                seen.setdefault(name, None)
    return list(seen)


def _record_row(record: ArticleRecord, extra_cols: list[str]) -> list[str]:
    year = "" if record.publication_year is None else str(record.publication_year)
    row = [record.authors, record.title, record.abstract, record.doi or "", year, record.source]
    return row + [record.extras.get(name, "") for name in extra_cols]


def write_records_csv(records: Sequence[ArticleRecord], path: str | Path) -> None:
    """Write records with canonical headers plus the union of extra columns.

    The output reads back with the default column map and ``source_col="Record Source"``.
    """
    extra_cols = _extra_columns(records)
    with atomic_write(path) as handle:
        writer = csv.writer(handle)
        writer.writerow(RECORD_COLUMNS + extra_cols)
        for record in records:
            writer.writerow(_record_row(record, extra_cols))


def write_removed_csv(removed: Sequence[RemovedRecord], path: str | Path) -> None:
    """Audit file: each dropped duplicate plus the fingerprint of its keeper."""
    extra_cols = _extra_columns(r.record for r in removed)
    with atomic_write(path) as handle:
        writer = csv.writer(handle)
        writer.writerow(["Kept Fingerprint"] + RECORD_COLUMNS + extra_cols)
        for item in removed:
            writer.writerow([item.keeper_fingerprint] + _record_row(item.record, extra_cols))
