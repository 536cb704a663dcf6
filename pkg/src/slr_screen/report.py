"""Final outputs: the per-article results table and the count summary."""

from __future__ import annotations

import csv
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

from .dedup import DedupReport
from .io import atomic_write
from .parser import Acceptance
from .records import ArticleRecord, fingerprint
from .screening.outcome import AssessmentOutcome, Status

RESULT_COLUMNS = [
    "Acceptance",
    "Article Title",
    "Methodology",
    "Explanation",
    "Authors",
    "Publication Year",
    "Status",
    "Fingerprint",
    "Request ID",
    "Completed At",
    "Echo Mismatch",
]


@dataclass(frozen=True)
class SummaryReport:
    total_processed: int = 0
    removed_empty: int = 0
    removed_duplicates: int = 0
    screened: int = 0
    accepted: int = 0
    rejected: int = 0
    parse_failed: int = 0
    transport_failed: int = 0

    def __post_init__(self) -> None:
        if self.screened != (
            self.accepted + self.rejected + self.parse_failed + self.transport_failed
        ):
            raise ValueError("screened must equal the sum of outcome classes")
        if self.total_processed != self.screened + self.removed_empty + self.removed_duplicates:
            raise ValueError("total_processed must equal screened + removed counts")


def _normalized_title(text: str) -> str:
    return " ".join(text.split()).casefold()


def result_row(outcome: AssessmentOutcome, record: ArticleRecord) -> list[str]:
    """One results-table row. NUL characters are dropped; CSV cannot carry them."""
    year = "" if record.publication_year is None else str(record.publication_year)
    decision = outcome.decision
    if decision is None:
        acceptance = methodology = explanation = mismatch = ""
    else:
        acceptance = decision.acceptance.value
        methodology = decision.methodology.label if decision.methodology else ""
        explanation = decision.explanation
        same = _normalized_title(decision.echoed_title) == _normalized_title(record.title)
        mismatch = "no" if same else "yes"
    cells = [
        acceptance,
        record.title,
        methodology,
        explanation,
        record.authors,
        year,
        outcome.status.value,
        outcome.fingerprint,
        outcome.request_id,
        outcome.completed_at,
        mismatch,
    ]
    return [cell.replace("\x00", "") for cell in cells]


def write_results_table(
    outcomes: Sequence[AssessmentOutcome],
    records: Sequence[ArticleRecord] | Mapping[str, ArticleRecord],
    path: str | Path,
) -> None:
    """Write the results CSV atomically, one row per outcome in the given order.

    Title, authors and year come from the source record; the model's echoed
    values only feed the ``Echo Mismatch`` flag. ``records`` is either a
    fingerprint-keyed mapping or a sequence fingerprinted with the default
    settings.

    Raises:
        OSError: the destination cannot be written.
        KeyError: an outcome has no matching record.
    """
    by_fp = records if isinstance(records, Mapping) else {fingerprint(r): r for r in records}
    rows = [result_row(o, by_fp[o.fingerprint]) for o in outcomes]
    with atomic_write(path) as handle:
        writer = csv.writer(handle)
        writer.writerow(RESULT_COLUMNS)
        writer.writerows(rows)


def compute_summary(
    dedup_report: DedupReport, outcomes: Sequence[AssessmentOutcome]
) -> SummaryReport:
    """Classify outcomes and combine with the stage-one counts.

    ``total_processed`` is recomputed as screened plus both removal counts,
    so the report is consistent even when screening covered a subset.
    """
    accepted = rejected = parse_failed = transport_failed = 0
    for outcome in outcomes:
        if outcome.status is Status.DECIDED:
            if outcome.decision.acceptance is Acceptance.ACCEPT:
                accepted += 1
            else:
                rejected += 1
        elif outcome.status is Status.PARSE_FAILED:
            parse_failed += 1
        else:
            transport_failed += 1
    screened = len(outcomes)
    return SummaryReport(
        total_processed=screened + dedup_report.removed_empty + dedup_report.removed_duplicates,
        removed_empty=dedup_report.removed_empty,
        removed_duplicates=dedup_report.removed_duplicates,
        screened=screened,
        accepted=accepted,
        rejected=rejected,
        parse_failed=parse_failed,
        transport_failed=transport_failed,
    )


def render_stage_one(report: DedupReport | SummaryReport) -> str:
    return (
        f"Total articles processed: {report.total_processed}\n"
        f"Total duplicates removed: {report.removed_duplicates}\n"
        f"Total articles removed due to empty fields: {report.removed_empty}\n"
    )


def render_summary(report: SummaryReport) -> str:
    return render_stage_one(report) + (
        f"Screened: {report.screened}\n"
        f"Accepted: {report.accepted}\n"
        f"Rejected: {report.rejected}\n"
        f"Parse failures: {report.parse_failed}\n"
        f"Transport failures: {report.transport_failed}\n"
    )
