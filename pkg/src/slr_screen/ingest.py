"""Read CSV exports into :class:`ArticleRecord` lists and combine sources."""

from __future__ import annotations

import csv
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from .records import YEAR_MAX, YEAR_MIN, ArticleRecord

logger = logging.getLogger(__name__)


class IngestError(Exception):
    """Base class for problems reading an export file."""


class FileUnreadable(IngestError):
    def __init__(self, path: str | Path, reason: str) -> None:
        super().__init__(f"cannot read {path}: {reason}")
        self.path = str(path)


class MissingColumn(IngestError):
    def __init__(self, name: str, path: str | Path = "") -> None:
        super().__init__(f"missing column {name!r}" + (f" in {path}" if path else ""))
        self.name = name


class MalformedCsv(IngestError):
    def __init__(self, row: int, reason: str, path: str | Path = "") -> None:
        where = f"{path}, " if path else ""
        super().__init__(f"malformed CSV ({where}line {row}): {reason}")
        self.row = row


@dataclass(frozen=True)
class ColumnMap:
    """Header names for the five mapped fields.

    ``doi_col`` and ``year_col`` are optional in the file itself.
    """

    authors_col: str = "Authors"
    title_col: str = "Article Title"
    abstract_col: str = "Abstract"
    doi_col: str = "DOI"
    year_col: str = "Publication Year"

    def __post_init__(self) -> None:
        names = self.columns()
        if any(not n or not n.strip() for n in names):
            raise ValueError("column names must be non-empty")
        if len(set(names)) != len(names):
            raise ValueError(f"column names must be pairwise distinct: {names}")

    def columns(self) -> tuple[str, str, str, str, str]:
        return (self.authors_col, self.title_col, self.abstract_col, self.doi_col, self.year_col)


@dataclass
class IngestReport:
    file: str
    rows_read: int = 0
    records_produced: int = 0
    warnings: list[str] = field(default_factory=list)


def parse_year(raw: str) -> int | None:
    """Parse a year cell; accepts ``"2023"`` and spreadsheet-style ``"2023.0"``.

    Raises:
        ValueError: if the cell is not an integer year in range.
    """
    text = raw.strip()
    try:
        year = int(text)
    except ValueError:
        try:
            as_float = float(text)
        except ValueError:
            raise ValueError(f"not a year: {raw!r}") from None
        if not as_float.is_integer():
            raise ValueError(f"not an integer year: {raw!r}") from None
        year = int(as_float)
    if not YEAR_MIN <= year <= YEAR_MAX:
        raise ValueError(f"year {year} outside [{YEAR_MIN}, {YEAR_MAX}]")
    return year


def read_records(
    path: str | Path,
    column_map: ColumnMap | None = None,
    source_label: str | None = None,
    source_col: str | None = None,
) -> tuple[list[ArticleRecord], IngestReport]:
    """Read one UTF-8 CSV export.

    Args:
        path: CSV file with a header row. A leading byte-order mark is ignored.
        column_map: header names of the mapped fields; defaults to the
            Web of Science style headers.
        source_label: label stored on every record; defaults to the file stem.
        source_col: optional column carrying a per-row source label (used when
            re-reading our own cleaned output). Blank cells fall back to
            ``source_label``.

    Returns:
        The records in row order and an :class:`IngestReport`.

    Raises:
        FileUnreadable: the file cannot be opened or is not valid UTF-8.
        MissingColumn: authors, title or abstract header is absent.
        MalformedCsv: broken quoting, duplicate headers, or a row whose
            field count differs from the header.
    """
    path = Path(path)
    cmap = column_map or ColumnMap()
    label = source_label or path.stem
    report = IngestReport(file=str(path))
    records: list[ArticleRecord] = []

    try:
        handle = open(path, encoding="utf-8-sig", newline="")
    except OSError as exc:
        raise FileUnreadable(path, exc.strerror or str(exc)) from exc

    with handle:
        reader = csv.reader(handle, strict=True)
        try:
            header = next(reader, None)
            if header is None:
                raise MalformedCsv(1, "no header row", path)
            _check_header(header, cmap, path)
            index = {name: i for i, name in enumerate(header)}
            mapped = set(cmap.columns())
            if source_col is not None:
                mapped.add(source_col)
            extra_cols = [name for name in header if name not in mapped]

            for row in reader:
                line = reader.line_num
                if not row:
                    continue
                report.rows_read += 1
                if len(row) != len(header):
                    raise MalformedCsv(
                        line, f"expected {len(header)} fields, got {len(row)}", path
                    )
                if not any(cell.strip() for cell in row):
                    report.warnings.append(f"line {line}: all fields blank, row skipped")
                    continue

                def cell(name: str) -> str:
                    i = index.get(name)
                    return row[i] if i is not None else ""

                year: int | None = None
                year_raw = cell(cmap.year_col)
                if year_raw.strip():
                    try:
                        year = parse_year(year_raw)
                    except ValueError as exc:
                        report.warnings.append(f"line {line}: {exc}; year left empty")

                doi = cell(cmap.doi_col).strip() or None
                row_label = (cell(source_col).strip() if source_col else "") or label
                records.append(
                    ArticleRecord(
                        authors=cell(cmap.authors_col),
                        title=cell(cmap.title_col),
                        abstract=cell(cmap.abstract_col),
                        doi=doi,
                        publication_year=year,
                        source=row_label,
                        extras={name: cell(name) for name in extra_cols},
                    )
                )
        except csv.Error as exc:
            raise MalformedCsv(reader.line_num, str(exc), path) from exc
        except UnicodeDecodeError as exc:
            raise FileUnreadable(path, f"not valid UTF-8 ({exc.reason})") from exc

    report.records_produced = len(records)
    for warning in report.warnings:
        logger.warning("%s: %s", path, warning)
    return records, report


def _check_header(header: Sequence[str], cmap: ColumnMap, path: Path) -> None:
    seen: set[str] = set()
    for name in header:
        if name in seen:
            raise MalformedCsv(1, f"duplicate header {name!r}", path)
        seen.add(name)
    for required in (cmap.authors_col, cmap.title_col, cmap.abstract_col):
        if required not in seen:
            raise MissingColumn(required, path)


def merge_sources(corpora: Iterable[Sequence[ArticleRecord]]) -> list[ArticleRecord]:
    """Concatenate record lists, outer order then inner order. No dedup."""
    merged: list[ArticleRecord] = []
    for corpus in corpora:
        merged.extend(corpus)
    return merged
