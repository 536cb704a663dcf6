"""Bibliographic record model and the normalization rules later stages key on."""

from __future__ import annotations

import hashlib
import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from types import MappingProxyType

YEAR_MIN = 1500
YEAR_MAX = 2100

_DOI_PREFIXES = (
    "https://doi.org/",
    "http://doi.org/",
    "https://dx.doi.org/",
    "http://dx.doi.org/",
    "doi:",
)
_WS_RUN = re.compile(r"\s+")


@dataclass(frozen=True)
class ArticleRecord:
    """One bibliographic entry as exported by a literature database.

    ``extras`` holds every unmapped column in file order and is frozen on
    construction.
    """

    authors: str
    title: str
    abstract: str
    doi: str | None = None
    publication_year: int | None = None
    source: str = "unknown"
    extras: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.source or not self.source.strip():
            raise ValueError("source label must be non-empty")
        if self.publication_year is not None and not (
            YEAR_MIN <= self.publication_year <= YEAR_MAX
        ):
            raise ValueError(
                f"publication_year {self.publication_year} outside [{YEAR_MIN}, {YEAR_MAX}]"
            )
        object.__setattr__(self, "extras", MappingProxyType(dict(self.extras)))

    def __hash__(self) -> int:
        return hash((self.authors, self.title, self.abstract, self.doi,
                     self.publication_year, self.source, tuple(self.extras.items())))


def normalize_doi(raw: str | None, strip_prefixes: bool = True) -> str | None:
    """Canonicalize a DOI string.

    Trims, lowercases and (unless ``strip_prefixes`` is false) removes a
    leading ``doi:`` or ``doi.org`` resolver URL. Blank input gives ``None``.
    """
    if raw is None:
        return None
    doi = raw.strip().lower()
    if strip_prefixes:
        # Prefixes may be stacked, e.g. "doi:https://doi.org/10..."
        changed = True
        while changed:
            changed = False
            for prefix in _DOI_PREFIXES:
                if doi.startswith(prefix):
                    doi = doi[len(prefix):].strip()
                    changed = True
    return doi or None


def _key_part(text: str) -> str:
    text = _WS_RUN.sub(" ", text.strip()).casefold()
    # Escaping keeps the joined key injective when a part contains "|".
    return text.replace("\\", "\\\\").replace("|", "\\|")


def author_title_key(record: ArticleRecord) -> str:
    """Return ``casefold(authors) + "|" + casefold(title)``.

    Each part is trimmed and internal whitespace runs collapse to one space.
    Backslashes and ``|`` inside a part are backslash-escaped.
    """
    return f"{_key_part(record.authors or '')}|{_key_part(record.title or '')}"


def is_complete(record: ArticleRecord) -> bool:
    """True when authors, title and abstract are all non-blank."""
    return all(
        value is not None and value.strip()
        for value in (record.authors, record.title, record.abstract)
    )


def identity_key(record: ArticleRecord, strip_doi_prefixes: bool = True) -> str:
    """Dedup identity: ``doi:<canonical doi>`` or ``at:<author/title key>``."""
    doi = normalize_doi(record.doi, strip_prefixes=strip_doi_prefixes)
    if doi is not None:
        return "doi:" + doi
    return "at:" + author_title_key(record)


def fingerprint(record: ArticleRecord, strip_doi_prefixes: bool = True) -> str:
    """SHA-256 hex digest of the record's dedup identity."""
    key = identity_key(record, strip_doi_prefixes=strip_doi_prefixes)
    return hashlib.sha256(key.encode("utf-8")).hexdigest()
