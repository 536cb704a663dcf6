"""Independent reference implementations used only by the tests."""

from __future__ import annotations

import random
import re
import string

from slr_screen.records import ArticleRecord

_RESOLVER = re.compile(r"^(?:doi:|https?://(?:dx\.)?doi\.org/)")


def oracle_doi(raw):
    if raw is None:
        return None
    value = raw.strip().lower()
    while True:
        stripped = _RESOLVER.sub("", value, count=1).strip()
        if stripped == value:
            break
        value = stripped
    return value or None


def _norm(text: str) -> str:
    return " ".join(text.split()).casefold()


def same_article(a: ArticleRecord, b: ArticleRecord) -> bool:
    """Pairwise duplicate rule: equal DOIs, or both DOI-less with equal authors and title."""
    da, db = oracle_doi(a.doi), oracle_doi(b.doi)
    if da is not None and db is not None:
        return da == db
    if da is None and db is None:
        return _norm(a.authors) == _norm(b.authors) and _norm(a.title) == _norm(b.title)
    return False


def brute_force_kept(records) -> list[int]:
    """Indices of records with no earlier duplicate, by checking every pair. O(n^2)."""
    return [
        i for i, rec in enumerate(records)
        if not any(same_article(records[j], rec) for j in range(i))
    ]


_PREFIXES = ["", "", "doi:", "DOI:", "https://doi.org/", "http://dx.doi.org/", "https://DX.DOI.org/"]


def _jitter_case(rng: random.Random, text: str) -> str:
    return "".join(c.upper() if rng.random() < 0.3 else c for c in text)


def _jitter_space(rng: random.Random, text: str) -> str:
    words = text.split(" ")
    out = words[0]
    for w in words[1:]:
        out += rng.choice([" ", "  ", "\t", " \n "]) + w
    return rng.choice(["", " "]) + out + rng.choice(["", "  "])


def random_corpus(rng: random.Random, max_size: int = 50) -> list[ArticleRecord]:
    """Complete records drawn from a small identity pool so duplicates are common."""
    pool_size = rng.randint(1, 20)
    letters = string.ascii_lowercase + "|\\"
    pool = []
    for k in range(pool_size):
        authors = " ".join(rng.choice(["Smith J.", "Lee D.", "Just J.", "a|b", "Ng"]) for _ in range(rng.randint(1, 2)))
        title = " ".join("".join(rng.choices(letters, k=rng.randint(1, 4))) for _ in range(rng.randint(1, 3)))
        doi = f"10.{rng.randint(1000, 1003)}/x{rng.randint(0, 6)}" if rng.random() < 0.6 else None
        pool.append((authors, title, doi))
    records = []
    for i in range(rng.randint(0, max_size)):
        authors, title, doi = rng.choice(pool)
        r = rng.random()
        if r < 0.15:
            doi = None
        elif r < 0.25 and doi is None:
            doi = f"10.1000/extra{rng.randint(0, 3)}"
        if doi is not None:
            doi = rng.choice([" ", ""]) + rng.choice(_PREFIXES) + _jitter_case(rng, doi)
        elif rng.random() < 0.3:
            doi = rng.choice(["", "   "])
        records.append(
            ArticleRecord(
                authors=_jitter_space(rng, _jitter_case(rng, authors)),
                title=_jitter_space(rng, _jitter_case(rng, title)),
                abstract=f"abstract {i}",
                doi=doi,
                source=rng.choice(["scopus", "wos"]),
            )
        )
    return records
