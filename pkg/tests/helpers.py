"""Shared test data, fake transports and the scripted HTTP endpoint model."""

from __future__ import annotations

import threading
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path

from slr_screen.records import ArticleRecord
from slr_screen.screening import TransportError, TransportReply

FIXTURES = Path(__file__).parent / "fixtures"

REVIEW_TOPIC = "the impact of AI on entrepreneurial decision-making"
REVIEW_ITEMS = [
    (
        "Relevance to the Topic",
        "Assess if the article's content is directly related to the use of AI in "
        "entrepreneurial decision-making. Exclude articles that do not focus on this "
        "intersection.",
    ),
    (
        "Abstract Analysis",
        "Analyze the abstract of each article for key insights, methodologies, and "
        "findings that contribute to understanding the impact of AI on entrepreneurial "
        "decisions.",
    ),
]

# Known-good screening rows used as parser anchors:
# (acceptance, title, methodology, authors, year)
REFERENCE_ROWS = [
    ("No", "Smart, hybrid and context-aware POI mobile recommender system in tourism in Oman",
     "Theoretical paper", "Afsahhosseini F.; Al-Mulla Y.", 2023),
    ("Yes", "Natural Language Processing for Innovation Search – Reviewing an Emerging "
     "Non-human Innovation Intermediary", "Theoretical paper", "Just J.", 2024),
    ("No", "Global techno-politics: A review of the current status and opportunities for "
     "future research", "Theoretical paper", "Yan J.; Leidner D.E.; Peters U.", 2024),
    ("No", "Enhancing lifestyle and health monitoring of elderly populations using "
     "CSA-TKELM classifier", "Empirical (Quantitative)",
     "Rosaline R.A.A.; Ponnuraj N.P.; T.C. S.L.; Manisha G.", 2023),
    ("No", "How Do Fast-Fashion Copycats Affect the Popularity of Premium Brands? Evidence "
     "from Social Media", "Empirical (Quantitative)",
     "Shi Z.; Liu X.; Lee D.; Srinivasan K.", 2023),
]


def reference_reply(row, explanation: str = "See abstract.") -> str:
    acceptance, title, methodology, authors, year = row
    return (
        f"Acceptance: {acceptance}\nAuthors: {authors}\nArticle Title: {title}\n"
        f"Publication Year: {year}\nMethodology: {methodology}\nExplanation: {explanation}"
    )


def make_record(i: int = 0, **overrides) -> ArticleRecord:
    fields = dict(
        authors=f"Author{i} A.",
        title=f"Title number {i}",
        abstract=f"Abstract text {i}.",
        doi=f"10.1000/test.{i}",
        publication_year=2020,
        source="test",
    )
    fields.update(overrides)
    return ArticleRecord(**fields)


class ScriptedTransport:
    """Returns replies (or raises errors) from a list, then repeats a default."""

    def __init__(self, script=(), default: str | Callable | None = None):
        self.script = list(script)
        self.default = default
        self.calls: list[list[dict]] = []
        self._lock = threading.Lock()

    def complete(self, messages):
        with self._lock:
            self.calls.append(messages)
            n = len(self.calls)
            item = self.script.pop(0) if self.script else self.default
        if callable(item):
            item = item(messages)
        if isinstance(item, BaseException):
            raise item
        if item is None:
            raise TransportError("script exhausted", retryable=False)
        return TransportReply(text=item, request_id=f"req-{n}")


def echo_reply(messages) -> str:
    """A decided reply that echoes the article's metadata."""
    user = messages[-1]["content"]
    authors = user.split("\nAuthors: ", 1)[1].split("\n", 1)[0]
    title = user.split("\nArticle Title: ", 1)[1].split("\n", 1)[0]
    year = user.split("\nPublication Year: ", 1)[1].split("\n", 1)[0]
    verdict = "Yes" if "relevant" in user else "No"
    return (
        f"Acceptance: {verdict}\nAuthors: {authors}\nArticle Title: {title}\n"
        f"Publication Year: {year}\nMethodology: Theoretical paper\nExplanation: scripted"
    )


@dataclass
class MockEndpoint:
    """Chat-completions style HTTP endpoint driven by a response script.

    Each script entry is ``(status, body_dict_or_text)``; after the script is
    used up every request gets ``default``.
    """

    script: list = field(default_factory=list)
    default: tuple = (200, None)
    latency: float = 0.0
    requests: list = field(default_factory=list)
    url: str = ""

    def __post_init__(self):
        self._lock = threading.Lock()
        self.in_flight = 0
        self.peak_in_flight = 0

    def enter(self):
        with self._lock:
            self.in_flight += 1
            self.peak_in_flight = max(self.peak_in_flight, self.in_flight)

    def leave(self):
        with self._lock:
            self.in_flight -= 1

    def next_response(self, body: dict):
        with self._lock:
            self.requests.append(body)
            n = len(self.requests)
            status, payload = self.script.pop(0) if self.script else self.default
        if payload is None:
            payload = {
                "id": f"chatcmpl-{n}",
                "choices": [{"message": {"role": "assistant", "content": echo_reply(body["messages"])}}],
            }
        return status, payload


