"""Instruction and per-article message construction."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from ..records import ArticleRecord, is_complete

CORRECTIVE_SENTENCE = "Reply using exactly the prescribed line format."

_PREAMBLE = (
    "Your primary function is to analyze academic articles related to {topic}. "
    "You must evaluate each article's relevance and suitability for inclusion in a "
    "systematic literature review (SLR). Consider the following aspects in your evaluation:"
)
_CONCLUSION = (
    "Your analysis should conclude with a clear recommendation on whether the article "
    "should be included in the SLR for further analysis. Provide a very brief "
    "justification for your decision based on the criteria above."
)
# Fixed output contract; the parser depends on it, so it is not configurable.
OUTPUT_FORMAT = (
    "your style of output should be like the following:\n"
    "Acceptance:(if the article is acceptable or not) Yes/No\n"
    "Authors:\n"
    "Article Title:\n"
    "Publication Year:\n"
    "Methodology:(tell about it's methodology if it's "
    "(theoretical paper- empirical (quantitative)-empirical (qualitative)))\n"
    "Explanation:\n"
    "don't add any \\n or anything else except raw text"
)


class IncompleteRecord(ValueError):
    pass


@dataclass(frozen=True)
class ScreeningCriteria:
    topic: str
    criteria_items: Sequence[tuple[str, str]]
    extra_guidance: str | None = None

    def __post_init__(self) -> None:
        if not self.topic or not self.topic.strip():
            raise ValueError("criteria topic must be non-empty")
        items = tuple((str(h), str(b)) for h, b in self.criteria_items)
        if not items:
            raise ValueError("at least one criteria item is required")
        object.__setattr__(self, "criteria_items", items)


def build_instruction(criteria: ScreeningCriteria) -> str:
    """Render the system instruction for a review.

    Optional ``extra_guidance`` goes in its own paragraph before the output
    format block.
    """
    numbered = "\n".join(
        f"{i}. {heading}: {body}" for i, (heading, body) in enumerate(criteria.criteria_items, 1)
    )
    paragraphs = [_PREAMBLE.format(topic=criteria.topic), numbered, _CONCLUSION]
    if criteria.extra_guidance and criteria.extra_guidance.strip():
        paragraphs.append(criteria.extra_guidance.strip())
    paragraphs.append(OUTPUT_FORMAT)
    return "\n\n".join(paragraphs)


def build_user_message(record: ArticleRecord) -> str:
    if not is_complete(record):
        raise IncompleteRecord("record lacks authors, title or abstract")
    year = "unknown" if record.publication_year is None else str(record.publication_year)
    return (
        f"Abstract: {record.abstract}\n"
        f"Authors: {record.authors}\n"
        f"Article Title: {record.title}\n"
        f"Publication Year: {year}"
    )
