"""Parse the model's line-structured screening reply into a typed decision."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

KEYS = ("Acceptance", "Authors", "Article Title", "Publication Year", "Methodology", "Explanation")


class Acceptance(enum.Enum):
    ACCEPT = "Yes"
    REJECT = "No"


class MethodologyKind(enum.Enum):
    THEORETICAL = "Theoretical paper"
    EMPIRICAL_QUANTITATIVE = "Empirical (Quantitative)"
    EMPIRICAL_QUALITATIVE = "Empirical (Qualitative)"
    OTHER = "Other"


@dataclass(frozen=True)
class Methodology:
    """A taxonomy label, or ``OTHER`` carrying the model's text verbatim."""

    kind: MethodologyKind
    raw: str = ""

    @property
    def label(self) -> str:
        return self.raw if self.kind is MethodologyKind.OTHER else self.kind.value


@dataclass(frozen=True)
class ScreeningDecision:
    acceptance: Acceptance
    echoed_authors: str = ""
    echoed_title: str = ""
    echoed_year: int | None = None
    methodology: Methodology | None = None
    explanation: str = ""

    @property
    def accepted(self) -> bool:
        return self.acceptance is Acceptance.ACCEPT


class ParseErrorKind(enum.Enum):
    EMPTY_REPLY = "EmptyReply"
    MISSING_ACCEPTANCE = "MissingAcceptance"
    UNRECOGNIZED_ACCEPTANCE_VALUE = "UnrecognizedAcceptanceValue"


class ParseError(ValueError):
    def __init__(self, kind: ParseErrorKind, offending_text: str) -> None:
        super().__init__(f"{kind.value}: {offending_text[:200]!r}")
        self.kind = kind
        self.offending_text = offending_text


_NON_ALNUM = re.compile(r"[\W_]+")
_TAXONOMY = {
    _NON_ALNUM.sub("", kind.value.casefold()): kind
    for kind in MethodologyKind
    if kind is not MethodologyKind.OTHER
}


def map_methodology(raw: str) -> Methodology:
    """Match a methodology string against the three taxonomy labels.

    Comparison ignores case, punctuation and whitespace, so
    ``"empirical   (QUANTITATIVE)"`` is quantitative. Anything else becomes
    ``OTHER`` with the text kept as given.
    """
    kind = _TAXONOMY.get(_NON_ALNUM.sub("", raw.casefold()))
    if kind is None:
        return Methodology(MethodologyKind.OTHER, raw)
    return Methodology(kind)


def _match_key(line: str, key: str, strict: bool) -> str | None:
    if strict:
        prefix = key + ": "
        return line[len(prefix):] if line.startswith(prefix) else None
    text = line.lstrip()
    prefix = key.casefold() + ":"
    if text[: len(prefix)].casefold() == prefix:
        return text[len(prefix):]
    return None


def _parse_int(value: str) -> int | None:
    try:
        return int(value)
    except ValueError:
        return None


def parse_decision(raw: str, strict: bool = False) -> ScreeningDecision:
    """Parse a reply in the prescribed six-line format.

    Each key's value is the rest of the first line starting with ``"<Key>:"``.
    Keys are matched case-insensitively after leading whitespace; with
    ``strict=True`` only an exact ``"<Key>: "`` prefix at column 0 counts.
    Values are stripped. Only Acceptance is required.

    Raises:
        ParseError: empty reply, no Acceptance line, or an Acceptance value
            other than yes/no.
    """
    if not raw or not raw.strip():
        raise ParseError(ParseErrorKind.EMPTY_REPLY, raw or "")

    found: dict[str, str] = {}
    for line in raw.splitlines():
        for key in KEYS:
            if key in found:
                continue
            value = _match_key(line, key, strict)
            if value is not None:
                found[key] = value.strip()
                break

    if "Acceptance" not in found:
        raise ParseError(ParseErrorKind.MISSING_ACCEPTANCE, raw)
    token = found["Acceptance"].casefold()
    if token == "yes":
        acceptance = Acceptance.ACCEPT
    elif token == "no":
        acceptance = Acceptance.REJECT
    else:
        raise ParseError(ParseErrorKind.UNRECOGNIZED_ACCEPTANCE_VALUE, found["Acceptance"])

    methodology_text = found.get("Methodology", "")
    return ScreeningDecision(
        acceptance=acceptance,
        echoed_authors=found.get("Authors", ""),
        echoed_title=found.get("Article Title", ""),
        echoed_year=_parse_int(found.get("Publication Year", "")),
        methodology=map_methodology(methodology_text) if methodology_text else None,
        explanation=found.get("Explanation", ""),
    )


def render_decision(decision: ScreeningDecision) -> str:
    """Inverse of :func:`parse_decision`: six lines, canonical key casing."""
    year = "" if decision.echoed_year is None else str(decision.echoed_year)
    methodology = decision.methodology.label if decision.methodology else ""
    values = (
        decision.acceptance.value,
        decision.echoed_authors,
        decision.echoed_title,
        year,
        methodology,
        decision.explanation,
    )
    return "\n".join(f"{key}: {value}" for key, value in zip(KEYS, values))
