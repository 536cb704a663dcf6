"""Result of screening one record, plus its JSON form used by the journal."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any

from ..parser import (
    Acceptance,
    Methodology,
    MethodologyKind,
    ScreeningDecision,
)


class Status(enum.Enum):
    DECIDED = "Decided"
    PARSE_FAILED = "ParseFailed"
    TRANSPORT_FAILED = "TransportFailed"


@dataclass(frozen=True)
class AssessmentOutcome:
    fingerprint: str
    status: Status
    raw_response: str = ""
    decision: ScreeningDecision | None = None
    request_id: str = ""
    completed_at: str = ""
    error: str = ""

    def __post_init__(self) -> None:
        if (self.status is Status.DECIDED) != (self.decision is not None):
            raise ValueError("status Decided if and only if a decision is present")

    def to_json(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "v": 1,
            "fingerprint": self.fingerprint,
            "status": self.status.value,
            "raw_response": self.raw_response,
            "request_id": self.request_id,
            "completed_at": self.completed_at,
        }
        if self.decision is not None:
            data["decision"] = decision_to_json(self.decision)
        if self.error:
            data["error"] = self.error
        return data

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> AssessmentOutcome:
        decision = data.get("decision")
        return cls(
            fingerprint=data["fingerprint"],
            status=Status(data["status"]),
            raw_response=data.get("raw_response", ""),
            decision=decision_from_json(decision) if decision is not None else None,
            request_id=data.get("request_id", ""),
            completed_at=data.get("completed_at", ""),
            error=data.get("error", ""),
        )


def decision_to_json(decision: ScreeningDecision) -> dict[str, Any]:
    methodology = None
    if decision.methodology is not None:
        methodology = {"kind": decision.methodology.kind.name, "raw": decision.methodology.raw}
    return {
        "acceptance": decision.acceptance.value,
        "authors": decision.echoed_authors,
        "title": decision.echoed_title,
        "year": decision.echoed_year,
        "methodology": methodology,
        "explanation": decision.explanation,
    }


def decision_from_json(data: dict[str, Any]) -> ScreeningDecision:
    methodology = data.get("methodology")
    return ScreeningDecision(
        acceptance=Acceptance(data["acceptance"]),
        echoed_authors=data.get("authors", ""),
        echoed_title=data.get("title", ""),
        echoed_year=data.get("year"),
        methodology=(
            Methodology(MethodologyKind[methodology["kind"]], methodology.get("raw", ""))
            if methodology
            else None
        ),
        explanation=data.get("explanation", ""),
    )
