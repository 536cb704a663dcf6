"""Prompt construction, endpoint transport and the screening loop."""

from .config import DEFAULT_ENDPOINT, RunConfig
from .fake import FakeAssessor, FakeRule, RulesError
from .outcome import AssessmentOutcome, Status
from .prompts import (
    CORRECTIVE_SENTENCE,
    IncompleteRecord,
    ScreeningCriteria,
    build_instruction,
    build_user_message,
)
from .ratelimit import TokenBucket
from .runner import assess_one, backoff_delay, iter_screen_corpus, screen_corpus
from .transport import API_KEY_ENV, HttpTransport, Transport, TransportError, TransportReply

__all__ = [
    "API_KEY_ENV",
    "CORRECTIVE_SENTENCE",
    "DEFAULT_ENDPOINT",
    "AssessmentOutcome",
    "FakeAssessor",
    "FakeRule",
    "HttpTransport",
    "IncompleteRecord",
    "RulesError",
    "RunConfig",
    "ScreeningCriteria",
    "Status",
    "TokenBucket",
    "Transport",
    "TransportError",
    "TransportReply",
    "assess_one",
    "backoff_delay",
    "build_instruction",
    "build_user_message",
    "iter_screen_corpus",
    "screen_corpus",
]
