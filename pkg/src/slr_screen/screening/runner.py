"""Per-record assessment with retries, and the resumable corpus loop."""

from __future__ import annotations

import logging
import random
import threading
import time
from collections.abc import Callable, Iterator, Sequence
from concurrent.futures import Future, ThreadPoolExecutor
from datetime import datetime, timezone
from typing import TYPE_CHECKING

from ..parser import ParseError, parse_decision
from ..records import ArticleRecord, fingerprint
from .config import RunConfig
from .outcome import AssessmentOutcome, Status
from .prompts import CORRECTIVE_SENTENCE, ScreeningCriteria, build_instruction, build_user_message
from .ratelimit import TokenBucket
from .transport import Message, Transport, TransportError, TransportReply

if TYPE_CHECKING:
    from ..state import RunJournal

logger = logging.getLogger(__name__)

Clock = Callable[[], datetime]


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


def timestamp(clock: Clock) -> str:
    return clock().isoformat(timespec="seconds")


def backoff_delay(
    attempt: int, config: RunConfig, rng: random.Random, previous: float = 0.0,
    retry_after: float | None = None,
) -> float:
    """Delay before retry number ``attempt + 1`` (``attempt`` counts from 0).

    Equal jitter: half of ``base * 2**attempt`` fixed plus up to half random,
    capped at ``max_backoff``. Successive windows do not overlap, and the
    result is floored at ``previous`` and at any server ``Retry-After``, so
    delays never decrease within one request.
    """
    ceiling = min(config.max_backoff, config.base_backoff * (2 ** attempt))
    half = ceiling / 2
    delay = half + rng.uniform(0, half)
    if retry_after is not None:
        delay = max(delay, retry_after)
    return max(delay, previous)


class _Sender:
    """Sends one message list with rate limiting and transport retries."""

    def __init__(self, transport, config, limiter, sleep, rng):
        self.transport = transport
        self.config = config
        self.limiter = limiter
        self.sleep = sleep
        self.rng = rng

    def send(self, messages: list[Message]) -> TransportReply:
        previous = 0.0
        for attempt in range(self.config.max_retries + 1):
            if self.limiter is not None:
                self.limiter.acquire()
            try:
                return self.transport.complete(messages)
            except TransportError as exc:
                if not exc.retryable or attempt == self.config.max_retries:
                    raise
                previous = backoff_delay(
                    attempt, self.config, self.rng, previous, exc.retry_after
                )
                logger.info("transport error (%s); retrying in %.2fs", exc, previous)
                self.sleep(previous)
        raise AssertionError("unreachable")


def assess_one(
    record: ArticleRecord,
    instruction: str,
    config: RunConfig,
    transport: Transport,
    *,
    rate_limiter: TokenBucket | None = None,
    sleep: Callable[[float], None] = time.sleep,
    rng: random.Random | None = None,
    clock: Clock = utc_now,
    key: Callable[[ArticleRecord], str] = fingerprint,
) -> AssessmentOutcome:
    """Screen one record. Failures are reported in the outcome status, never raised.

    A reply that does not parse is re-requested up to ``config.parse_retry``
    times with a corrective sentence appended to the user message.
    """
    sender = _Sender(transport, config, rate_limiter, sleep, rng or random.Random())
    user = build_user_message(record)
    messages = [
        {"role": "system", "content": instruction},
        {"role": "user", "content": user},
    ]
    fp = key(record)
    raw = ""
    request_id = ""
    error = ""
    for parse_attempt in range(config.parse_retry + 1):
        try:
            reply = sender.send(messages)
        except TransportError as exc:
            return AssessmentOutcome(
                fingerprint=fp,
                status=Status.TRANSPORT_FAILED,
                raw_response=raw,
                request_id=request_id,
                completed_at=timestamp(clock),
                error=str(exc),
            )
        raw, request_id = reply.text, reply.request_id
        try:
            decision = parse_decision(raw, strict=config.strict_parse)
        except ParseError as exc:
            error = str(exc)
            if parse_attempt < config.parse_retry:
                messages = [
                    messages[0],
                    {"role": "user", "content": f"{user}\n\n{CORRECTIVE_SENTENCE}"},
                ]
            continue
        return AssessmentOutcome(
            fingerprint=fp,
            status=Status.DECIDED,
            raw_response=raw,
            decision=decision,
            request_id=request_id,
            completed_at=timestamp(clock),
        )
    return AssessmentOutcome(
        fingerprint=fp,
        status=Status.PARSE_FAILED,
        raw_response=raw,
        request_id=request_id,
        completed_at=timestamp(clock),
        error=error,
    )


def iter_screen_corpus(
    records: Sequence[ArticleRecord],
    criteria: ScreeningCriteria | str,
    config: RunConfig,
    journal: RunJournal,
    transport: Transport,
    *,
    rate_limiter: TokenBucket | None = None,
    sleep: Callable[[float], None] = time.sleep,
    rng: random.Random | None = None,
    clock: Clock = utc_now,
    key: Callable[[ArticleRecord], str] = fingerprint,
) -> Iterator[AssessmentOutcome]:
    """Yield one outcome per record, in input order.

    ``criteria`` may also be a prebuilt instruction string.

    Records already in ``journal`` are replayed without a transport call.
    Fresh outcomes are appended to the journal as soon as they complete,
    which is always before they are yielded. At most ``config.concurrency``
    requests are in flight, and ``rate_limiter`` (built from
    ``config.rate_limit`` when omitted) is shared by all workers.

    Raises:
        JournalWriteFailed: from the journal; pending work is cancelled.
    """
    instruction = criteria if isinstance(criteria, str) else build_instruction(criteria)
    if rate_limiter is None:
        rate_limiter = TokenBucket(config.rate_limit)
    base_rng = rng or random.Random()
    rng_lock = threading.Lock()

    def work(record: ArticleRecord, seed: int) -> AssessmentOutcome:
        outcome = assess_one(
            record, instruction, config, transport,
            rate_limiter=rate_limiter, sleep=sleep, rng=random.Random(seed),
            clock=clock, key=key,
        )
        journal.append(outcome)
        return outcome

    def seed() -> int:
        with rng_lock:
            return base_rng.getrandbits(64)

    if config.concurrency == 1:
        for record in records:
            fp = key(record)
            replay = journal.get(fp)
            if replay is not None:
                yield replay
                continue
            yield work(record, seed())
        return

    executor = ThreadPoolExecutor(max_workers=config.concurrency, thread_name_prefix="screen")
    try:
        pending: list[AssessmentOutcome | Future[AssessmentOutcome]] = []
        for record in records:
            replay = journal.get(key(record))
            pending.append(replay if replay is not None else executor.submit(work, record, seed()))
        for item in pending:
            yield item.result() if isinstance(item, Future) else item
    finally:
        executor.shutdown(wait=True, cancel_futures=True)


def screen_corpus(
    records: Sequence[ArticleRecord],
    criteria: ScreeningCriteria | str,
    config: RunConfig,
    journal: RunJournal,
    transport: Transport,
    **kwargs,
) -> list[AssessmentOutcome]:
    """Screen every record; see :func:`iter_screen_corpus` for the contract."""
    return list(iter_screen_corpus(records, criteria, config, journal, transport, **kwargs))
