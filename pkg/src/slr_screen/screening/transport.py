"""Transport layer: one chat-completion exchange per call."""

from __future__ import annotations

import logging
import threading
import uuid
from dataclasses import dataclass
from typing import Protocol

import httpx

from .config import RunConfig

logger = logging.getLogger(__name__)

API_KEY_ENV = "SLR_SCREEN_API_KEY"

Message = dict[str, str]


@dataclass(frozen=True)
class TransportReply:
    text: str
    request_id: str


class TransportError(Exception):
    """A failed exchange.

    ``retryable`` is true for rate limiting, server errors, timeouts and
    connection problems; other client errors are terminal for the record.
    """

    def __init__(
        self,
        message: str,
        retryable: bool,
        status: int | None = None,
        retry_after: float | None = None,
    ) -> None:
        super().__init__(message)
        self.retryable = retryable
        self.status = status
        self.retry_after = retry_after


class Transport(Protocol):
    """Anything that can answer a system+user message pair.

    Implementations must be safe to call from several threads.
    """

    def complete(self, messages: list[Message]) -> TransportReply: ...


def _retry_after(response: httpx.Response) -> float | None:
    value = response.headers.get("retry-after")
    if value is None:
        return None
    try:
        return max(0.0, float(value))
    except ValueError:
        return None


class HttpTransport:
    """POSTs chat-completions style JSON to ``config.endpoint_url``."""

    _count_lock = threading.Lock()
    requests_sent = 0  # process-wide, across instances

    def __init__(
        self, config: RunConfig, api_key: str, client: httpx.Client | None = None
    ) -> None:
        self.config = config
        self._client = client or httpx.Client(timeout=config.request_timeout)
        self._headers = {
            "Authorization": f"Bearer {api_key}",
            "Content-Type": "application/json",
        }

    def close(self) -> None:
        self._client.close()

    def complete(self, messages: list[Message]) -> TransportReply:
        body = {
            "model": self.config.model_name,
            "temperature": self.config.temperature,
            "messages": messages,
        }
        with HttpTransport._count_lock:
            HttpTransport.requests_sent += 1
        try:
            response = self._client.post(
                self.config.endpoint_url, json=body, headers=self._headers
            )
        except httpx.TimeoutException as exc:
            raise TransportError(f"timeout: {exc}", retryable=True) from exc
        except httpx.TransportError as exc:
            raise TransportError(f"connection error: {exc}", retryable=True) from exc

        status = response.status_code
        if status == 429 or status >= 500:
            raise TransportError(
                f"HTTP {status}", retryable=True, status=status, retry_after=_retry_after(response)
            )
        if status >= 400:
            raise TransportError(f"HTTP {status}: {response.text[:200]}", retryable=False, status=status)
        try:
            payload = response.json()
            text = payload["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise TransportError(
                f"unexpected response body: {exc!r}", retryable=True, status=status
            ) from exc
        if not isinstance(text, str):
            raise TransportError("message content is not text", retryable=True, status=status)
        request_id = (
            payload.get("id") or response.headers.get("x-request-id") or uuid.uuid4().hex
        )
        return TransportReply(text=text, request_id=str(request_id))
