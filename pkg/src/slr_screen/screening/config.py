from __future__ import annotations

from dataclasses import dataclass

DEFAULT_ENDPOINT = "https://api.openai.com/v1/chat/completions"


@dataclass(frozen=True)
class RunConfig:
    """Endpoint, retry and throughput settings for a screening run.

    ``rate_limit`` is requests per minute across all workers; ``0`` disables
    limiting. Durations are in seconds.
    """

    endpoint_url: str = DEFAULT_ENDPOINT
    model_name: str = "gpt-4"
    temperature: float = 0.0
    max_retries: int = 5
    base_backoff: float = 1.0
    max_backoff: float = 60.0
    rate_limit: float = 60.0
    concurrency: int = 1
    request_timeout: float = 120.0
    parse_retry: int = 1
    strict_parse: bool = False

    def __post_init__(self) -> None:
        if self.concurrency < 1:
            raise ValueError("concurrency must be >= 1")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.parse_retry < 0:
            raise ValueError("parse_retry must be >= 0")
        if not 0 <= self.temperature <= 2:
            raise ValueError("temperature must be in [0, 2]")
        if self.base_backoff < 0 or self.max_backoff < 0:
            raise ValueError("backoff durations must be >= 0")
        if self.rate_limit < 0:
            raise ValueError("rate_limit must be >= 0")
        if self.request_timeout <= 0:
            raise ValueError("request_timeout must be > 0")
