"""Offline stand-in for the model endpoint, driven by a YAML rules file.

Example rules file::

    default: |
      Acceptance: No
      Authors: $authors
      Article Title: $title
      Publication Year: $year
      Methodology: Theoretical paper
      Explanation: Off topic.
    rules:
      - keywords: [entrepreneur, "decision-making"]
        match: all          # or "any" (the default)
        reply: |
          Acceptance: Yes
          ...

Keywords are matched case-insensitively as substrings of the abstract and
rules are tried in file order. ``$authors``, ``$title`` and ``$year`` in a
reply are filled from the article being screened.
"""

from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass
from pathlib import Path
from string import Template

import yaml

from .prompts import CORRECTIVE_SENTENCE
from .transport import Message, TransportReply


class RulesError(ValueError):
    pass


@dataclass(frozen=True)
class FakeRule:
    keywords: tuple[str, ...]
    reply: str
    match_all: bool = False

    def matches(self, abstract: str) -> bool:
        text = abstract.casefold()
        hits = (kw.casefold() in text for kw in self.keywords)
        return all(hits) if self.match_all else any(hits)


def _split_user_message(content: str) -> dict[str, str]:
    if content.endswith("\n\n" + CORRECTIVE_SENTENCE):
        content = content[: -len(CORRECTIVE_SENTENCE) - 2]
    head, _, tail = content.rpartition("\nAuthors: ")
    abstract = head.removeprefix("Abstract: ")
    authors, _, rest = tail.partition("\nArticle Title: ")
    title, _, year = rest.rpartition("\nPublication Year: ")
    return {"abstract": abstract, "authors": authors, "title": title, "year": year}


class FakeAssessor:
    """Deterministic transport: canned replies chosen by keyword rules."""

    def __init__(self, rules: list[FakeRule], default: str) -> None:
        self.rules = list(rules)
        self.default = default
        self.calls = 0
        self._lock = threading.Lock()

    @classmethod
    def from_file(cls, path: str | Path) -> FakeAssessor:
        try:
            data = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
        except (OSError, yaml.YAMLError) as exc:
            raise RulesError(f"cannot load rules file {path}: {exc}") from exc
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: object) -> FakeAssessor:
        if not isinstance(data, dict) or not isinstance(data.get("default"), str):
            raise RulesError("rules file needs a string 'default' reply")
        rules = []
        for i, item in enumerate(data.get("rules") or []):
            if not isinstance(item, dict):
                raise RulesError(f"rule {i} is not a mapping")
            keywords = item.get("keywords")
            if not keywords or not isinstance(keywords, list):
                raise RulesError(f"rule {i} needs a non-empty 'keywords' list")
            if not isinstance(item.get("reply"), str):
                raise RulesError(f"rule {i} needs a string 'reply'")
            match = item.get("match", "any")
            if match not in ("any", "all"):
                raise RulesError(f"rule {i}: match must be 'any' or 'all'")
            rules.append(FakeRule(tuple(str(k) for k in keywords), item["reply"], match == "all"))
        return cls(rules, data["default"])

    def reply_for(self, fields: dict[str, str]) -> str:
        template = next(
            (rule.reply for rule in self.rules if rule.matches(fields["abstract"])), self.default
        )
        return Template(template).safe_substitute(fields).rstrip("\n")

    def complete(self, messages: list[Message]) -> TransportReply:
        with self._lock:
            self.calls += 1
        user = next(m["content"] for m in reversed(messages) if m["role"] == "user")
        text = self.reply_for(_split_user_message(user))
        digest = hashlib.sha256((user + "\x00" + text).encode("utf-8")).hexdigest()
        return TransportReply(text=text, request_id=f"fake-{digest[:16]}")
