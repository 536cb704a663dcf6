"""Append-only newline-delimited JSON journal of completed assessments.

Each line is one outcome. On reload the last line for a fingerprint wins, and
a half-written final line (left by a crash) is dropped with a warning.
"""

from __future__ import annotations

import json
import logging
import os
import threading
from pathlib import Path

from .screening.outcome import AssessmentOutcome

logger = logging.getLogger(__name__)

JOURNAL_VERSION = 1


class JournalError(Exception):
    pass


class JournalWriteFailed(JournalError):
    pass


class JournalCorrupt(JournalError):
    def __init__(self, path: str | Path, line: int, reason: str) -> None:
        super().__init__(f"{path}: line {line}: {reason}")
        self.line = line


class RunJournal:
    """In-memory view of a journal file plus a serialized appender.

    Use :func:`journal_load` to construct one from disk.
    """

    def __init__(self, path: str | Path, entries: dict[str, AssessmentOutcome] | None = None):
        self.path = Path(path)
        self.entries: dict[str, AssessmentOutcome] = dict(entries or {})
        self.warnings: list[str] = []
        self._lock = threading.Lock()
        self._handle = None

    def __contains__(self, fingerprint: str) -> bool:
        return fingerprint in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, fingerprint: str) -> AssessmentOutcome | None:
        return self.entries.get(fingerprint)

    def append(self, outcome: AssessmentOutcome) -> None:
        """Write one outcome and fsync before returning.

        Raises:
            JournalWriteFailed: on any OS-level error.
        """
        line = json.dumps(outcome.to_json(), ensure_ascii=False, sort_keys=True) + "\n"
        with self._lock:
            try:
                if self._handle is None:
                    self._handle = self._open_for_append()
                self._handle.write(line.encode("utf-8"))
                self._handle.flush()
                os.fsync(self._handle.fileno())
            except OSError as exc:
                raise JournalWriteFailed(f"{self.path}: {exc}") from exc
            self.entries[outcome.fingerprint] = outcome

    def _open_for_append(self):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        handle = open(self.path, "a+b")
        # Drop a torn final line so the next record starts on its own line.
        size = handle.seek(0, os.SEEK_END)
        if size:
            handle.seek(0)
            data = handle.read()
            cut = data.rfind(b"\n") + 1
            if cut != size:
                handle.truncate(cut)
        return handle

    def close(self) -> None:
        with self._lock:
            if self._handle is not None:
                self._handle.close()
                self._handle = None

    def __enter__(self) -> RunJournal:
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


def journal_append(journal: RunJournal, outcome: AssessmentOutcome) -> None:
    journal.append(outcome)


def journal_load(path: str | Path) -> RunJournal:
    """Load a journal; a missing file gives an empty journal.

    Raises:
        JournalCorrupt: a newline-terminated line fails to parse.
    """
    path = Path(path)
    journal = RunJournal(path)
    if not path.exists():
        return journal
    with open(path, "rb") as handle:
        data = handle.read()
    lines = data.split(b"\n")
    torn = not data.endswith(b"\n")
    if not torn:
        lines.pop()
    for number, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            data = json.loads(raw.decode("utf-8"))
            if data.get("v") != JOURNAL_VERSION:
                raise ValueError(f"unsupported journal version {data.get('v')!r}")
            outcome = AssessmentOutcome.from_json(data)
        except (ValueError, KeyError, TypeError, AttributeError) as exc:
            if torn and number == len(lines):
                message = f"line {number}: incomplete final line skipped ({exc})"
                logger.warning("%s: %s", path, message)
                journal.warnings.append(message)
                continue
            raise JournalCorrupt(path, number, str(exc)) from exc
        journal.entries[outcome.fingerprint] = outcome
    return journal
