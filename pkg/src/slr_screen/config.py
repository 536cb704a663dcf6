"""YAML pipeline configuration.

Minimal example::

    run_id: ai-entrepreneurship
    out_dir: out
    inputs:
      - path: exports/scopus.csv
        source: scopus
        columns: {title: Title}       # per-file header overrides
      - path: exports/wos.csv
        source: wos
    criteria:
      topic: the impact of AI on entrepreneurial decision-making
      items:
        - heading: Relevance to the Topic
          body: Assess if the article's content is directly related to ...
    endpoint:
      url: https://api.openai.com/v1/chat/completions
      model: gpt-4
      concurrency: 2
    dedup:
      strip_doi_prefixes: true
      write_removed: true

Relative paths resolve against the config file's directory. The API key is
read from the environment only; a key in the file is rejected.
"""

from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .ingest import ColumnMap
from .screening.config import RunConfig
from .screening.prompts import ScreeningCriteria


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class InputSpec:
    path: Path
    source: str
    columns: ColumnMap = field(default_factory=ColumnMap)


@dataclass(frozen=True)
class PipelineConfig:
    inputs: tuple[InputSpec, ...]
    out_dir: Path
    run_id: str = "default"
    criteria: ScreeningCriteria | None = None
    run: RunConfig = field(default_factory=RunConfig)
    strip_doi_prefixes: bool = True
    write_removed: bool = False

    @property
    def cleaned_path(self) -> Path:
        return self.out_dir / "cleaned_records.csv"

    @property
    def removed_path(self) -> Path:
        return self.out_dir / "removed_duplicates.csv"

    @property
    def dedup_report_path(self) -> Path:
        return self.out_dir / "dedup_report.json"

    @property
    def journal_path(self) -> Path:
        return self.out_dir / f"journal-{self.run_id}.jsonl"

    @property
    def results_path(self) -> Path:
        return self.out_dir / "results.csv"

    @property
    def summary_path(self) -> Path:
        return self.out_dir / "summary.txt"


_COLUMN_KEYS = {
    "authors": "authors_col",
    "title": "title_col",
    "abstract": "abstract_col",
    "doi": "doi_col",
    "year": "year_col",
}
_ENDPOINT_KEYS = {
    "url": "endpoint_url",
    "model": "model_name",
    "temperature": "temperature",
    "max_retries": "max_retries",
    "base_backoff": "base_backoff",
    "max_backoff": "max_backoff",
    "rate_limit": "rate_limit",
    "concurrency": "concurrency",
    "request_timeout": "request_timeout",
    "parse_retry": "parse_retry",
    "strict_parse": "strict_parse",
}
_RUN_ID = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")
_TOP_KEYS = {"run_id", "out_dir", "inputs", "criteria", "endpoint", "dedup"}


def _mapping(value: Any, where: str) -> dict[str, Any]:
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ConfigError(f"{where} must be a mapping")
    return value


def _reject_unknown(data: dict[str, Any], allowed: set[str], where: str) -> None:
    for key in data:
        if "key" in str(key).lower() and "api" in str(key).lower():
            raise ConfigError(
                f"{where}: API keys are not accepted in config files; "
                "set SLR_SCREEN_API_KEY instead"
            )
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown keys {unknown}")


def parse_config(data: Any, base_dir: Path) -> PipelineConfig:
    root = _mapping(data, "config")
    _reject_unknown(root, _TOP_KEYS, "config")

    raw_inputs = root.get("inputs")
    if not isinstance(raw_inputs, list) or not raw_inputs:
        raise ConfigError("inputs must be a non-empty list")
    inputs = []
    for i, item in enumerate(raw_inputs):
        if isinstance(item, str):
            item = {"path": item}
        item = _mapping(item, f"inputs[{i}]")
        _reject_unknown(item, {"path", "source", "columns"}, f"inputs[{i}]")
        if not item.get("path"):
            raise ConfigError(f"inputs[{i}].path is required")
        path = base_dir / str(item["path"])
        columns = _mapping(item.get("columns"), f"inputs[{i}].columns")
        _reject_unknown(columns, set(_COLUMN_KEYS), f"inputs[{i}].columns")
        try:
            cmap = ColumnMap(**{_COLUMN_KEYS[k]: str(v) for k, v in columns.items()})
        except ValueError as exc:
            raise ConfigError(f"inputs[{i}].columns: {exc}") from exc
        inputs.append(InputSpec(path=path, source=str(item.get("source") or path.stem), columns=cmap))

    run_id = str(root.get("run_id", "default"))
    if not _RUN_ID.match(run_id):
        raise ConfigError(f"run_id {run_id!r} must be alphanumeric with . _ -")

    criteria = None
    if root.get("criteria") is not None:
        crit = _mapping(root["criteria"], "criteria")
        _reject_unknown(crit, {"topic", "items", "extra_guidance"}, "criteria")
        items = crit.get("items")
        if not isinstance(items, list):
            raise ConfigError("criteria.items must be a list")
        pairs = []
        for i, entry in enumerate(items):
            entry = _mapping(entry, f"criteria.items[{i}]")
            if "heading" not in entry or "body" not in entry:
                raise ConfigError(f"criteria.items[{i}] needs heading and body")
            pairs.append((str(entry["heading"]).strip(), str(entry["body"]).strip()))
        try:
            criteria = ScreeningCriteria(
                topic=str(crit.get("topic") or "").strip(),
                criteria_items=pairs,
                extra_guidance=crit.get("extra_guidance"),
            )
        except ValueError as exc:
            raise ConfigError(f"criteria: {exc}") from exc

    endpoint = _mapping(root.get("endpoint"), "endpoint")
    _reject_unknown(endpoint, set(_ENDPOINT_KEYS), "endpoint")
    try:
        run = RunConfig(**{_ENDPOINT_KEYS[k]: v for k, v in endpoint.items()})
        _check_types(run)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"endpoint: {exc}") from exc

    dedup = _mapping(root.get("dedup"), "dedup")
    _reject_unknown(dedup, {"strip_doi_prefixes", "write_removed"}, "dedup")

    return PipelineConfig(
        inputs=tuple(inputs),
        out_dir=base_dir / str(root.get("out_dir", "out")),
        run_id=run_id,
        criteria=criteria,
        run=run,
        strip_doi_prefixes=bool(dedup.get("strip_doi_prefixes", True)),
        write_removed=bool(dedup.get("write_removed", False)),
    )


def _check_types(run: RunConfig) -> None:
    for f in dataclasses.fields(run):
        value = getattr(run, f.name)
        default = f.default
        if isinstance(default, bool):
            ok = isinstance(value, bool)
        elif isinstance(default, int):
            ok = isinstance(value, int) and not isinstance(value, bool)
        elif isinstance(default, float):
            ok = isinstance(value, (int, float)) and not isinstance(value, bool)
        else:
            ok = isinstance(value, str) and bool(value)
        if not ok:
            raise TypeError(f"{f.name} has invalid value {value!r}")


def load_config(path: str | Path) -> PipelineConfig:
    """Read and validate a YAML config.

    Raises:
        ConfigError: unreadable file, bad YAML, or invalid settings.
    """
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from exc
    return parse_config(data, path.parent)


def with_overrides(config: PipelineConfig, **changes: Any) -> PipelineConfig:
    """Apply CLI flag overrides; ``None`` values are ignored."""
    run_changes = {k: v for k, v in changes.items() if k in {"concurrency", "strict_parse"} and v is not None}
    top = {k: v for k, v in changes.items() if k not in run_changes and v is not None}
    try:
        run = dataclasses.replace(config.run, **run_changes) if run_changes else config.run
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return dataclasses.replace(config, run=run, **top)
