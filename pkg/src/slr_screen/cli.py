"""Command-line entry point: ``slr-screen dedup|screen|run|validate-config|re-parse``.

Exit codes: 0 success, 1 unexpected/journal error, 2 configuration error,
3 ingest error, 4 some records failed in transport, 5 missing credential.
"""

from __future__ import annotations

import dataclasses
import functools
import json
import logging
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from . import __version__
from .config import ConfigError, PipelineConfig, load_config, with_overrides
from .dedup import DedupReport, run_stage_one, write_records_csv, write_removed_csv
from .ingest import IngestError, read_records
from .io import atomic_write
from .parser import ParseError, parse_decision
from .records import ArticleRecord, fingerprint
from .report import compute_summary, render_stage_one, render_summary, write_results_table
from .screening import (
    API_KEY_ENV,
    AssessmentOutcome,
    FakeAssessor,
    HttpTransport,
    RulesError,
    Status,
    screen_corpus,
)
from .state import JournalError, journal_load

logger = logging.getLogger("slr_screen")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_INGEST = 3
EXIT_TRANSPORT = 4
EXIT_CREDENTIAL = 5


class CommandFailed(Exception):
    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code


def _fail(code: int, message: str) -> None:
    raise CommandFailed(code, message)


def _clock():
    """UTC now, or the fixed ``SOURCE_DATE_EPOCH`` instant for reproducible output."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        try:
            fixed = datetime.fromtimestamp(int(epoch), tz=timezone.utc)
        except ValueError:
            _fail(EXIT_CONFIG, f"SOURCE_DATE_EPOCH must be an integer, got {epoch!r}")
        return lambda: fixed
    return lambda: datetime.now(timezone.utc)


def _load(config_path: str, **overrides) -> PipelineConfig:
    try:
        return with_overrides(load_config(config_path), **overrides)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, f"config error: {exc}")


def _key(config: PipelineConfig):
    return functools.partial(fingerprint, strip_doi_prefixes=config.strip_doi_prefixes)


def do_dedup(config: PipelineConfig) -> DedupReport:
    corpora = []
    try:
        for spec in config.inputs:
            records, report = read_records(spec.path, spec.columns, spec.source)
            logger.info("%s: %d rows, %d records", spec.path, report.rows_read, report.records_produced)
            corpora.append(records)
    except IngestError as exc:
        _fail(EXIT_INGEST, f"ingest error: {exc}")
    kept, report, removed = run_stage_one(corpora, strip_doi_prefixes=config.strip_doi_prefixes)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    write_records_csv(kept, config.cleaned_path)
    if config.write_removed:
        write_removed_csv(removed, config.removed_path)
    with atomic_write(config.dedup_report_path) as handle:
        json.dump(report.to_dict(), handle, indent=2)
        handle.write("\n")
    return report


def _read_cleaned(config: PipelineConfig) -> tuple[list[ArticleRecord], DedupReport]:
    try:
        records, _ = read_records(config.cleaned_path, source_col="Record Source")
    except IngestError as exc:
        _fail(EXIT_INGEST, f"cannot read cleaned records (run 'dedup' first?): {exc}")
    report = DedupReport(total_processed=len(records), kept=len(records))
    if config.dedup_report_path.exists():
        try:
            report = DedupReport(**json.loads(config.dedup_report_path.read_text(encoding="utf-8")))
        except (OSError, ValueError, TypeError) as exc:
            _fail(EXIT_INGEST, f"bad dedup report {config.dedup_report_path}: {exc}")
    return records, report


def _finish(config: PipelineConfig, records, outcomes, dedup_report: DedupReport) -> int:
    key = _key(config)
    write_results_table(outcomes, {key(r): r for r in records}, config.results_path)
    summary = compute_summary(dedup_report, outcomes)
    text = render_summary(summary)
    with atomic_write(config.summary_path) as handle:
        handle.write(text)
    click.echo(text, nl=False)
    return EXIT_TRANSPORT if summary.transport_failed else EXIT_OK


def _rotate_journal(path: Path) -> None:
    if not path.exists():
        return
    n = 1
    while path.with_name(f"{path.name}.{n}.bak").exists():
        n += 1
    path.rename(path.with_name(f"{path.name}.{n}.bak"))


def do_screen(config: PipelineConfig, fake_rules: str | None, resume: bool) -> int:
    if config.criteria is None:
        _fail(EXIT_CONFIG, "config error: 'criteria' section is required for screening")
    if fake_rules is not None:
        try:
            transport = FakeAssessor.from_file(fake_rules)
        except RulesError as exc:
            _fail(EXIT_CONFIG, f"config error: {exc}")
        # Nothing leaves the process, so there is no endpoint to protect.
        config = dataclasses.replace(config, run=dataclasses.replace(config.run, rate_limit=0))
    else:
        api_key = os.environ.get(API_KEY_ENV)
        if not api_key:
            _fail(EXIT_CREDENTIAL, f"missing credential: set {API_KEY_ENV}")
        transport = HttpTransport(config.run, api_key)
    clock = _clock()

    records, dedup_report = _read_cleaned(config)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    if not resume:
        _rotate_journal(config.journal_path)
    try:
        journal = journal_load(config.journal_path)
        with journal:
            outcomes = screen_corpus(
                records, config.criteria, config.run, journal, transport,
                clock=clock, key=_key(config),
            )
    except JournalError as exc:
        _fail(EXIT_ERROR, f"journal error (safe to resume): {exc}")
    finally:
        if isinstance(transport, HttpTransport):
            transport.close()
    return _finish(config, records, outcomes, dedup_report)


def do_reparse(config: PipelineConfig) -> int:
    records, dedup_report = _read_cleaned(config)
    try:
        journal = journal_load(config.journal_path)
    except JournalError as exc:
        _fail(EXIT_ERROR, f"journal error: {exc}")
    key = _key(config)
    outcomes = []
    for record in records:
        old = journal.get(key(record))
        if old is None:
            continue
        outcomes.append(reparse_outcome(old, strict=config.run.strict_parse))
    with atomic_write(config.journal_path) as handle:
        for outcome in outcomes:
            handle.write(json.dumps(outcome.to_json(), ensure_ascii=False, sort_keys=True) + "\n")
    return _finish(config, records, outcomes, dedup_report)


def reparse_outcome(outcome: AssessmentOutcome, strict: bool = False) -> AssessmentOutcome:
    """Re-run the parser over a stored raw reply. Transport failures stay as they are."""
    if outcome.status is Status.TRANSPORT_FAILED:
        return outcome
    try:
        decision = parse_decision(outcome.raw_response, strict=strict)
    except ParseError as exc:
        return AssessmentOutcome(
            fingerprint=outcome.fingerprint, status=Status.PARSE_FAILED,
            raw_response=outcome.raw_response, request_id=outcome.request_id,
            completed_at=outcome.completed_at, error=str(exc),
        )
    return AssessmentOutcome(
        fingerprint=outcome.fingerprint, status=Status.DECIDED,
        raw_response=outcome.raw_response, decision=decision,
        request_id=outcome.request_id, completed_at=outcome.completed_at,
    )


def _run(fn, *args) -> None:
    try:
        code = fn(*args)
    except CommandFailed as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.code)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_ERROR)
    sys.exit(code or EXIT_OK)


config_option = click.option(
    "--config", "config_path", required=True, type=click.Path(dir_okay=False),
    help="YAML pipeline config.",
)
out_dir_option = click.option(
    "--out-dir", type=click.Path(file_okay=False, path_type=Path),
    help="Override the config's output directory.",
)


def _screen_options(fn):
    fn = click.option("--fake-assessor", "fake_rules", type=click.Path(dir_okay=False),
                      help="Answer from a keyword rules file instead of the network.")(fn)
    fn = click.option("--concurrency", type=int, help="Requests in flight at once.")(fn)
    fn = click.option("--strict-parse", is_flag=True, default=None,
                      help="Require exact, case-sensitive reply keys.")(fn)
    fn = click.option("--resume/--no-resume", default=True, show_default=True,
                      help="Reuse the run journal; --no-resume rotates it to a .bak file.")(fn)
    return fn


@click.group()
@click.version_option(__version__)
@click.option("-v", "--verbose", count=True, help="More logging (repeatable).")
def cli(verbose: int) -> None:
    """Deduplicate bibliographic exports and screen them with an LLM."""
    level = logging.WARNING - 10 * min(verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


@cli.command()
@config_option
@out_dir_option
def dedup(config_path: str, out_dir: Path | None) -> None:
    """Merge inputs, drop incomplete records and duplicates."""

    def go() -> int:
        config = _load(config_path, out_dir=out_dir)
        click.echo(render_stage_one(do_dedup(config)), nl=False)
        return EXIT_OK

    _run(go)


@cli.command()
@config_option
@out_dir_option
@_screen_options
def screen(config_path, out_dir, fake_rules, concurrency, strict_parse, resume) -> None:
    """Screen the cleaned records and write results.csv and summary.txt."""

    def go() -> int:
        config = _load(config_path, out_dir=out_dir, concurrency=concurrency, strict_parse=strict_parse)
        return do_screen(config, fake_rules, resume)

    _run(go)


@cli.command()
@config_option
@out_dir_option
@_screen_options
def run(config_path, out_dir, fake_rules, concurrency, strict_parse, resume) -> None:
    """Stage one followed by screening."""

    def go() -> int:
        config = _load(config_path, out_dir=out_dir, concurrency=concurrency, strict_parse=strict_parse)
        if config.criteria is None:
            _fail(EXIT_CONFIG, "config error: 'criteria' section is required for screening")
        if fake_rules is None and not os.environ.get(API_KEY_ENV):
            _fail(EXIT_CREDENTIAL, f"missing credential: set {API_KEY_ENV}")
        do_dedup(config)
        return do_screen(config, fake_rules, resume)

    _run(go)


@cli.command("validate-config")
@config_option
def validate_config(config_path: str) -> None:
    """Check a config file without touching any data."""

    def go() -> int:
        config = _load(config_path)
        missing = [str(spec.path) for spec in config.inputs if not spec.path.is_file()]
        click.echo(f"config OK: {len(config.inputs)} input(s), run id {config.run_id}")
        if config.criteria is None:
            click.echo("note: no criteria section; only 'dedup' can run")
        for path in missing:
            click.echo(f"warning: input not found: {path}", err=True)
        return EXIT_OK

    _run(go)


@cli.command("re-parse")
@config_option
@out_dir_option
@click.option("--strict-parse", is_flag=True, default=None,
              help="Require exact, case-sensitive reply keys.")
def re_parse(config_path: str, out_dir: Path | None, strict_parse: bool | None) -> None:
    """Re-run the parser over the journal's stored replies; no network."""

    def go() -> int:
        return do_reparse(_load(config_path, out_dir=out_dir, strict_parse=strict_parse))

    _run(go)


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
