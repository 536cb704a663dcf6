import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slr_screen.dedup import (
    DedupReport,
    deduplicate,
    remove_incomplete,
    run_stage_one,
    write_records_csv,
    write_removed_csv,
)
from slr_screen.ingest import read_records
from slr_screen.records import fingerprint

from .helpers import make_record
from .oracles import brute_force_kept, random_corpus


class TestRemoveIncomplete:
    def test_one_blank_abstract(self):
        recs = [make_record(1), make_record(2, abstract=" "), make_record(3)]
        kept, removed = remove_incomplete(recs)
        assert kept == [recs[0], recs[2]] and removed == 1

    def test_all_complete(self):
        recs = [make_record(1), make_record(2)]
        assert remove_incomplete(recs) == (recs, 0)

    def test_empty(self):
        assert remove_incomplete([]) == ([], 0)


class TestDeduplicate:
    def test_same_doi_up_to_case_and_prefix(self):
        a = make_record(1, doi="10.1/ABC", title="First")
        b = make_record(2, doi="https://doi.org/10.1/abc", title="Second")
        kept, removed = deduplicate([a, b])
        assert kept == [a]
        assert [r.record for r in removed] == [b]
        assert removed[0].keeper_fingerprint == fingerprint(a)

    def test_partitions_never_compared(self):
        doi_rec = make_record(0, authors="X", title="Same", doi="10.1/z")
        first = make_record(1, authors="X", title="Same", doi=None)
        second = make_record(2, authors=" x ", title="SAME", doi="  ")
        records = [first, doi_rec, second]
        kept, removed = deduplicate(records)
        assert kept == [first, doi_rec]
        assert [records[i] for i in brute_force_kept(records)] == kept
        assert [r.record for r in removed] == [second]

    def test_six_record_mixed_corpus(self):
        records = [
            make_record(1, doi="10.5/a"),
            make_record(2, doi="DOI:10.5/A"),
            make_record(3, doi=None, authors="P", title="Q"),
            make_record(4, doi="10.5/b"),
            make_record(5, doi="http://dx.doi.org/10.5/B"),
            make_record(6, doi=None, authors="p ", title=" q"),
        ]
        kept, removed = deduplicate(records)
        expected = [records[i] for i in brute_force_kept(records)]
        assert len(kept) == 3 and kept == expected
        assert len(removed) == 3

    def test_prefix_stripping_disabled(self):
        a = make_record(1, doi="10.1/a")
        b = make_record(2, doi="doi:10.1/a")
        assert len(deduplicate([a, b])[0]) == 1
        assert len(deduplicate([a, b], strip_doi_prefixes=False)[0]) == 2


corpus_seeds = st.integers(min_value=0, max_value=2**32 - 1)


@given(corpus_seeds)
def test_matches_oracle(seed):
    records = random_corpus(random.Random(seed))
    kept, removed = deduplicate(records)
    assert kept == [records[i] for i in brute_force_kept(records)]
    assert len(kept) + len(removed) == len(records)


@given(corpus_seeds)
def test_idempotent(seed):
    kept, _ = deduplicate(random_corpus(random.Random(seed)))
    assert deduplicate(kept)[1] == []


@given(corpus_seeds, st.randoms(use_true_random=False))
def test_permuting_later_duplicates_keeps_same_set(seed, shuffler):
    records = random_corpus(random.Random(seed))
    kept, removed = deduplicate(records)
    later = [r.record for r in removed]
    shuffler.shuffle(later)
    kept2, _ = deduplicate(kept + later)
    assert kept2 == kept


@given(corpus_seeds)
def test_fingerprint_equality_iff_duplicate(seed):
    records = random_corpus(random.Random(seed), max_size=15)
    for a in records:
        for b in records:
            dup = len(deduplicate([a, b])[0]) == 1
            assert (fingerprint(a) == fingerprint(b)) == dup


class TestStageOne:
    def test_reference_counts_report(self):
        report = DedupReport(total_processed=1499, removed_empty=1, removed_duplicates=210, kept=1288)
        assert report.kept == 1288

    def test_report_invariant_enforced(self):
        with pytest.raises(ValueError):
            DedupReport(total_processed=1499, removed_empty=1, removed_duplicates=210, kept=1289)
        with pytest.raises(ValueError):
            DedupReport(total_processed=0, removed_empty=-1, removed_duplicates=0, kept=1)

    def test_empty_corpus(self):
        kept, report, removed = run_stage_one([])
        assert kept == [] and removed == []
        assert report == DedupReport(0, 0, 0, 0)

    def test_no_dupes_no_empties(self):
        kept, report, _ = run_stage_one([[make_record(1)], [make_record(2)]])
        assert report.kept == report.total_processed == 2

    def test_empty_removal_precedes_dedup(self):
        # The incomplete first copy must not shadow the complete second one.
        a = make_record(1, abstract="")
        b = make_record(2, doi=a.doi)
        kept, report, _ = run_stage_one([[a], [b]])
        assert kept == [b]
        assert (report.removed_empty, report.removed_duplicates) == (1, 0)

    @given(corpus_seeds)
    @settings(max_examples=50)
    def test_report_arithmetic(self, seed):
        rng = random.Random(seed)
        corpora = [random_corpus(rng, 20), random_corpus(rng, 20)]
        corpora[0] = [make_record(99, abstract="")] + corpora[0]
        _, report, removed = run_stage_one(corpora)
        assert report.total_processed == report.kept + report.removed_empty + report.removed_duplicates
        assert report.removed_duplicates == len(removed)


def test_cleaned_csv_round_trip(tmp_path):
    records = [
        make_record(1, extras={"Cited by": "2"}, source="scopus"),
        make_record(2, doi=None, publication_year=None, extras={"Language": "English"}, source="wos"),
    ]
    path = tmp_path / "cleaned.csv"
    write_records_csv(records, path)
    back, _ = read_records(path, source_col="Record Source")
    assert [(r.authors, r.title, r.abstract, r.doi, r.publication_year, r.source) for r in back] == [
        (r.authors, r.title, r.abstract, r.doi, r.publication_year, r.source) for r in records
    ]
    assert dict(back[0].extras) == {"Cited by": "2", "Language": ""}


def test_removed_audit_file(tmp_path):
    a, b = make_record(1), make_record(2, doi=make_record(1).doi)
    _, removed = deduplicate([a, b])
    path = tmp_path / "removed.csv"
    write_removed_csv(removed, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("Kept Fingerprint,Authors")
    assert lines[1].startswith(fingerprint(a) + ",Author2 A.")
