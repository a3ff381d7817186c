from __future__ import annotations

import json
import random

import pytest

from refeval.corpus import (
    IngestOptions,
    YearWindow,
    ingest_corpus,
    publications_of,
    references_of,
)
from refeval.errors import CorpusFormatError, NotFoundError

from oracles import make_corpus, random_corpus_records, record


def test_empty_stream():
    corpus, report = ingest_corpus([])
    assert corpus.publications == {}
    assert corpus.researchers == {}
    assert report.publications == 0
    assert report.researchers == 0


def test_citation_index_inverts_references():
    corpus = make_corpus(
        [
            record("A", 2000),
            record("B", 2002, references=["A"]),
            record("C", 2003, references=["A"]),
        ]
    )
    assert corpus.citers_of("A") == {"B", "C"}
    assert corpus.citers_of("B") == frozenset()


def test_dangling_reference_dropped_and_counted():
    corpus, report = ingest_corpus(
        [json.dumps(record("A", 2000, references=["X"]))],
        IngestOptions(dangling_policy="drop"),
    )
    assert corpus.publications["A"].reference_ids == frozenset()
    assert report.dangling_edges_dropped == 1


def test_dangling_reference_kept_policy():
    corpus, report = ingest_corpus(
        [json.dumps(record("A", 2000, references=["X"]))],
        IngestOptions(dangling_policy="keep"),
    )
    assert corpus.publications["A"].reference_ids == {"X"}
    assert report.dangling_edges_dropped == 0
    # the citation index still only inverts resolvable edges
    assert corpus.citers_of("X") == frozenset()


def test_dangling_reference_error_policy():
    with pytest.raises(CorpusFormatError, match="unknown ids"):
        ingest_corpus(
            [json.dumps(record("A", 2000, references=["X"]))],
            IngestOptions(dangling_policy="error"),
        )


def test_self_reference_removed():
    corpus, report = ingest_corpus(
        [json.dumps(record("A", 2000, references=["A"]))]
    )
    assert corpus.publications["A"].reference_ids == frozenset()
    assert report.self_reference_edges_dropped == 1


def test_duplicate_id_rejected():
    lines = [json.dumps(record("A", 2000)), json.dumps(record("A", 2001))]
    with pytest.raises(CorpusFormatError, match="duplicate publication id"):
        ingest_corpus(lines)


def test_malformed_json_reports_line_number():
    lines = [json.dumps(record("A", 2000)), "{not json"]
    with pytest.raises(CorpusFormatError, match="line 2"):
        ingest_corpus(lines)


@pytest.mark.parametrize("year", [999, 3001])
def test_year_out_of_range_rejected(year):
    with pytest.raises(CorpusFormatError, match="outside valid range"):
        ingest_corpus([json.dumps(record("A", year))])


@pytest.mark.parametrize(
    "mutation,message",
    [
        (lambda r: r.pop("id"), "missing required field 'id'"),
        (lambda r: r.pop("year"), "missing required field 'year'"),
        (lambda r: r.pop("title"), "missing required field 'title'"),
        (lambda r: r.pop("authors"), "missing required field 'authors'"),
        (lambda r: r.update(year="2004"), "must be an integer"),
        (lambda r: r.update(authors="x"), "array of strings"),
    ],
)
def test_invalid_records_rejected(mutation, message):
    rec = record("A", 2004, authors=["r1"])
    mutation(rec)
    with pytest.raises(CorpusFormatError, match=message):
        ingest_corpus([json.dumps(rec)])


def test_unknown_fields_ignored_and_defaults_applied():
    rec = record("A", 2004, authors=["r1"])
    rec["venue"] = "somewhere"
    del rec["abstract"]
    del rec["references"]
    corpus, _ = ingest_corpus([json.dumps(rec)])
    pub = corpus.publications["A"]
    assert pub.abstract == ""
    assert pub.reference_ids == frozenset()


def test_blank_lines_skipped():
    corpus, _ = ingest_corpus(["", json.dumps(record("A", 2000)), "   "])
    assert set(corpus.publications) == {"A"}


def test_researchers_derived_from_authorship():
    corpus = make_corpus(
        [record("A", 2000, authors=["r1", "r2"]), record("B", 2001, authors=["r1"])]
    )
    assert corpus.researcher("r1").publication_ids == {"A", "B"}
    assert corpus.researcher("r2").publication_ids == {"A"}
    with pytest.raises(NotFoundError):
        corpus.researcher("r3")


def test_publication_text_concatenates_title_and_abstract():
    corpus = make_corpus([record("A", 2000, title="Graph Models", abstract="of data")])
    pub = corpus.publications["A"]
    assert pub.text() == "Graph Models of data"
    assert pub.text(("title",)) == "Graph Models"


def test_publications_of_window_kinds():
    corpus = make_corpus(
        [record("A", 2003, authors=["r1"]), record("B", 2007, authors=["r1"])]
    )
    past = publications_of(corpus, "r1", YearWindow(2001, 2006, closed_end=False))
    assert {p.id for p in past} == {"A"}
    future = publications_of(corpus, "r1", YearWindow(2006, 2010, closed_end=True))
    assert {p.id for p in future} == {"B"}
    nothing = publications_of(corpus, "r1", YearWindow(1990, 1995, closed_end=False))
    assert nothing == set()


def test_window_endpoints():
    window = YearWindow(2006, 2010, closed_end=True)
    assert window.contains(2006) and window.contains(2010)
    half_open = YearWindow(2001, 2006, closed_end=False)
    assert half_open.contains(2001) and not half_open.contains(2006)


def test_references_of_unions_over_windowed_pubs():
    corpus = make_corpus(
        [
            record("a", 2000),
            record("c", 2001),
            record("q1", 2007, authors=["r1"], references=["a"]),
            record("q2", 2009, authors=["r1"], references=["a", "c"]),
        ]
    )
    future = YearWindow(2006, 2010, closed_end=True)
    past = YearWindow(2001, 2006, closed_end=False)
    assert references_of(corpus, "r1", future) == {"a", "c"}
    assert references_of(corpus, "r1", past) == set()
    with pytest.raises(NotFoundError):
        references_of(corpus, "nobody", future)


def test_ingest_determinism(synthetic_lines):
    first, report_a = ingest_corpus(synthetic_lines)
    second, report_b = ingest_corpus(synthetic_lines)
    assert first == second
    assert report_a == report_b


def test_inversion_round_trip_on_random_corpora():
    rng = random.Random(7)
    for _ in range(25):
        records = random_corpus_records(rng)
        corpus = make_corpus(records)
        rebuilt = {
            (citing, cited)
            for cited, citing_set in corpus.citation_index.items()
            for citing in citing_set
        }
        direct = {
            (pub.id, ref)
            for pub in corpus.publications.values()
            for ref in pub.reference_ids
        }
        assert rebuilt == direct
        n_reference_edges = sum(
            len(p.reference_ids) for p in corpus.publications.values()
        )
        n_citation_edges = sum(len(v) for v in corpus.citation_index.values())
        assert n_reference_edges == n_citation_edges


def test_report_counts_on_synthetic_corpus(synthetic_lines, synthetic_records):
    _, report = ingest_corpus(synthetic_lines)
    assert report.publications == len(synthetic_records)
    assert report.reference_edges == sum(
        len(rec["references"]) for rec in synthetic_records
    )
    assert report.dangling_edges_dropped == 0
