from __future__ import annotations

import math
import random

import numpy as np
import pytest
from sklearn.feature_extraction.text import TfidfVectorizer

from refeval.textvec import (
    build_vocabulary,
    dot,
    norm,
    tfidf_vector,
    tokenize,
    vector_sum,
)


def test_tokenize_basic():
    assert tokenize("Topic Models for Text") == ["topic", "models", "for", "text"]


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_splits_and_drops_short_tokens():
    assert tokenize("TF-IDF 2010") == ["tf", "idf", "2010"]
    assert tokenize("a b c xy") == ["xy"]


def test_tokenize_unicode_and_underscore():
    assert tokenize("Čeští výzkumníci") == ["čeští", "výzkumníci"]
    assert tokenize("snake_case") == ["snake", "case"]


def test_tokenize_stopwords():
    stop = frozenset({"for"})
    assert tokenize("Topic Models for Text", stop) == ["topic", "models", "text"]


def test_vocabulary_counts():
    vocab = build_vocabulary([["a", "b"], ["b", "c"]])
    assert vocab.document_count == 2
    tid = vocab.term_ids
    assert vocab.document_frequency[tid["a"]] == 1
    assert vocab.document_frequency[tid["b"]] == 2
    assert vocab.document_frequency[tid["c"]] == 1


def test_vocabulary_counts_empty_documents_in_n():
    vocab = build_vocabulary([[], ["a"]])
    assert vocab.document_count == 2
    assert vocab.document_frequency[vocab.term_ids["a"]] == 1


def test_vocabulary_df_counts_document_once_per_term():
    vocab = build_vocabulary([["a", "a", "a"], ["b"]])
    assert vocab.document_frequency[vocab.term_ids["a"]] == 1


def test_vocabulary_empty_collection_rejected():
    with pytest.raises(ValueError):
        build_vocabulary([])


def test_vocabulary_term_ids_lexicographic():
    vocab = build_vocabulary([["zeta", "alpha"], ["mid"]])
    assert vocab.term_ids == {"alpha": 0, "mid": 1, "zeta": 2}


def test_tfidf_empty_document_is_zero_vector():
    vocab = build_vocabulary([["a"], ["b"]])
    assert tfidf_vector([], vocab) == {}


def test_tfidf_term_in_all_docs_has_idf_one():
    vocab = build_vocabulary([["a", "b"], ["a"]])
    vec = tfidf_vector(["a", "a", "a"], vocab)
    assert vec[vocab.term_ids["a"]] == pytest.approx(3.0)


def test_tfidf_worked_example():
    # doc [a a b] with N=2, df(a)=1, df(b)=2
    vocab = build_vocabulary([["a", "b"], ["b"]])
    vec = tfidf_vector(["a", "a", "b"], vocab)
    assert vec[vocab.term_ids["a"]] == pytest.approx(2 * (math.log(3 / 2) + 1), abs=1e-4)
    assert vec[vocab.term_ids["a"]] == pytest.approx(2.8109, abs=1e-4)
    assert vec[vocab.term_ids["b"]] == pytest.approx(1.0)


def test_tfidf_ignores_out_of_vocabulary_terms():
    vocab = build_vocabulary([["a"]])
    assert tfidf_vector(["zzz"], vocab) == {}


def test_idf_positive_and_non_increasing_in_df():
    docs = [["a"], ["a", "b"], ["a", "b", "c"], ["d"]]
    vocab = build_vocabulary(docs)
    idfs = {t: vocab.idf(tid) for t, tid in vocab.term_ids.items()}
    assert all(value > 0 for value in idfs.values())
    assert idfs["a"] <= idfs["b"] <= idfs["c"]


def test_tfidf_homogeneous_in_term_frequency():
    vocab = build_vocabulary([["a", "b", "c"], ["b"]])
    doc = ["a", "b", "b", "c"]
    single = tfidf_vector(doc, vocab)
    doubled = tfidf_vector(doc + doc, vocab)
    assert set(single) == set(doubled)
    for tid, weight in single.items():
        assert doubled[tid] == pytest.approx(2 * weight)


def test_vocabulary_determinism():
    docs = [["b", "a"], ["c", "a"]]
    assert build_vocabulary(docs) == build_vocabulary(docs)


def test_tfidf_matches_sklearn_on_random_texts():
    rng = random.Random(11)
    words = ["graph", "network", "kernel", "parsing", "data", "model", "deep"]
    texts = [
        " ".join(rng.choice(words) for _ in range(rng.randint(1, 12)))
        for _ in range(20)
    ]
    reference = TfidfVectorizer(norm=None, smooth_idf=True, sublinear_tf=False)
    matrix = reference.fit_transform(texts).toarray()
    sk_terms = reference.get_feature_names_out()

    docs = [tokenize(text) for text in texts]
    vocab = build_vocabulary(docs)
    assert sorted(vocab.term_ids) == sorted(sk_terms)
    for row, doc in zip(matrix, docs):
        ours = tfidf_vector(doc, vocab)
        theirs = {
            vocab.term_ids[t]: row[col] for col, t in enumerate(sk_terms) if row[col]
        }
        assert set(ours) == set(theirs)
        for tid, weight in ours.items():
            assert weight == pytest.approx(theirs[tid], rel=1e-9)


def test_sparse_helpers():
    a = {0: 1.0, 1: 2.0}
    b = {1: 3.0, 2: 4.0}
    assert vector_sum([a, b]) == {0: 1.0, 1: 5.0, 2: 4.0}
    assert dot(a, b) == pytest.approx(6.0)
    assert norm({0: 3.0, 1: 4.0}) == pytest.approx(5.0)
    assert dot(a, {}) == 0.0
