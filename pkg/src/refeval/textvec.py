"""Tokenization and tf-idf sparse vectors over a fixed experiment vocabulary.

Weights use raw term counts and the smoothed inverse document frequency
ln((1 + N) / (1 + df)) + 1, which stays positive for every term, including
terms present in all documents. Vectors are plain {term_id: weight} dicts
with no stored zeros; cosine normalization downstream absorbs global scale.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

SparseVector = dict[int, float]

# Unicode letters and digits; underscore is a separator, not a token character.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

MIN_TOKEN_LENGTH = 2


def tokenize(text: str, stopwords: frozenset[str] | None = None) -> list[str]:
    """Lowercase, split on non-alphanumerics, drop tokens shorter than 2 chars."""
    tokens = [t for t in _TOKEN_RE.findall(text.lower()) if len(t) >= MIN_TOKEN_LENGTH]
    if stopwords:
        tokens = [t for t in tokens if t not in stopwords]
    return tokens


def load_stopwords(path: str) -> frozenset[str]:
    """Read a stopword file, one token per line, UTF-8."""
    with open(path, encoding="utf-8") as handle:
        return frozenset(line.strip() for line in handle if line.strip())


@dataclass(frozen=True)
class Vocabulary:
    """Term-id assignment plus the document frequencies behind idf."""

    term_ids: dict[str, int]
    document_count: int
    document_frequency: dict[int, int]

    def __len__(self) -> int:
        return len(self.term_ids)

    def idf(self, term_id: int) -> float:
        df = self.document_frequency[term_id]
        return math.log((1 + self.document_count) / (1 + df)) + 1.0


def build_vocabulary(documents: Sequence[Sequence[str]]) -> Vocabulary:
    """Assign dense term ids (lexicographic) and count document frequencies."""
    if not documents:
        raise ValueError("cannot build a vocabulary from an empty document collection")
    df_by_term: dict[str, int] = {}
    for doc in documents:
        for term in set(doc):
            df_by_term[term] = df_by_term.get(term, 0) + 1
    term_ids = {term: idx for idx, term in enumerate(sorted(df_by_term))}
    document_frequency = {term_ids[t]: df for t, df in df_by_term.items()}
    return Vocabulary(
        term_ids=term_ids,
        document_count=len(documents),
        document_frequency=document_frequency,
    )


def tfidf_vector(document: Iterable[str], vocab: Vocabulary) -> SparseVector:
    """Raw-count tf times smoothed idf; out-of-vocabulary terms are ignored."""
    counts: dict[int, int] = {}
    for term in document:
        term_id = vocab.term_ids.get(term)
        if term_id is not None:
            counts[term_id] = counts.get(term_id, 0) + 1
    return {tid: count * vocab.idf(tid) for tid, count in counts.items()}


def add_into(acc: SparseVector, vec: SparseVector) -> None:
    """Accumulate ``vec`` into ``acc`` in place."""
    for tid, weight in vec.items():
        acc[tid] = acc.get(tid, 0.0) + weight


def vector_sum(vectors: Iterable[SparseVector]) -> SparseVector:
    total: SparseVector = {}
    for vec in vectors:
        add_into(total, vec)
    return total


def dot(a: SparseVector, b: SparseVector) -> float:
    if len(b) < len(a):
        a, b = b, a
    return sum(weight * b[tid] for tid, weight in a.items() if tid in b)


def norm(vec: SparseVector) -> float:
    return math.sqrt(sum(w * w for w in vec.values()))
