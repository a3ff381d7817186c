"""Content-based filtering: feature vectors, cosine similarity, and ranking.

Publication features combine a work's own tf-idf vector with the vectors of
its references and/or its citing works; researcher features sum the feature
vectors of the researcher's restricted-past publications. Citing works are
only used when published before the present year, so no evaluation-period
information leaks into the features.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import Corpus, publications_of, references_of
from .errors import NotFoundError, ValidationError
from .groundtruth import ExperimentDataset, TimelineConfig
from .textvec import (
    SparseVector,
    Vocabulary,
    build_vocabulary,
    dot,
    norm,
    tfidf_vector,
    tokenize,
    vector_sum,
)


class FeatureScheme(enum.Enum):
    """How a publication's vector is assembled from the citation graph."""

    F1 = "own-content"
    F2 = "content-plus-references"
    F3 = "content-plus-citations"
    F4 = "content-plus-references-and-citations"

    @property
    def uses_references(self) -> bool:
        return self in (FeatureScheme.F2, FeatureScheme.F4)

    @property
    def uses_citations(self) -> bool:
        return self in (FeatureScheme.F3, FeatureScheme.F4)


@dataclass(frozen=True, order=True)
class CbfMethod:
    publication_scheme: FeatureScheme
    researcher_scheme: FeatureScheme

    @property
    def label(self) -> str:
        return f"{self.publication_scheme.name}x{self.researcher_scheme.name}"

    @classmethod
    def parse(cls, label: str) -> "CbfMethod":
        try:
            pub, res = label.split("x")
            return cls(FeatureScheme[pub], FeatureScheme[res])
        except (ValueError, KeyError):
            raise ValidationError(
                f"invalid method label {label!r}; expected e.g. 'F1xF2'"
            ) from None


ALL_METHODS = tuple(
    CbfMethod(pub, res) for pub in FeatureScheme for res in FeatureScheme
)
# The subset comparable with the published survey-based results: researcher
# vectors built from schemes F1 and F2 only.
SURVEY_METHODS = tuple(
    CbfMethod(pub, res)
    for pub in FeatureScheme
    for res in (FeatureScheme.F1, FeatureScheme.F2)
)


@dataclass(frozen=True)
class RankedList:
    researcher_id: str
    entries: tuple[tuple[str, float], ...]

    def ids(self) -> list[str]:
        return [pid for pid, _ in self.entries]


def cosine(a: SparseVector, b: SparseVector) -> float:
    """Cosine similarity; 0.0 when either vector has zero norm."""
    na = norm(a)
    nb = norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return dot(a, b) / (na * nb)


class FeatureSpace:
    """Caches content and feature vectors for one experiment timeline.

    All vectors live in the shared vocabulary; reference/citation sums only
    include neighbours that resolve in the corpus and were published before
    the timeline's present year.
    """

    def __init__(
        self,
        corpus: Corpus,
        vocab: Vocabulary,
        timeline: TimelineConfig,
        content_fields: tuple[str, ...] = ("title", "abstract"),
        stopwords: frozenset[str] | None = None,
    ):
        self.corpus = corpus
        self.vocab = vocab
        self.timeline = timeline
        self.content_fields = content_fields
        self.stopwords = stopwords
        self._content_cache: dict[str, SparseVector] = {}
        self._feature_cache: dict[tuple[str, FeatureScheme], SparseVector] = {}

    def content_vector(self, pub_id: str) -> SparseVector:
        cached = self._content_cache.get(pub_id)
        if cached is None:
            pub = self.corpus.publication(pub_id)
            tokens = tokenize(pub.text(self.content_fields), self.stopwords)
            cached = tfidf_vector(tokens, self.vocab)
            self._content_cache[pub_id] = cached
        return cached

    def _neighbour_vectors(self, ids: Iterable[str]) -> list[SparseVector]:
        cutoff = self.timeline.present
        return [
            self.content_vector(pid)
            for pid in sorted(ids)
            if pid in self.corpus.publications
            and self.corpus.publications[pid].year < cutoff
        ]

    def publication_feature(self, pub_id: str, scheme: FeatureScheme) -> SparseVector:
        key = (pub_id, scheme)
        cached = self._feature_cache.get(key)
        if cached is None:
            pub = self.corpus.publication(pub_id)
            parts = [self.content_vector(pub_id)]
            if scheme.uses_references:
                parts.extend(self._neighbour_vectors(pub.reference_ids))
            if scheme.uses_citations:
                parts.extend(self._neighbour_vectors(self.corpus.citers_of(pub_id)))
            cached = vector_sum(parts)
            self._feature_cache[key] = cached
        return cached

    def researcher_feature(self, researcher_id: str, scheme: FeatureScheme) -> SparseVector:
        past = publications_of(
            self.corpus, researcher_id, self.timeline.restricted_past
        )
        if not past:
            raise ValidationError(
                f"researcher {researcher_id!r} has no publications in the "
                "restricted past; cannot build a profile vector"
            )
        return vector_sum(
            self.publication_feature(pub.id, scheme)
            for pub in sorted(past, key=lambda p: p.id)
        )


def publication_feature(
    corpus: Corpus,
    vocab: Vocabulary,
    publication_id: str,
    scheme: FeatureScheme,
    timeline: TimelineConfig,
) -> SparseVector:
    """One-off feature vector; use FeatureSpace for batched work."""
    return FeatureSpace(corpus, vocab, timeline).publication_feature(
        publication_id, scheme
    )


def researcher_feature(
    corpus: Corpus,
    vocab: Vocabulary,
    researcher_id: str,
    timeline: TimelineConfig,
    scheme: FeatureScheme,
) -> SparseVector:
    """One-off researcher profile vector; use FeatureSpace for batched work."""
    return FeatureSpace(corpus, vocab, timeline).researcher_feature(
        researcher_id, scheme
    )


def rank_candidates(
    corpus: Corpus,
    vocab: Vocabulary,
    dataset: ExperimentDataset,
    researcher_id: str,
    method: CbfMethod,
    exclude_past_cited: bool = False,
    space: FeatureSpace | None = None,
) -> RankedList:
    """Rank the candidate pool by cosine similarity to the researcher profile.

    Sorting is by descending score with ascending publication id breaking
    ties. With ``exclude_past_cited``, candidates the researcher already cited
    in the restricted past are removed before ranking.
    """
    if researcher_id not in dataset.ground_truth:
        raise NotFoundError(
            f"researcher {researcher_id!r} is not part of the experiment dataset"
        )
    space = space or FeatureSpace(corpus, vocab, dataset.timeline)
    profile = space.researcher_feature(researcher_id, method.researcher_scheme)
    candidates = set(dataset.candidate_pool)
    if exclude_past_cited:
        candidates -= references_of(
            corpus, researcher_id, dataset.timeline.restricted_past
        )
    scored = [
        (pid, cosine(space.publication_feature(pid, method.publication_scheme), profile))
        for pid in sorted(candidates)
    ]
    scored.sort(key=lambda item: (-item[1], item[0]))
    return RankedList(researcher_id=researcher_id, entries=tuple(scored))


def experiment_document_ids(corpus: Corpus, dataset: ExperimentDataset) -> list[str]:
    """Every publication whose vector can enter a feature computation.

    Covers the candidate pool and the researchers' restricted-past works,
    plus the pre-present references and citers of both. Using this one
    document set for idf keeps all cosine comparisons in a single space.
    """
    cutoff = dataset.timeline.present
    ids: set[str] = set()

    def add_with_neighbours(pid: str) -> None:
        ids.add(pid)
        pub = corpus.publications[pid]
        for ref in pub.reference_ids:
            if ref in corpus.publications and corpus.publications[ref].year < cutoff:
                ids.add(ref)
        for citer in corpus.citers_of(pid):
            if corpus.publications[citer].year < cutoff:
                ids.add(citer)

    for pid in dataset.candidate_pool:
        add_with_neighbours(pid)
    for rid in dataset.researchers:
        for pub in publications_of(corpus, rid, dataset.timeline.restricted_past):
            add_with_neighbours(pub.id)
    return sorted(ids)


def build_experiment_vocabulary(
    corpus: Corpus,
    dataset: ExperimentDataset,
    content_fields: tuple[str, ...] = ("title", "abstract"),
    stopwords: frozenset[str] | None = None,
) -> Vocabulary:
    """Vocabulary over every document the experiment can vectorize."""
    documents = [
        tokenize(corpus.publications[pid].text(content_fields), stopwords)
        for pid in experiment_document_ids(corpus, dataset)
    ]
    return build_vocabulary(documents)


def write_rankings_csv(path: str, ranked_lists: Sequence[RankedList]) -> None:
    """Export ranked lists as researcher_id, rank, publication_id, score rows."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["researcher_id", "rank", "publication_id", "score"])
        for ranked in ranked_lists:
            for rank, (pid, score) in enumerate(ranked.entries, start=1):
                writer.writerow([ranked.researcher_id, rank, pid, f"{score:.6f}"])
