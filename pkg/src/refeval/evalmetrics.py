"""Ranking metrics (NDCG@k, reciprocal rank) and per-method score tables.

Relevance is binary: a ranked publication either is or is not in the
researcher's ground-truth set. NDCG uses gain 1/log2(rank+1) and normalizes
by the ideal ranking truncated at min(k, |ground truth|). Reciprocal rank is
computed over the full ranked pool, falling back to 0 when no relevant item
is present (possible only when ranking filters removed items).
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

from .cbf import CbfMethod, FeatureSpace, rank_candidates
from .corpus import Corpus
from .errors import UndefinedMetricError, ValidationError
from .groundtruth import ExperimentDataset
from .textvec import Vocabulary

METRICS = ("NDCG@5", "NDCG@10", "MRR")


def ndcg_at_k(ranking: Sequence[str], relevant: set[str] | frozenset[str], k: int) -> float:
    """Binary-relevance NDCG at cutoff k."""
    if not relevant:
        raise UndefinedMetricError("NDCG is undefined for an empty relevant set")
    if k < 1:
        raise ValidationError(f"NDCG cutoff must be >= 1, got {k}")
    dcg = sum(
        1.0 / math.log2(position + 1)
        for position, pub_id in enumerate(ranking[:k], start=1)
        if pub_id in relevant
    )
    idcg = sum(
        1.0 / math.log2(position + 1)
        for position in range(1, min(k, len(relevant)) + 1)
    )
    return dcg / idcg


def reciprocal_rank(ranking: Sequence[str], relevant: set[str] | frozenset[str]) -> float:
    """1/rank of the first relevant item; 0.0 if none is present."""
    if not relevant:
        raise UndefinedMetricError("RR is undefined for an empty relevant set")
    for position, pub_id in enumerate(ranking, start=1):
        if pub_id in relevant:
            return 1.0 / position
    return 0.0


def metric_function(name: str) -> Callable[[Sequence[str], frozenset[str]], float]:
    """Resolve a metric name ('NDCG@k' or 'MRR') to a scoring callable."""
    if name == "MRR":
        return reciprocal_rank
    if name.startswith("NDCG@"):
        try:
            k = int(name.split("@", 1)[1])
        except ValueError:
            raise ValidationError(f"invalid metric name {name!r}") from None
        return lambda ranking, relevant: ndcg_at_k(ranking, relevant, k)
    raise ValidationError(f"unknown metric {name!r}; expected 'NDCG@k' or 'MRR'")


@dataclass(frozen=True)
class EvaluationTable:
    """Mean per-researcher scores keyed by (method label, metric name)."""

    label: str
    n_researchers: int
    scores: dict[tuple[str, str], float]

    def keys(self) -> set[tuple[str, str]]:
        return set(self.scores)

    def to_csv(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["method", "metric", "mean_score", "n_researchers"])
            for method, metric in sorted(
                self.scores, key=lambda key: (key[0], _metric_order(key[1]))
            ):
                writer.writerow(
                    [
                        method,
                        metric,
                        f"{self.scores[(method, metric)]:.6f}",
                        self.n_researchers,
                    ]
                )

    @classmethod
    def from_csv(cls, path: str, label: str | None = None) -> "EvaluationTable":
        scores: dict[tuple[str, str], float] = {}
        n_researchers: int | None = None
        with open(path, encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            required = {"method", "metric", "mean_score", "n_researchers"}
            if reader.fieldnames is None or not required.issubset(reader.fieldnames):
                raise ValidationError(
                    f"{path}: expected columns {sorted(required)}, "
                    f"got {reader.fieldnames}"
                )
            for row in reader:
                key = (row["method"], row["metric"])
                if key in scores:
                    raise ValidationError(f"{path}: duplicate row for {key}")
                try:
                    score = float(row["mean_score"])
                    n = int(row["n_researchers"])
                except (TypeError, ValueError):
                    raise ValidationError(
                        f"{path}: non-numeric row for {key}"
                    ) from None
                if not 0.0 <= score <= 1.0:
                    raise ValidationError(
                        f"{path}: score {score} for {key} outside [0, 1]"
                    )
                scores[key] = score
                if n_researchers is None:
                    n_researchers = n
                elif n_researchers != n:
                    raise ValidationError(f"{path}: inconsistent n_researchers")
        if not scores:
            raise ValidationError(f"{path}: no evaluation rows")
        assert n_researchers is not None
        return cls(label=label or path, n_researchers=n_researchers, scores=scores)


def _metric_order(metric: str) -> tuple[int, str]:
    try:
        return (METRICS.index(metric), metric)
    except ValueError:
        return (len(METRICS), metric)


def _score_researcher(
    corpus: Corpus,
    vocab: Vocabulary,
    dataset: ExperimentDataset,
    researcher_id: str,
    methods: Sequence[CbfMethod],
    metrics: Sequence[str],
    exclude_past_cited: bool,
    space: FeatureSpace,
) -> dict[tuple[str, str], float]:
    relevant = dataset.ground_truth[researcher_id].relevant_ids
    out: dict[tuple[str, str], float] = {}
    for method in methods:
        ranking = rank_candidates(
            corpus,
            vocab,
            dataset,
            researcher_id,
            method,
            exclude_past_cited=exclude_past_cited,
            space=space,
        ).ids()
        for metric in metrics:
            out[(method.label, metric)] = metric_function(metric)(ranking, relevant)
    return out


def evaluate_methods(
    corpus: Corpus,
    vocab: Vocabulary,
    dataset: ExperimentDataset,
    methods: Sequence[CbfMethod],
    metrics: Sequence[str] = METRICS,
    exclude_past_cited: bool = False,
    threads: int = 1,
    label: str = "dataset",
    content_fields: tuple[str, ...] = ("title", "abstract"),
    stopwords: frozenset[str] | None = None,
) -> EvaluationTable:
    """Mean per-researcher score for every (method, metric) combination.

    Researchers are scored independently and reduced in sorted-id order, so
    the result does not depend on the worker schedule.
    """
    if not methods:
        raise ValidationError("method set must not be empty")
    if not metrics:
        raise ValidationError("metric set must not be empty")
    for metric in metrics:
        metric_function(metric)
    space = FeatureSpace(
        corpus, vocab, dataset.timeline, content_fields=content_fields,
        stopwords=stopwords,
    )
    researcher_ids = sorted(dataset.researchers)
    if not researcher_ids:
        raise ValidationError("dataset has no researchers to evaluate")

    def job(rid: str) -> dict[tuple[str, str], float]:
        return _score_researcher(
            corpus, vocab, dataset, rid, methods, metrics, exclude_past_cited, space
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_researcher = dict(zip(researcher_ids, pool.map(job, researcher_ids)))
    else:
        per_researcher = {rid: job(rid) for rid in researcher_ids}

    scores: dict[tuple[str, str], float] = {}
    for method in methods:
        for metric in metrics:
            key = (method.label, metric)
            total = sum(per_researcher[rid][key] for rid in researcher_ids)
            scores[key] = total / len(researcher_ids)
    return EvaluationTable(
        label=label, n_researchers=len(researcher_ids), scores=scores
    )
