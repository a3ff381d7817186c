"""Temporal splitting and citation-derived ground truth for recommender evaluation.

A timeline fixes a "present" year T0. Researchers who published enough in the
restricted past [Tp, T0) and keep citing in the restricted future [T0, Tf] are
selected as evaluation targets. For each of them, the relevant set is the
publications they cite for the first time in the restricted future, limited to
works published before T0. The candidate pool is the union of those sets.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Iterable, Mapping

from .corpus import Corpus, YearWindow, publications_of, references_of
from .errors import SelectionError, ValidationError

# Sampling is a seeded Fisher-Yates shuffle (python random.Random, MT19937)
# of the sorted eligible ids, taking the first sample_size entries. The
# algorithm name is recorded in every dataset manifest so the sample can be
# reproduced outside this package.
RNG_ALGORITHM = "mt19937-fisher-yates-shuffle-prefix"

MANIFEST_FORMAT = "refeval-dataset-manifest/1"


@dataclass(frozen=True)
class TimelineConfig:
    """Year boundaries: t_start <= past_start < present <= future_end <= t_end."""

    t_start: int
    past_start: int
    present: int
    future_end: int
    t_end: int

    def validate(self) -> None:
        ok = (
            self.t_start <= self.past_start < self.present <= self.future_end
            and self.future_end <= self.t_end
        )
        if not ok:
            raise ValidationError(
                "invalid timeline: need t_start <= past_start < present <= "
                f"future_end <= t_end, got {self.as_dict()}"
            )

    @property
    def restricted_past(self) -> YearWindow:
        return YearWindow(self.past_start, self.present, closed_end=False)

    @property
    def restricted_future(self) -> YearWindow:
        return YearWindow(self.present, self.future_end, closed_end=True)

    def as_dict(self) -> dict:
        return {
            "t_start": self.t_start,
            "past_start": self.past_start,
            "present": self.present,
            "future_end": self.future_end,
            "t_end": self.t_end,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "TimelineConfig":
        timeline = cls(
            t_start=int(data["t_start"]),
            past_start=int(data["past_start"]),
            present=int(data["present"]),
            future_end=int(data["future_end"]),
            t_end=int(data["t_end"]),
        )
        timeline.validate()
        return timeline


@dataclass(frozen=True)
class SelectionCriteria:
    """Activity thresholds and sampling parameters for target researchers."""

    min_past_pubs: int = 1
    max_past_pubs: int | None = None
    min_future_pubs: int = 1
    sample_size: int | None = None
    rng_seed: int = 42
    require_nonempty_ground_truth: bool = True
    junior_only: bool = False

    def validate(self) -> None:
        if self.min_past_pubs < 1:
            raise ValidationError("min_past_pubs must be >= 1")
        if self.max_past_pubs is not None and self.max_past_pubs < self.min_past_pubs:
            raise ValidationError("max_past_pubs must be >= min_past_pubs")
        if self.min_future_pubs < 1:
            raise ValidationError("min_future_pubs must be >= 1")
        if self.sample_size is not None and self.sample_size < 1:
            raise ValidationError("sample_size must be >= 1 when set")

    def as_dict(self) -> dict:
        return {
            "min_past_pubs": self.min_past_pubs,
            "max_past_pubs": self.max_past_pubs,
            "min_future_pubs": self.min_future_pubs,
            "sample_size": self.sample_size,
            "rng_seed": self.rng_seed,
            "require_nonempty_ground_truth": self.require_nonempty_ground_truth,
            "junior_only": self.junior_only,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "SelectionCriteria":
        criteria = cls(
            min_past_pubs=int(data["min_past_pubs"]),
            max_past_pubs=(
                None if data.get("max_past_pubs") is None else int(data["max_past_pubs"])
            ),
            min_future_pubs=int(data["min_future_pubs"]),
            sample_size=(
                None if data.get("sample_size") is None else int(data["sample_size"])
            ),
            rng_seed=int(data["rng_seed"]),
            require_nonempty_ground_truth=bool(data["require_nonempty_ground_truth"]),
            junior_only=bool(data["junior_only"]),
        )
        criteria.validate()
        return criteria


@dataclass(frozen=True)
class GroundTruthSet:
    researcher_id: str
    relevant_ids: frozenset[str]


@dataclass(frozen=True)
class ExperimentDataset:
    timeline: TimelineConfig
    researchers: tuple[str, ...]
    ground_truth: dict[str, GroundTruthSet]
    candidate_pool: frozenset[str]


def extract_future_references(
    corpus: Corpus, timeline: TimelineConfig, researcher_id: str
) -> GroundTruthSet:
    """Publications first cited in the restricted future and published before T0.

    A referenced id that does not resolve in the corpus has no known year, so
    it cannot be confirmed as published before the present and is excluded.
    """
    past_refs = references_of(corpus, researcher_id, timeline.restricted_past)
    future_refs = references_of(corpus, researcher_id, timeline.restricted_future)
    relevant = {
        pid
        for pid in future_refs
        if pid not in past_refs
        and pid in corpus.publications
        and corpus.publications[pid].year < timeline.present
    }
    return GroundTruthSet(researcher_id=researcher_id, relevant_ids=frozenset(relevant))


def _is_eligible(
    corpus: Corpus,
    timeline: TimelineConfig,
    criteria: SelectionCriteria,
    researcher_id: str,
) -> bool:
    past_count = len(publications_of(corpus, researcher_id, timeline.restricted_past))
    if past_count < criteria.min_past_pubs:
        return False
    if criteria.max_past_pubs is not None and past_count > criteria.max_past_pubs:
        return False
    future_count = len(
        publications_of(corpus, researcher_id, timeline.restricted_future)
    )
    if future_count < criteria.min_future_pubs:
        return False
    if criteria.junior_only:
        researcher = corpus.researcher(researcher_id)
        if any(
            corpus.publications[pid].year < timeline.past_start
            for pid in researcher.publication_ids
        ):
            return False
    if criteria.require_nonempty_ground_truth:
        if not extract_future_references(corpus, timeline, researcher_id).relevant_ids:
            return False
    return True


def seeded_sample(ids: list[str], sample_size: int, seed: int) -> list[str]:
    """Uniform sample without replacement, order fixed by the seed."""
    shuffled = list(ids)
    random.Random(seed).shuffle(shuffled)
    return shuffled[:sample_size]


def select_target_researchers(
    corpus: Corpus, timeline: TimelineConfig, criteria: SelectionCriteria
) -> list[str]:
    """Researchers meeting the activity thresholds, optionally sampled.

    Without sampling the result is sorted by id; with sampling the order is
    the seeded shuffle order, so equal seeds give identical sequences.
    """
    timeline.validate()
    criteria.validate()
    eligible = [
        rid
        for rid in sorted(corpus.researchers)
        if _is_eligible(corpus, timeline, criteria, rid)
    ]
    if criteria.sample_size is None:
        return eligible
    if len(eligible) < criteria.sample_size:
        raise SelectionError(
            f"requested a sample of {criteria.sample_size} researchers but only "
            f"{len(eligible)} are eligible"
        )
    return seeded_sample(eligible, criteria.sample_size, criteria.rng_seed)


def build_candidate_pool(ground_truth_sets: Iterable[GroundTruthSet]) -> frozenset[str]:
    """Union of all relevant sets; the shared recommendation universe."""
    pool: set[str] = set()
    for gts in ground_truth_sets:
        pool |= gts.relevant_ids
    return frozenset(pool)


def build_experiment_dataset(
    corpus: Corpus,
    timeline: TimelineConfig,
    criteria: SelectionCriteria,
    strict: bool = True,
) -> ExperimentDataset:
    """Select researchers, extract their relevant sets, and merge the pool.

    With ``strict`` set (default), an empty selection is an error; otherwise
    an empty dataset is returned.
    """
    selected = select_target_researchers(corpus, timeline, criteria)
    if not selected and strict:
        raise SelectionError("no researcher satisfies the selection criteria")
    ground_truth = {
        rid: extract_future_references(corpus, timeline, rid) for rid in selected
    }
    pool = build_candidate_pool(ground_truth.values())
    return ExperimentDataset(
        timeline=timeline,
        researchers=tuple(selected),
        ground_truth=ground_truth,
        candidate_pool=pool,
    )


def manifest_dict(dataset: ExperimentDataset, criteria: SelectionCriteria) -> dict:
    return {
        "format": MANIFEST_FORMAT,
        "rng": {"algorithm": RNG_ALGORITHM, "seed": criteria.rng_seed},
        "timeline": dataset.timeline.as_dict(),
        "criteria": criteria.as_dict(),
        "researchers": list(dataset.researchers),
        "ground_truth": {
            rid: sorted(gts.relevant_ids)
            for rid, gts in dataset.ground_truth.items()
        },
        "candidate_pool": sorted(dataset.candidate_pool),
    }


def write_manifest(
    dataset: ExperimentDataset, criteria: SelectionCriteria, path: str
) -> None:
    """Serialize the dataset deterministically (sorted keys, sorted id lists)."""
    payload = json.dumps(manifest_dict(dataset, criteria), indent=2, sort_keys=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(payload + "\n")


def read_manifest(path: str) -> tuple[ExperimentDataset, SelectionCriteria]:
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    if not isinstance(data, dict) or data.get("format") != MANIFEST_FORMAT:
        found = data.get("format") if isinstance(data, dict) else type(data).__name__
        raise ValidationError(f"unsupported manifest format: {found!r}")
    try:
        timeline = TimelineConfig.from_dict(data["timeline"])
        criteria = SelectionCriteria.from_dict(data["criteria"])
        ground_truth = {
            rid: GroundTruthSet(researcher_id=rid, relevant_ids=frozenset(ids))
            for rid, ids in data["ground_truth"].items()
        }
        dataset = ExperimentDataset(
            timeline=timeline,
            researchers=tuple(data["researchers"]),
            ground_truth=ground_truth,
            candidate_pool=frozenset(data["candidate_pool"]),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"manifest {path} is missing fields: {exc}") from None
    return dataset, criteria
