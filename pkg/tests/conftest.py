from __future__ import annotations

import json

import pytest

from refeval.cli import fixture_path
from refeval.corpus import ingest_corpus
from refeval.groundtruth import SelectionCriteria, TimelineConfig


@pytest.fixture(scope="session")
def synthetic_lines() -> list[str]:
    return fixture_path("synthetic_corpus.jsonl").read_text(
        encoding="utf-8"
    ).splitlines()


@pytest.fixture(scope="session")
def synthetic_records(synthetic_lines) -> list[dict]:
    return [json.loads(line) for line in synthetic_lines]


@pytest.fixture(scope="session")
def synthetic_corpus(synthetic_lines):
    corpus, _report = ingest_corpus(synthetic_lines)
    return corpus


@pytest.fixture(scope="session")
def synthetic_timeline() -> TimelineConfig:
    return TimelineConfig(
        t_start=1999, past_start=2001, present=2006, future_end=2010, t_end=2010
    )


@pytest.fixture(scope="session")
def profile_criteria() -> SelectionCriteria:
    """The default experiment profile, without sampling."""
    return SelectionCriteria(
        min_past_pubs=1,
        max_past_pubs=2,
        min_future_pubs=5,
        sample_size=None,
        rng_seed=42,
        require_nonempty_ground_truth=True,
        junior_only=True,
    )
