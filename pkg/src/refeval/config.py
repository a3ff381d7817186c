"""Experiment configuration: one TOML file drives every pipeline stage.

Defaults mirror the reference experiment profile: present year 2006 with
restricted past [2001, 2006) and restricted future [2006, 2010], junior
researchers with 1 or 2 past publications and at least 5 future ones, and a
uniform random sample of 100 of them.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, replace
from typing import Any, Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .cbf import ALL_METHODS, SURVEY_METHODS, CbfMethod
from .corpus import Corpus
from .errors import ValidationError
from .evalmetrics import METRICS, metric_function
from .groundtruth import SelectionCriteria, TimelineConfig
from .statcorr import DEFAULT_PERM_SEED, MC_SAMPLES

METHOD_PRESETS = {
    "survey8": tuple(m.label for m in SURVEY_METHODS),
    "all16": tuple(m.label for m in ALL_METHODS),
}

CONTENT_FIELDS = ("title", "abstract")


@dataclass(frozen=True)
class ExperimentConfig:
    corpus_path: str | None = None
    output_dir: str = "refeval-out"
    threads: int = 1

    # timeline; t_start / t_end default to the corpus year range
    present: int = 2006
    past_start: int = 2001
    future_end: int = 2010
    t_start: int | None = None
    t_end: int | None = None

    # selection; sample_size 0 disables sampling, max_past_pubs 0 removes the cap
    min_past_pubs: int = 1
    max_past_pubs: int = 2
    min_future_pubs: int = 5
    sample_size: int = 100
    seed: int = 42
    junior_only: bool = True
    require_nonempty_ground_truth: bool = True
    strict: bool = True

    # features
    exclude_past_cited: bool = False
    stopwords_path: str | None = None
    content_fields: tuple[str, ...] = CONTENT_FIELDS

    # evaluation and correlation
    methods: tuple[str, ...] = METHOD_PRESETS["survey8"]
    metrics: tuple[str, ...] = METRICS
    perm_seed: int = DEFAULT_PERM_SEED
    mc_samples: int = MC_SAMPLES
    scope: str = "both"

    def validate(self) -> None:
        self.to_criteria()
        if not self.methods:
            raise ValidationError("method set must not be empty")
        for label in self.methods:
            CbfMethod.parse(label)
        if not self.metrics:
            raise ValidationError("metric set must not be empty")
        for metric in self.metrics:
            metric_function(metric)
        if not self.content_fields:
            raise ValidationError("content_fields must not be empty")
        for name in self.content_fields:
            if name not in CONTENT_FIELDS:
                raise ValidationError(
                    f"unknown content field {name!r}; expected subset of "
                    f"{CONTENT_FIELDS}"
                )
        if self.scope not in ("general", "per-metric", "both"):
            raise ValidationError(
                f"scope must be 'general', 'per-metric' or 'both', got {self.scope!r}"
            )
        if self.threads < 1:
            raise ValidationError("threads must be >= 1")
        if self.mc_samples < 1:
            raise ValidationError("mc_samples must be >= 1")
        if not self.past_start < self.present <= self.future_end:
            raise ValidationError(
                "need past_start < present <= future_end, got "
                f"{self.past_start}, {self.present}, {self.future_end}"
            )

    def to_criteria(self) -> SelectionCriteria:
        criteria = SelectionCriteria(
            min_past_pubs=self.min_past_pubs,
            max_past_pubs=self.max_past_pubs or None,
            min_future_pubs=self.min_future_pubs,
            sample_size=self.sample_size or None,
            rng_seed=self.seed,
            require_nonempty_ground_truth=self.require_nonempty_ground_truth,
            junior_only=self.junior_only,
        )
        criteria.validate()
        return criteria

    def to_timeline(self, corpus: Corpus) -> TimelineConfig:
        """Resolve the timeline, deriving open bounds from the corpus years."""
        year_range = corpus.year_range()
        if year_range is None and (self.t_start is None or self.t_end is None):
            raise ValidationError(
                "corpus is empty; set t_start and t_end explicitly"
            )
        t_start = self.t_start if self.t_start is not None else min(
            year_range[0], self.past_start
        )
        t_end = self.t_end if self.t_end is not None else max(
            year_range[1], self.future_end
        )
        timeline = TimelineConfig(
            t_start=t_start,
            past_start=self.past_start,
            present=self.present,
            future_end=self.future_end,
            t_end=t_end,
        )
        timeline.validate()
        return timeline

    def parsed_methods(self) -> tuple[CbfMethod, ...]:
        return tuple(CbfMethod.parse(label) for label in self.methods)


def _section(data: Mapping[str, Any], name: str) -> Mapping[str, Any]:
    value = data.get(name, {})
    if not isinstance(value, Mapping):
        raise ValidationError(f"config section [{name}] must be a table")
    return value


def _methods_value(raw: Any) -> tuple[str, ...]:
    if isinstance(raw, str):
        if raw not in METHOD_PRESETS:
            raise ValidationError(
                f"unknown method preset {raw!r}; expected one of "
                f"{sorted(METHOD_PRESETS)} or an explicit list"
            )
        return METHOD_PRESETS[raw]
    if isinstance(raw, list):
        return tuple(str(v) for v in raw)
    raise ValidationError("methods must be a preset name or a list of labels")


def load_config(path: str) -> ExperimentConfig:
    """Parse a TOML experiment file; missing keys keep their defaults."""
    with open(path, "rb") as handle:
        try:
            data = tomllib.load(handle)
        except tomllib.TOMLDecodeError as exc:
            raise ValidationError(f"{path}: invalid TOML ({exc})") from None

    timeline = _section(data, "timeline")
    selection = _section(data, "selection")
    features = _section(data, "features")
    evaluation = _section(data, "evaluation")
    correlation = _section(data, "correlation")

    defaults = ExperimentConfig()
    config = ExperimentConfig(
        corpus_path=data.get("corpus", defaults.corpus_path),
        output_dir=data.get("output_dir", defaults.output_dir),
        threads=int(data.get("threads", defaults.threads)),
        present=int(timeline.get("present", defaults.present)),
        past_start=int(timeline.get("past_start", defaults.past_start)),
        future_end=int(timeline.get("future_end", defaults.future_end)),
        t_start=(
            int(timeline["t_start"]) if "t_start" in timeline else defaults.t_start
        ),
        t_end=int(timeline["t_end"]) if "t_end" in timeline else defaults.t_end,
        min_past_pubs=int(selection.get("min_past_pubs", defaults.min_past_pubs)),
        max_past_pubs=int(selection.get("max_past_pubs", defaults.max_past_pubs)),
        min_future_pubs=int(
            selection.get("min_future_pubs", defaults.min_future_pubs)
        ),
        sample_size=int(selection.get("sample_size", defaults.sample_size)),
        seed=int(selection.get("seed", defaults.seed)),
        junior_only=bool(selection.get("junior_only", defaults.junior_only)),
        require_nonempty_ground_truth=bool(
            selection.get(
                "require_nonempty_ground_truth",
                defaults.require_nonempty_ground_truth,
            )
        ),
        strict=bool(selection.get("strict", defaults.strict)),
        exclude_past_cited=bool(
            features.get("exclude_past_cited", defaults.exclude_past_cited)
        ),
        stopwords_path=features.get("stopwords", defaults.stopwords_path) or None,
        content_fields=tuple(
            features.get("content_fields", list(defaults.content_fields))
        ),
        methods=_methods_value(evaluation.get("methods", list(defaults.methods))),
        metrics=tuple(evaluation.get("metrics", list(defaults.metrics))),
        perm_seed=int(correlation.get("perm_seed", defaults.perm_seed)),
        mc_samples=int(correlation.get("mc_samples", defaults.mc_samples)),
        scope=str(correlation.get("scope", defaults.scope)),
    )
    config.validate()
    return config


def with_overrides(config: ExperimentConfig, **overrides: Any) -> ExperimentConfig:
    """Apply non-None keyword overrides and re-validate."""
    changes = {k: v for k, v in overrides.items() if v is not None}
    if not changes:
        return config
    updated = replace(config, **changes)
    updated.validate()
    return updated
