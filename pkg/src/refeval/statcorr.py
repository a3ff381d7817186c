"""Correlation analysis between evaluation tables, plus dataset statistics.

Pearson's r, Spearman's rho (mid-rank ties), and Kendall's tau-b are computed
with two-sided permutation p-values: the full n! enumeration when n <= 9,
otherwise a seeded Monte-Carlo sample of 100,000 permutations (the classic
t-approximation is reported alongside for Pearson and Spearman in that case).
Coefficients fall into significance buckets {0.001, 0.2, 0.3}; a result with
|value| < 0.2 or p > 0.3 carries the verdict "no-correlation".
"""

from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import stats as _scipy_stats

from .corpus import Corpus, publications_of
from .errors import DegenerateSeriesError, KeyMismatchError, ValidationError
from .evalmetrics import EvaluationTable, _metric_order
from .groundtruth import ExperimentDataset

EXACT_ENUMERATION_MAX_N = 9
MC_SAMPLES = 100_000
DEFAULT_PERM_SEED = 12345

SIGNIFICANCE_BUCKETS = (0.001, 0.2, 0.3)
BUCKET_MARKERS = {"0.001": "***", "0.2": "†", "0.3": "‡"}
NO_CORRELATION_VALUE_FLOOR = 0.2
NO_CORRELATION_P_CEILING = 0.3

_CHUNK = 20_000
_COUNT_EPS = 1e-12


@dataclass(frozen=True)
class PairedSeries:
    """Paired scores (x_i, y_i) with a (method, metric) label per pair."""

    x: tuple[float, ...]
    y: tuple[float, ...]
    labels: tuple[tuple[str, str], ...]

    def validate(self) -> None:
        if len(self.x) != len(self.y) or len(self.x) != len(self.labels):
            raise ValidationError("paired series components differ in length")
        if len(self.x) < 3:
            raise DegenerateSeriesError(
                f"need at least 3 pairs to correlate, got {len(self.x)}"
            )

    def __len__(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class CoefficientResult:
    value: float
    p_value: float
    p_method: str  # "exact" or "monte-carlo"
    n_resamples: int
    p_value_t_approx: float | None = None


def _midranks(values: np.ndarray) -> np.ndarray:
    """Average ranks (1-based) with tied values sharing their mid-rank."""
    n = len(values)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(n, dtype=float)
    sorted_vals = values[order]
    i = 0
    while i < n:
        j = i
        while j + 1 < n and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def pearson_coefficient(x: Sequence[float], y: Sequence[float]) -> float:
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    xc = xa - xa.mean()
    yc = ya - ya.mean()
    sxx = float(xc @ xc)
    syy = float(yc @ yc)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateSeriesError("pearson is undefined for a zero-variance series")
    return float(xc @ yc) / math.sqrt(sxx * syy)


def spearman_coefficient(x: Sequence[float], y: Sequence[float]) -> float:
    rx = _midranks(np.asarray(x, dtype=float))
    ry = _midranks(np.asarray(y, dtype=float))
    try:
        return pearson_coefficient(rx, ry)
    except DegenerateSeriesError:
        raise DegenerateSeriesError(
            "spearman is undefined for an all-equal series"
        ) from None


def _tie_pair_count(values: Sequence[float]) -> int:
    return sum(t * (t - 1) // 2 for t in Counter(values).values())


def kendall_coefficient(x: Sequence[float], y: Sequence[float]) -> float:
    """Tau-b: tie-corrected concordant/discordant pair ratio."""
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    n = len(xa)
    n0 = n * (n - 1) // 2
    n1 = _tie_pair_count(tuple(xa))
    n2 = _tie_pair_count(tuple(ya))
    if n1 == n0 or n2 == n0:
        raise DegenerateSeriesError("kendall is undefined for an all-equal series")
    sx = np.sign(xa[:, None] - xa[None, :])
    sy = np.sign(ya[:, None] - ya[None, :])
    numerator = float((sx * sy).sum()) / 2.0
    return numerator / math.sqrt((n0 - n1) * (n0 - n2))


@lru_cache(maxsize=4)
def _all_permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.int16)


def _perm_pvalue(
    n: int,
    batch_stat: Callable[[np.ndarray], np.ndarray],
    observed: float,
    perm_seed: int,
    mc_samples: int,
) -> tuple[float, str, int]:
    """Two-sided permutation p-value: share of |stat| >= |observed|."""
    threshold = abs(observed) - _COUNT_EPS
    if n <= EXACT_ENUMERATION_MAX_N:
        perms = _all_permutations(n)
        total = len(perms)
        count = 0
        for start in range(0, total, _CHUNK):
            chunk_stats = batch_stat(perms[start : start + _CHUNK])
            count += int(np.count_nonzero(np.abs(chunk_stats) >= threshold))
        return count / total, "exact", total
    rng = np.random.default_rng(perm_seed)
    count = 0
    remaining = mc_samples
    while remaining > 0:
        size = min(_CHUNK, remaining)
        perms = np.argsort(rng.random((size, n)), axis=1)
        chunk_stats = batch_stat(perms)
        count += int(np.count_nonzero(np.abs(chunk_stats) >= threshold))
        remaining -= size
    return max(count, 1) / mc_samples, "monte-carlo", mc_samples


def _t_approx_pvalue(value: float, n: int) -> float:
    if abs(value) >= 1.0:
        return 0.0
    t = value * math.sqrt((n - 2) / (1.0 - value * value))
    return float(2.0 * _scipy_stats.t.sf(abs(t), df=n - 2))


def _linear_perm_result(
    xa: np.ndarray,
    ya: np.ndarray,
    observed: float,
    perm_seed: int,
    mc_samples: int,
) -> CoefficientResult:
    """Permutation distribution for correlations of the form sum(x~ * y~)/D."""
    n = len(xa)
    xc = xa - xa.mean()
    yc = ya - ya.mean()
    denom = math.sqrt(float(xc @ xc) * float(yc @ yc))
    xc_scaled = xc / denom

    def batch(perms: np.ndarray) -> np.ndarray:
        return yc[perms] @ xc_scaled

    p_value, method, resamples = _perm_pvalue(
        n, batch, observed, perm_seed, mc_samples
    )
    t_approx = _t_approx_pvalue(observed, n) if method == "monte-carlo" else None
    return CoefficientResult(
        value=observed,
        p_value=p_value,
        p_method=method,
        n_resamples=resamples,
        p_value_t_approx=t_approx,
    )


def pearson(
    series: PairedSeries,
    perm_seed: int = DEFAULT_PERM_SEED,
    mc_samples: int = MC_SAMPLES,
) -> CoefficientResult:
    series.validate()
    xa = np.asarray(series.x, dtype=float)
    ya = np.asarray(series.y, dtype=float)
    observed = pearson_coefficient(xa, ya)
    return _linear_perm_result(xa, ya, observed, perm_seed, mc_samples)


def spearman(
    series: PairedSeries,
    perm_seed: int = DEFAULT_PERM_SEED,
    mc_samples: int = MC_SAMPLES,
) -> CoefficientResult:
    series.validate()
    observed = spearman_coefficient(series.x, series.y)
    # Permuting raw values permutes their ranks, so the permutation
    # distribution is computed directly on the mid-ranks.
    rx = _midranks(np.asarray(series.x, dtype=float))
    ry = _midranks(np.asarray(series.y, dtype=float))
    return _linear_perm_result(rx, ry, observed, perm_seed, mc_samples)


def kendall(
    series: PairedSeries,
    perm_seed: int = DEFAULT_PERM_SEED,
    mc_samples: int = MC_SAMPLES,
) -> CoefficientResult:
    series.validate()
    observed = kendall_coefficient(series.x, series.y)
    xa = np.asarray(series.x, dtype=float)
    ya = np.asarray(series.y, dtype=float)
    n = len(xa)
    n0 = n * (n - 1) // 2
    denom = math.sqrt(
        (n0 - _tie_pair_count(series.x)) * (n0 - _tie_pair_count(series.y))
    )
    sx_flat = np.sign(xa[:, None] - xa[None, :]).astype(np.int32).ravel()
    sy = np.sign(ya[:, None] - ya[None, :]).astype(np.int8)

    def batch(perms: np.ndarray) -> np.ndarray:
        gathered = sy[perms[:, :, None], perms[:, None, :]]
        numerators = gathered.reshape(len(perms), -1).astype(np.int32) @ sx_flat
        return numerators / (2.0 * denom)

    p_value, method, resamples = _perm_pvalue(n, batch, observed, perm_seed, mc_samples)
    return CoefficientResult(
        value=observed, p_value=p_value, p_method=method, n_resamples=resamples
    )


def significance_bucket(p_value: float) -> str:
    """Smallest bucket the p-value clears, or 'none'."""
    for bucket in SIGNIFICANCE_BUCKETS:
        if p_value <= bucket:
            return str(bucket)
    return "none"


def correlation_verdict(value: float, p_value: float) -> str:
    if abs(value) < NO_CORRELATION_VALUE_FLOOR or p_value > NO_CORRELATION_P_CEILING:
        return "no-correlation"
    return "reported"


@dataclass(frozen=True)
class CoefficientReport:
    value: float
    p_value: float
    p_method: str
    n_resamples: int
    p_value_t_approx: float | None
    bucket: str
    verdict: str

    @classmethod
    def from_result(cls, result: CoefficientResult) -> "CoefficientReport":
        return cls(
            value=result.value,
            p_value=result.p_value,
            p_method=result.p_method,
            n_resamples=result.n_resamples,
            p_value_t_approx=result.p_value_t_approx,
            bucket=significance_bucket(result.p_value),
            verdict=correlation_verdict(result.value, result.p_value),
        )

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "p_value": self.p_value,
            "p_method": self.p_method,
            "n_resamples": self.n_resamples,
            "p_value_t_approx": self.p_value_t_approx,
            "bucket": self.bucket,
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class CorrelationReport:
    scope: str  # "general" or "per-metric"
    label: str  # "general" or the metric name
    n: int
    pearson: CoefficientReport
    spearman: CoefficientReport
    kendall: CoefficientReport

    def coefficient(self, name: str) -> CoefficientReport:
        return {"pearson": self.pearson, "spearman": self.spearman,
                "kendall": self.kendall}[name]

    def as_dict(self) -> dict:
        return {
            "scope": self.scope,
            "label": self.label,
            "n": self.n,
            "pearson": self.pearson.as_dict(),
            "spearman": self.spearman.as_dict(),
            "kendall": self.kendall.as_dict(),
        }


def _series_report(
    series: PairedSeries,
    scope: str,
    label: str,
    perm_seed: int,
    mc_samples: int,
) -> CorrelationReport:
    return CorrelationReport(
        scope=scope,
        label=label,
        n=len(series),
        pearson=CoefficientReport.from_result(pearson(series, perm_seed, mc_samples)),
        spearman=CoefficientReport.from_result(spearman(series, perm_seed, mc_samples)),
        kendall=CoefficientReport.from_result(kendall(series, perm_seed, mc_samples)),
    )


def _check_keys(a: EvaluationTable, b: EvaluationTable) -> list[tuple[str, str]]:
    keys_a, keys_b = a.keys(), b.keys()
    if keys_a != keys_b:
        only_a = sorted(keys_a - keys_b)
        only_b = sorted(keys_b - keys_a)
        raise KeyMismatchError(
            "evaluation tables do not share the same (method, metric) keys; "
            f"only in {a.label}: {only_a}; only in {b.label}: {only_b}"
        )
    return sorted(keys_a, key=lambda key: (key[0], _metric_order(key[1])))


def correlate_tables(
    a: EvaluationTable,
    b: EvaluationTable,
    scope: str = "general",
    perm_seed: int = DEFAULT_PERM_SEED,
    mc_samples: int = MC_SAMPLES,
) -> list[CorrelationReport]:
    """Correlate two score tables over all keys or per metric.

    The general scope pairs every shared (method, metric) key into one series;
    the per-metric scope yields one report per metric with methods as pairs.
    """
    keys = _check_keys(a, b)
    if scope not in ("general", "per-metric"):
        raise ValidationError(f"unknown scope {scope!r}")
    if scope == "general":
        series = PairedSeries(
            x=tuple(a.scores[k] for k in keys),
            y=tuple(b.scores[k] for k in keys),
            labels=tuple(keys),
        )
        return [_series_report(series, "general", "general", perm_seed, mc_samples)]
    metrics = sorted({metric for _, metric in keys}, key=_metric_order)
    reports = []
    for metric in metrics:
        metric_keys = [k for k in keys if k[1] == metric]
        series = PairedSeries(
            x=tuple(a.scores[k] for k in metric_keys),
            y=tuple(b.scores[k] for k in metric_keys),
            labels=tuple(metric_keys),
        )
        reports.append(
            _series_report(series, "per-metric", metric, perm_seed, mc_samples)
        )
    return reports


def reports_as_json(
    reports: Sequence[CorrelationReport],
    perm_seed: int = DEFAULT_PERM_SEED,
    mc_samples: int = MC_SAMPLES,
) -> str:
    payload = {
        "parameters": {
            "p_value_sides": "two-sided",
            "exact_enumeration_max_n": EXACT_ENUMERATION_MAX_N,
            "mc_samples": mc_samples,
            "perm_seed": perm_seed,
            "significance_buckets": list(SIGNIFICANCE_BUCKETS),
            "no_correlation_rule": (
                f"|value| < {NO_CORRELATION_VALUE_FLOOR} "
                f"or p > {NO_CORRELATION_P_CEILING}"
            ),
        },
        "reports": [report.as_dict() for report in reports],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def format_correlation_table(reports: Sequence[CorrelationReport]) -> str:
    """Plain-text table: one row per report, one column per coefficient."""
    header = f"{'Coefficient':<22}{'Pearson':<12}{'Spearman':<12}{'Kendall':<12}"
    lines = [header, "-" * len(header)]
    for report in reports:
        row_label = (
            "General correlations" if report.scope == "general" else f"On {report.label}"
        )
        cells = []
        for name in ("pearson", "spearman", "kendall"):
            coeff = report.coefficient(name)
            if coeff.verdict == "no-correlation":
                cells.append("No")
            else:
                cells.append(f"{coeff.value:.2f}{BUCKET_MARKERS.get(coeff.bucket, '')}")
        lines.append(
            f"{row_label:<22}{cells[0]:<12}{cells[1]:<12}{cells[2]:<12}"
        )
    lines.append("")
    lines.append("***, †, ‡ mark significance buckets 0.001, 0.2, 0.3;")
    lines.append(
        f"'No' means |value| < {NO_CORRELATION_VALUE_FLOOR} "
        f"or p > {NO_CORRELATION_P_CEILING}."
    )
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class DatasetStatistics:
    """Aggregate dataset description over the selected researchers."""

    target_researchers: int
    written_publications_per_researcher: float
    citations_per_publication: float
    references_per_publication: float
    candidate_publications: int
    relevant_publications_per_researcher: float

    def rows(self) -> list[tuple[str, float]]:
        return [
            ("target_researchers", float(self.target_researchers)),
            (
                "written_publications_per_researcher",
                self.written_publications_per_researcher,
            ),
            ("citations_per_publication", self.citations_per_publication),
            ("references_per_publication", self.references_per_publication),
            ("candidate_publications", float(self.candidate_publications)),
            (
                "relevant_publications_per_researcher",
                self.relevant_publications_per_researcher,
            ),
        ]


def dataset_statistics(corpus: Corpus, dataset: ExperimentDataset) -> DatasetStatistics:
    """The six summary quantities over the selected researcher set.

    Written publications are the researchers' restricted-past works. Citation
    counts only include citing publications published before the present year;
    reference counts include every stored (resolvable) edge.
    """
    if not dataset.researchers:
        raise ValidationError("dataset has no selected researchers")
    timeline = dataset.timeline
    written: set[str] = set()
    total_written = 0
    total_relevant = 0
    for rid in dataset.researchers:
        past = publications_of(corpus, rid, timeline.restricted_past)
        total_written += len(past)
        written |= {pub.id for pub in past}
        total_relevant += len(dataset.ground_truth[rid].relevant_ids)

    n_researchers = len(dataset.researchers)
    if written:
        citation_counts = [
            sum(
                1
                for citer in corpus.citers_of(pid)
                if corpus.publications[citer].year < timeline.present
            )
            for pid in written
        ]
        reference_counts = [
            len(corpus.publication(pid).reference_ids) for pid in written
        ]
        mean_citations = sum(citation_counts) / len(written)
        mean_references = sum(reference_counts) / len(written)
    else:
        mean_citations = 0.0
        mean_references = 0.0

    return DatasetStatistics(
        target_researchers=n_researchers,
        written_publications_per_researcher=total_written / n_researchers,
        citations_per_publication=mean_citations,
        references_per_publication=mean_references,
        candidate_publications=len(dataset.candidate_pool),
        relevant_publications_per_researcher=total_relevant / n_researchers,
    )
