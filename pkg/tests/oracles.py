"""Independent reference implementations used to cross-check the package.

Everything here works from raw record dicts or plain sequences and avoids the
package's own set-algebra and vectorized code paths.
"""

from __future__ import annotations

import itertools
import json
import math
import random

from scipy import stats as scipy_stats

from refeval.corpus import Corpus, IngestOptions, ingest_corpus


def make_corpus(records: list[dict], policy: str = "drop") -> Corpus:
    lines = [json.dumps(rec) for rec in records]
    corpus, _ = ingest_corpus(lines, IngestOptions(dangling_policy=policy))
    return corpus


def record(
    pub_id: str,
    year: int,
    authors: list[str] | None = None,
    references: list[str] | None = None,
    title: str = "t",
    abstract: str = "",
) -> dict:
    return {
        "id": pub_id,
        "year": year,
        "title": title,
        "abstract": abstract,
        "authors": authors or [],
        "references": references or [],
    }


# ---------------------------------------------------------------------------
# ground truth: exhaustive pair scan over raw records

def _in_window(year: int, lo: int, hi: int, closed: bool) -> bool:
    return lo <= year < hi or (closed and year == hi)


def oracle_cites(
    records: list[dict], rid: str, pid: str, lo: int, hi: int, closed: bool
) -> bool:
    for rec in records:
        if rid in rec["authors"] and _in_window(rec["year"], lo, hi, closed):
            if pid in rec["references"]:
                return True
    return False


def oracle_future_references(
    records: list[dict], rid: str, past_start: int, present: int, future_end: int
) -> set[str]:
    """Scan every (researcher, publication) pair against the relevance predicate."""
    resolvable = {rec["id"] for rec in records}
    out = set()
    for rec in records:
        pid = rec["id"]
        if pid not in resolvable or rec["year"] >= present:
            continue
        if oracle_cites(records, rid, pid, past_start, present, False):
            continue
        if oracle_cites(records, rid, pid, present, future_end, True):
            out.add(pid)
    return out


def oracle_eligible_researchers(
    records: list[dict],
    past_start: int,
    present: int,
    future_end: int,
    min_past: int,
    max_past: int | None,
    min_future: int,
    junior_only: bool,
    require_nonempty: bool,
) -> list[str]:
    researchers = sorted({rid for rec in records for rid in rec["authors"]})
    eligible = []
    for rid in researchers:
        authored = [rec for rec in records if rid in rec["authors"]]
        past = sum(
            1 for rec in authored if _in_window(rec["year"], past_start, present, False)
        )
        future = sum(
            1 for rec in authored if _in_window(rec["year"], present, future_end, True)
        )
        if past < min_past or (max_past is not None and past > max_past):
            continue
        if future < min_future:
            continue
        if junior_only and any(rec["year"] < past_start for rec in authored):
            continue
        if require_nonempty and not oracle_future_references(
            records, rid, past_start, present, future_end
        ):
            continue
        eligible.append(rid)
    return eligible


# ---------------------------------------------------------------------------
# ranking metrics over explicit relevance patterns

def oracle_dcg(pattern: list[int], k: int) -> float:
    total = 0.0
    for idx, rel in enumerate(pattern[:k]):
        if rel:
            total += 1.0 / math.log2(idx + 2)
    return total


def oracle_ndcg(pattern: list[int], gt_size: int, k: int) -> float:
    """NDCG with the ideal computed by brute force where possible.

    When every relevant item appears in the ranking, the ideal is the best
    DCG over all distinct rearrangements of the pattern; otherwise it is the
    first min(k, gt_size) positions filled with relevant items.
    """
    dcg = oracle_dcg(pattern, k)
    present = sum(pattern)
    if gt_size == present:
        ideal = max(
            oracle_dcg(list(p), k) for p in set(itertools.permutations(pattern))
        )
    else:
        ideal = oracle_dcg([1] * min(k, gt_size), k)
    return dcg / ideal


def oracle_rr(pattern: list[int]) -> float:
    for idx, rel in enumerate(pattern):
        if rel:
            return 1.0 / (idx + 1)
    return 0.0


# ---------------------------------------------------------------------------
# correlation coefficients and permutation p-values (plain loops + scipy)

def scipy_coefficient(name: str, x, y) -> float:
    if name == "pearson":
        return float(scipy_stats.pearsonr(x, y)[0])
    if name == "spearman":
        return float(scipy_stats.spearmanr(x, y)[0])
    if name == "kendall":
        return float(scipy_stats.kendalltau(x, y)[0])
    raise ValueError(name)


def oracle_exact_perm_pvalue(name: str, x, y) -> float:
    """Exact two-sided permutation p-value by full enumeration (scipy stats)."""
    observed = abs(scipy_coefficient(name, x, y))
    count = 0
    total = 0
    y = list(y)
    for perm in itertools.permutations(y):
        total += 1
        if abs(scipy_coefficient(name, x, list(perm))) >= observed - 1e-12:
            count += 1
    return count / total


# ---------------------------------------------------------------------------
# random corpora for property tests

_WORDS = [
    "graph", "network", "learning", "kernel", "parsing", "semantic",
    "cluster", "random", "model", "data", "analysis", "method",
]


def random_corpus_records(
    rng: random.Random,
    n_pubs: int | None = None,
    n_authors: int = 5,
    year_lo: int = 1999,
    year_hi: int = 2010,
) -> list[dict]:
    """A small random corpus: random years, texts, authorship, and references.

    References point mostly backwards in time but occasionally forwards, so
    citation-side time filtering gets exercised.
    """
    n_pubs = n_pubs or rng.randint(8, 20)
    authors = [f"a{idx:02d}" for idx in range(n_authors)]
    records = []
    for idx in range(n_pubs):
        pid = f"p{idx:03d}"
        year = rng.randint(year_lo, year_hi)
        title = " ".join(rng.choice(_WORDS) for _ in range(rng.randint(2, 5)))
        abstract = " ".join(rng.choice(_WORDS) for _ in range(rng.randint(0, 8)))
        records.append(
            record(
                pid,
                year,
                authors=rng.sample(authors, rng.randint(1, 2)),
                references=[],
                title=title,
                abstract=abstract,
            )
        )
    for idx, rec in enumerate(records):
        others = [r["id"] for j, r in enumerate(records) if j != idx]
        if not others:
            continue
        n_refs = rng.randint(0, min(4, len(others)))
        rec["references"] = sorted(rng.sample(others, n_refs))
    return records
