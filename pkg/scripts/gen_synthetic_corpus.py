#!/usr/bin/env python3
"""Regenerate the bundled synthetic corpus fixture (deterministic).

The corpus is hand-structured so that, with the timeline present=2006,
restricted past [2001, 2006), restricted future [2006, 2010] and criteria
(junior, 1..2 past, >=5 future, nonempty ground truth):

  r01..r04  are eligible (their future-reference sets are known by design)
  r06       is rejected: 3 restricted-past publications (over the max of 2)
  r07       is rejected: only 4 restricted-future publications
  r08       is rejected: first publication in 2000 (not junior)
  r09       is rejected: empty future-reference set

Titles and abstracts are sampled from small topic vocabularies with a fixed
seed, so reruns are byte-identical. Run from the repository root:

    python3 scripts/gen_synthetic_corpus.py
"""

from __future__ import annotations

import json
import random
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src/refeval/fixtures/synthetic_corpus.jsonl"

SEED = 20240601

TOPICS = {
    "graph": [
        "graph", "network", "clustering", "partition", "spectral", "community",
        "modularity", "centrality", "motif", "diffusion", "topology", "subgraph",
    ],
    "text": [
        "language", "parsing", "grammar", "semantic", "translation", "syntax",
        "discourse", "lexical", "annotation", "corpus", "summarization", "morphology",
    ],
    "learn": [
        "learning", "neural", "classifier", "kernel", "gradient", "optimization",
        "regression", "boosting", "margin", "ensemble", "bayesian", "embedding",
    ],
}
COMMON = [
    "analysis", "method", "model", "data", "evaluation", "approach",
    "system", "framework", "study", "results", "experiments", "algorithm",
]

# id -> (year, topics, authors, references)
PUBS: dict[str, tuple[int, tuple[str, ...], list[str], list[str]]] = {
    # background publications
    "pb01": (1999, ("graph",), ["x01"], []),
    "pb02": (2000, ("text",), ["x02"], []),
    "pb03": (2000, ("learn",), ["x03"], []),
    "pb04": (2001, ("graph",), ["x04"], ["pb01"]),
    "pb05": (2001, ("text",), ["x05"], ["pb02"]),
    "pb06": (2002, ("learn",), ["x01"], ["pb03"]),
    "pb07": (2002, ("graph",), ["x02"], ["pb01", "pb04"]),
    "pb08": (2003, ("text",), ["x03"], ["pb02", "pb05"]),
    "pb09": (2003, ("learn",), ["x04"], ["pb03", "pb06"]),
    "pb10": (2004, ("graph",), ["x05"], ["pb01", "pb07"]),
    # r01: eligible (1 past, 5 future); FR = {pb06, pb07, pb10, pr02a}
    "pr01a": (2003, ("graph",), ["r01"], ["pb01", "pb04"]),
    "pr01b": (2006, ("graph",), ["r01"], ["pb07", "pb01"]),
    "pr01c": (2007, ("graph",), ["r01"], ["pb10", "pr02a"]),
    "pr01d": (2008, ("graph",), ["r01"], ["pb07", "pb04"]),
    "pr01e": (2009, ("graph",), ["r01"], ["pr01b", "pb10"]),
    "pr01f": (2010, ("graph",), ["r01"], ["pb06"]),
    # r02: eligible (2 past, 5 future); FR = {pb06, pb09, pb10, pr01a}
    "pr02a": (2002, ("text",), ["r02"], ["pb02"]),
    "pr02b": (2004, ("text",), ["r02"], ["pb05", "pb08"]),
    "pr02c": (2006, ("text",), ["r02", "x02"], ["pb09", "pb08"]),
    "pr02d": (2007, ("text",), ["r02"], ["pr01a", "pb05"]),
    "pr02e": (2008, ("text",), ["r02"], ["pb02", "pb06"]),
    "pr02f": (2009, ("text",), ["r02"], ["pr02c"]),
    "pr02g": (2010, ("text",), ["r02"], ["pb09", "pb10"]),
    # r03: eligible (1 past, 5 future); FR = {pb06, pb08, pb10, pr02b}
    "pr03a": (2005, ("learn",), ["r03"], ["pb03", "pb09"]),
    "pr03b": (2006, ("learn",), ["r03"], ["pb06"]),
    "pr03c": (2007, ("learn",), ["r03"], ["pb09", "pb06"]),
    "pr03d": (2008, ("learn",), ["r03"], ["pb03", "pb08"]),
    "pr03e": (2009, ("learn",), ["r03"], ["pr02b"]),
    "pr03f": (2010, ("learn",), ["r03"], ["pb10", "pr03b"]),
    # r04: eligible (2 past, 5 future); FR = {pb01, pb02, pb10, pr01a}
    "pr04a": (2003, ("graph", "text"), ["r04", "x01"], ["pb04", "pb05"]),
    "pr04b": (2005, ("graph", "text"), ["r04"], ["pb07", "pb08"]),
    "pr04c": (2006, ("graph",), ["r04"], ["pb10", "pb04"]),
    "pr04d": (2007, ("graph", "text"), ["r04"], ["pb01", "pb08"]),
    "pr04e": (2008, ("text",), ["r04"], ["pr01a", "pb05"]),
    "pr04f": (2009, ("text",), ["r04"], ["pb02", "pr04c"]),
    "pr04g": (2010, ("graph",), ["r04"], ["pb07"]),
    # r06: rejected, 3 restricted-past publications
    "pr06a": (2002, ("graph",), ["r06", "x03"], ["pb01"]),
    "pr06b": (2003, ("graph",), ["r06"], ["pb04"]),
    "pr06c": (2004, ("graph",), ["r06"], ["pb07"]),
    "pr06d": (2006, ("graph",), ["r06"], ["pb10"]),
    "pr06e": (2007, ("graph",), ["r06"], ["pb09"]),
    "pr06f": (2008, ("graph",), ["r06"], ["pb08"]),
    "pr06g": (2009, ("graph",), ["r06"], ["pb06"]),
    "pr06h": (2010, ("graph",), ["r06"], ["pb03"]),
    # r07: rejected, only 4 restricted-future publications
    "pr07a": (2003, ("text",), ["r07"], ["pb02"]),
    "pr07b": (2004, ("text",), ["r07"], ["pb05"]),
    "pr07c": (2006, ("text",), ["r07"], ["pb08"]),
    "pr07d": (2007, ("text",), ["r07"], ["pb09"]),
    "pr07e": (2008, ("text",), ["r07"], ["pb10"]),
    "pr07f": (2009, ("text",), ["r07"], ["pb06"]),
    # r08: rejected, first publication before the restricted past
    "pr08a": (2000, ("learn",), ["r08"], ["pb01"]),
    "pr08b": (2002, ("learn",), ["r08"], ["pb05"]),
    "pr08c": (2004, ("learn",), ["r08"], ["pb08"]),
    "pr08d": (2006, ("learn",), ["r08"], ["pb09"]),
    "pr08e": (2007, ("learn",), ["r08"], ["pb10"]),
    "pr08f": (2008, ("learn",), ["r08"], ["pb06"]),
    "pr08g": (2009, ("learn",), ["r08"], ["pb03"]),
    "pr08h": (2010, ("learn",), ["r08"], ["pb07"]),
    # r09: rejected, future references limited to already-past-cited works
    "pr09a": (2004, ("text",), ["r09"], ["pb05", "pb08"]),
    "pr09b": (2006, ("text",), ["r09"], ["pb05"]),
    "pr09c": (2007, ("text",), ["r09"], ["pb08"]),
    "pr09d": (2008, ("text",), ["r09"], ["pb05", "pb08"]),
    "pr09e": (2009, ("text",), ["r09"], ["pr09b"]),
    "pr09f": (2010, ("text",), ["r09"], ["pb08"]),
}

EXPECTED_FR = {
    "r01": {"pb06", "pb07", "pb10", "pr02a"},
    "r02": {"pb06", "pb09", "pb10", "pr01a"},
    "r03": {"pb06", "pb08", "pb10", "pr02b"},
    "r04": {"pb01", "pb02", "pb10", "pr01a"},
}


def make_text(rng: random.Random, topics: tuple[str, ...]) -> tuple[str, str]:
    pool = [w for t in topics for w in TOPICS[t]]
    title_words = rng.sample(pool, 4) + [rng.choice(COMMON)]
    rng.shuffle(title_words)
    abstract_words = [
        rng.choice(pool if rng.random() < 0.7 else COMMON) for _ in range(12)
    ]
    title = " ".join(title_words).capitalize()
    abstract = " ".join(abstract_words).capitalize() + "."
    return title, abstract


def build_records() -> list[dict]:
    rng = random.Random(SEED)
    records = []
    for pub_id in sorted(PUBS):
        year, topics, authors, references = PUBS[pub_id]
        title, abstract = make_text(rng, topics)
        records.append(
            {
                "id": pub_id,
                "year": year,
                "title": title,
                "abstract": abstract,
                "authors": authors,
                "references": sorted(references),
            }
        )
    return records


def verify(records: list[dict]) -> None:
    by_id = {r["id"]: r for r in records}
    assert len(records) == 64, len(records)
    for rec in records:
        for ref in rec["references"]:
            assert ref in by_id, f"dangling reference {ref} in {rec['id']}"
            assert ref != rec["id"]

    def authored(rid):
        return [r for r in records if rid in r["authors"]]

    def cited(rid, lo, hi, closed):
        out = set()
        for rec in authored(rid):
            year = rec["year"]
            if (lo <= year < hi) or (closed and year == hi):
                out |= set(rec["references"])
        return out

    for rid, expected in EXPECTED_FR.items():
        past_refs = cited(rid, 2001, 2006, closed=False)
        future_refs = cited(rid, 2006, 2010, closed=True)
        fr = {
            p
            for p in future_refs
            if p not in past_refs and by_id[p]["year"] < 2006
        }
        assert fr == expected, (rid, fr, expected)

    def count(rid, lo, hi, closed):
        return sum(
            1
            for rec in authored(rid)
            if lo <= rec["year"] < hi or (closed and rec["year"] == hi)
        )

    assert count("r06", 2001, 2006, False) == 3
    assert count("r07", 2006, 2010, True) == 4
    assert min(r["year"] for r in authored("r08")) == 2000
    r09_past = cited("r09", 2001, 2006, False)
    r09_future = cited("r09", 2006, 2010, True)
    assert not {
        p for p in r09_future if p not in r09_past and by_id[p]["year"] < 2006
    }
    pool = set().union(*EXPECTED_FR.values())
    assert len(pool) == 10, pool


def main() -> None:
    records = build_records()
    verify(records)
    with open(OUT, "w", encoding="utf-8", newline="\n") as handle:
        for rec in records:
            handle.write(json.dumps(rec, sort_keys=True) + "\n")
    print(f"wrote {len(records)} records to {OUT}")


if __name__ == "__main__":
    main()
