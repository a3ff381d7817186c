"""Bibliographic corpus ingestion and indexed lookup.

The corpus exchange format is JSONL, one publication record per line:

    {"id": "p1", "year": 2004, "title": "...", "abstract": "...",
     "authors": ["r1", "r2"], "references": ["p0"]}

``abstract`` and ``references`` are optional; unknown fields are ignored.
Author identifiers are taken as already-disambiguated researcher identities.
After ingestion the corpus is immutable and safe for concurrent reads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import CorpusFormatError, NotFoundError

YEAR_MIN = 1000
YEAR_MAX = 3000

DANGLING_POLICIES = ("drop", "keep", "error")


@dataclass(frozen=True)
class YearWindow:
    """A year interval, half-open [start, end) or closed [start, end]."""

    start: int
    end: int
    closed_end: bool = False

    def contains(self, year: int) -> bool:
        if self.closed_end:
            return self.start <= year <= self.end
        return self.start <= year < self.end

    def __str__(self) -> str:
        return f"[{self.start}, {self.end}{']' if self.closed_end else ')'}"


@dataclass(frozen=True)
class Publication:
    id: str
    year: int
    title: str
    abstract: str
    author_ids: frozenset[str]
    reference_ids: frozenset[str]

    def text(self, fields: tuple[str, ...] = ("title", "abstract")) -> str:
        """Content used for vectorization: the selected fields joined by a space."""
        parts = [getattr(self, name) for name in fields]
        return " ".join(part for part in parts if part)


@dataclass(frozen=True)
class Researcher:
    id: str
    publication_ids: frozenset[str]


@dataclass(frozen=True)
class IngestOptions:
    dangling_policy: str = "drop"


@dataclass(frozen=True)
class IngestReport:
    publications: int
    researchers: int
    reference_edges: int
    citation_edges: int
    dangling_edges_dropped: int
    self_reference_edges_dropped: int

    def as_dict(self) -> dict:
        return {
            "publications": self.publications,
            "researchers": self.researchers,
            "reference_edges": self.reference_edges,
            "citation_edges": self.citation_edges,
            "dangling_edges_dropped": self.dangling_edges_dropped,
            "self_reference_edges_dropped": self.self_reference_edges_dropped,
        }


@dataclass(frozen=True)
class Corpus:
    """Immutable publication store with authorship and inverted-citation indexes.

    ``citation_index`` inverts the reference edges restricted to identifiers
    that resolve in the corpus: q cites p iff p is in q's references and both
    resolve.
    """

    publications: dict[str, Publication]
    researchers: dict[str, Researcher]
    citation_index: dict[str, frozenset[str]]

    def publication(self, pub_id: str) -> Publication:
        try:
            return self.publications[pub_id]
        except KeyError:
            raise NotFoundError(f"unknown publication: {pub_id!r}") from None

    def researcher(self, researcher_id: str) -> Researcher:
        try:
            return self.researchers[researcher_id]
        except KeyError:
            raise NotFoundError(f"unknown researcher: {researcher_id!r}") from None

    def citers_of(self, pub_id: str) -> frozenset[str]:
        return self.citation_index.get(pub_id, frozenset())

    def year_range(self) -> tuple[int, int] | None:
        if not self.publications:
            return None
        years = [p.year for p in self.publications.values()]
        return min(years), max(years)


def _parse_record(obj: object, line: int) -> dict:
    if not isinstance(obj, dict):
        raise CorpusFormatError("record is not a JSON object", line)

    def _string(key: str, required: bool, default: str = "") -> str:
        value = obj.get(key, None if required else default)
        if value is None:
            raise CorpusFormatError(f"missing required field {key!r}", line)
        if not isinstance(value, str):
            raise CorpusFormatError(f"field {key!r} must be a string", line)
        return value

    def _string_list(key: str, required: bool) -> list[str]:
        value = obj.get(key, None if required else [])
        if value is None:
            raise CorpusFormatError(f"missing required field {key!r}", line)
        if not isinstance(value, list) or any(not isinstance(v, str) for v in value):
            raise CorpusFormatError(f"field {key!r} must be an array of strings", line)
        return value

    year = obj.get("year")
    if year is None:
        raise CorpusFormatError("missing required field 'year'", line)
    if isinstance(year, bool) or not isinstance(year, int):
        raise CorpusFormatError("field 'year' must be an integer", line)
    if not YEAR_MIN <= year <= YEAR_MAX:
        raise CorpusFormatError(
            f"year {year} outside valid range [{YEAR_MIN}, {YEAR_MAX}]", line
        )

    return {
        "id": _string("id", required=True),
        "year": year,
        "title": _string("title", required=True),
        "abstract": _string("abstract", required=False),
        "authors": _string_list("authors", required=True),
        "references": _string_list("references", required=False),
    }


def iter_records(lines: Iterable[str]) -> Iterator[tuple[int, dict]]:
    """Yield (line_number, validated record) for every non-blank JSONL line."""
    for line_no, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(f"invalid JSON ({exc.msg})", line_no) from None
        yield line_no, _parse_record(obj, line_no)


def ingest_corpus(
    lines: Iterable[str], options: IngestOptions | None = None
) -> tuple[Corpus, IngestReport]:
    """Parse a JSONL record stream into an immutable corpus.

    Self-references are always removed. References to identifiers that do not
    resolve in the corpus are handled per ``options.dangling_policy``: dropped
    with a count (default), kept verbatim, or rejected with an error.
    """
    options = options or IngestOptions()
    if options.dangling_policy not in DANGLING_POLICIES:
        raise CorpusFormatError(
            f"unknown dangling-reference policy {options.dangling_policy!r}; "
            f"expected one of {DANGLING_POLICIES}"
        )

    records: dict[str, dict] = {}
    record_lines: dict[str, int] = {}
    for line_no, rec in iter_records(lines):
        pub_id = rec["id"]
        if pub_id in records:
            raise CorpusFormatError(
                f"duplicate publication id {pub_id!r} "
                f"(first seen at line {record_lines[pub_id]})",
                line_no,
            )
        records[pub_id] = rec
        record_lines[pub_id] = line_no

    dangling_dropped = 0
    self_dropped = 0
    publications: dict[str, Publication] = {}
    author_pubs: dict[str, set[str]] = {}
    citers: dict[str, set[str]] = {}

    for pub_id, rec in records.items():
        refs = set(rec["references"])
        if pub_id in refs:
            refs.discard(pub_id)
            self_dropped += 1
        dangling = {r for r in refs if r not in records}
        if dangling:
            if options.dangling_policy == "error":
                raise CorpusFormatError(
                    f"publication {pub_id!r} references unknown ids: "
                    f"{sorted(dangling)}",
                    record_lines[pub_id],
                )
            if options.dangling_policy == "drop":
                refs -= dangling
                dangling_dropped += len(dangling)
        publications[pub_id] = Publication(
            id=pub_id,
            year=rec["year"],
            title=rec["title"],
            abstract=rec["abstract"],
            author_ids=frozenset(rec["authors"]),
            reference_ids=frozenset(refs),
        )
        for author in rec["authors"]:
            author_pubs.setdefault(author, set()).add(pub_id)
        for ref in refs:
            if ref in records:
                citers.setdefault(ref, set()).add(pub_id)

    researchers = {
        rid: Researcher(id=rid, publication_ids=frozenset(pubs))
        for rid, pubs in author_pubs.items()
    }
    citation_index = {pid: frozenset(srcs) for pid, srcs in citers.items()}

    corpus = Corpus(
        publications=publications,
        researchers=researchers,
        citation_index=citation_index,
    )
    report = IngestReport(
        publications=len(publications),
        researchers=len(researchers),
        reference_edges=sum(len(p.reference_ids) for p in publications.values()),
        citation_edges=sum(len(v) for v in citation_index.values()),
        dangling_edges_dropped=dangling_dropped,
        self_reference_edges_dropped=self_dropped,
    )
    return corpus, report


def load_corpus(
    path: str, options: IngestOptions | None = None
) -> tuple[Corpus, IngestReport]:
    """Ingest a JSONL corpus file."""
    with open(path, encoding="utf-8") as handle:
        return ingest_corpus(handle, options)


def publications_of(
    corpus: Corpus, researcher_id: str, window: YearWindow
) -> set[Publication]:
    """The researcher's publications whose year falls inside the window."""
    researcher = corpus.researcher(researcher_id)
    return {
        corpus.publications[pid]
        for pid in researcher.publication_ids
        if window.contains(corpus.publications[pid].year)
    }


def references_of(corpus: Corpus, researcher_id: str, window: YearWindow) -> set[str]:
    """Union of reference ids over the researcher's publications in the window."""
    refs: set[str] = set()
    for pub in publications_of(corpus, researcher_id, window):
        refs |= pub.reference_ids
    return refs
