"""Line-delimited publication records and their mapping onto the graph.

Each input line is one JSON object::

    {"paper_id": "p:1", "title": "...", "authors": [{"id": "r:a", "name": "A"}],
     "venue_id": "v:swc-2012", "venue_name": "SWC 2012", "year": 2012}

Bad lines never abort parsing; they are reported as :class:`Diagnostic`.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Iterable

from .errors import ConflictingRecord, FatalEncoding
from .graph import EntityKind, PropertyLabel, ScholarlyKnowledgeGraph

logger = logging.getLogger(__name__)

REQUIRED_FIELDS = ("paper_id", "title", "authors", "venue_id", "venue_name", "year")
MIN_YEAR, MAX_YEAR = 1900, 2100


@dataclass(frozen=True)
class PublicationRecord:
    paper_id: str
    title: str
    authors: tuple[tuple[str, str], ...]
    venue_id: str
    venue_name: str
    year: int

    def author_ids(self) -> list[str]:
        """Distinct author ids in listing order (repeated listings dropped)."""
        return list(dict.fromkeys(a for a, _ in self.authors))

    def to_dict(self) -> dict:
        return {
            "paper_id": self.paper_id,
            "title": self.title,
            "authors": [{"id": a, "name": n} for a, n in self.authors],
            "venue_id": self.venue_id,
            "venue_name": self.venue_name,
            "year": self.year,
        }


@dataclass(frozen=True)
class Diagnostic:
    line: int
    reason: str

    def __str__(self):
        return f"line {self.line}: {self.reason}"


@dataclass(frozen=True)
class DatasetManifest:
    focus_venue_series: frozenset[str] = frozenset()
    record_count: int | None = None
    source_description: str = ""
    series: dict[str, tuple[str, ...]] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "DatasetManifest":
        series = {name: tuple(v) for name, v in data.get("series", {}).items()}
        focus = data.get("focus_venue_series", [])
        if isinstance(focus, str):
            # a series name declared under "series"
            focus = series[focus]
        return cls(
            focus_venue_series=frozenset(focus),
            record_count=data.get("record_count"),
            source_description=data.get("source_description", ""),
            series=series,
        )

    def to_dict(self) -> dict:
        return {
            "record_count": self.record_count,
            "focus_venue_series": sorted(self.focus_venue_series),
            "source_description": self.source_description,
            "series": {k: list(v) for k, v in sorted(self.series.items())},
        }


def load_manifest(path: "str | Path") -> DatasetManifest:
    with open(path, encoding="utf-8") as fh:
        return DatasetManifest.from_dict(json.load(fh))


def _validate(obj) -> PublicationRecord:
    if not isinstance(obj, dict):
        raise ValueError("line is not a JSON object")
    missing = [k for k in REQUIRED_FIELDS if k not in obj]
    if missing:
        raise ValueError(f"missing field(s): {', '.join(missing)}")
    for key in ("paper_id", "venue_id"):
        if not isinstance(obj[key], str) or not obj[key]:
            raise ValueError(f"field {key!r} must be a non-empty string")
    for key in ("title", "venue_name"):
        if not isinstance(obj[key], str):
            raise ValueError(f"field {key!r} must be a string")
    year = obj["year"]
    if isinstance(year, bool) or not isinstance(year, int):
        raise ValueError("field 'year' must be an integer")
    if not MIN_YEAR <= year <= MAX_YEAR:
        raise ValueError(f"field 'year' out of range [{MIN_YEAR}, {MAX_YEAR}]: {year}")
    authors = obj["authors"]
    if not isinstance(authors, list) or not authors:
        raise ValueError("field 'authors' must be a non-empty list")
    parsed = []
    for a in authors:
        if not isinstance(a, dict) or not isinstance(a.get("id"), str) or not a["id"]:
            raise ValueError("each author needs a non-empty string 'id'")
        name = a.get("name", "")
        if not isinstance(name, str):
            raise ValueError("author 'name' must be a string")
        parsed.append((a["id"], name))
    return PublicationRecord(
        paper_id=obj["paper_id"],
        title=obj["title"],
        authors=tuple(parsed),
        venue_id=obj["venue_id"],
        venue_name=obj["venue_name"],
        year=year,
    )


def parse_records(data: "bytes | BinaryIO") -> tuple[list[PublicationRecord], list[Diagnostic]]:
    """Parse newline-delimited JSON records.

    Returns the valid records and one diagnostic per rejected line. Blank
    lines are skipped. Raises :class:`FatalEncoding` only when the input is
    not UTF-8.
    """
    if not isinstance(data, (bytes, bytearray)):
        data = data.read()
    try:
        text = bytes(data).decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FatalEncoding(f"input is not valid UTF-8 (byte {exc.start})") from None
    if text.startswith("\ufeff"):
        text = text[1:]

    records: list[PublicationRecord] = []
    diagnostics: list[Diagnostic] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            diagnostics.append(Diagnostic(lineno, f"malformed JSON: {exc.msg}"))
            continue
        try:
            records.append(_validate(obj))
        except ValueError as exc:
            diagnostics.append(Diagnostic(lineno, str(exc)))
    return records, diagnostics


def read_records(path: "str | Path") -> tuple[list[PublicationRecord], list[Diagnostic]]:
    with open(path, "rb") as fh:
        return parse_records(fh)


def serialize_records(records: Iterable[PublicationRecord]) -> bytes:
    lines = (json.dumps(r.to_dict(), ensure_ascii=False, sort_keys=True) for r in records)
    return "".join(line + "\n" for line in lines).encode("utf-8")


def build_graph(records: Iterable[PublicationRecord],
                manifest: DatasetManifest | None = None) -> ScholarlyKnowledgeGraph:
    """Map records onto a fresh graph.

    Per record: one publication, one venue (shared by venue_id), one
    researcher per distinct author id, plus ``author``, ``published-in``
    and ``year`` edges. Records are applied in paper_id order so the result
    does not depend on input order.
    """
    unique: dict[str, PublicationRecord] = {}
    for rec in records:
        seen = unique.get(rec.paper_id)
        if seen is not None and seen != rec:
            raise ConflictingRecord(f"paper {rec.paper_id!r} appears with different field values")
        unique[rec.paper_id] = rec

    if manifest is not None and manifest.record_count is not None and manifest.record_count != len(unique):
        logger.warning("manifest declares %d records, found %d", manifest.record_count, len(unique))

    graph = ScholarlyKnowledgeGraph()
    for pid in sorted(unique):
        rec = unique[pid]
        graph.add_entity(rec.paper_id, EntityKind.PUBLICATION, rec.title)
        graph.add_entity(rec.venue_id, EntityKind.VENUE, rec.venue_name)
        graph.add_edge(rec.paper_id, PropertyLabel.PUBLISHED_IN, rec.venue_id)
        graph.add_edge(rec.paper_id, PropertyLabel.YEAR, rec.year)
        for author_id, name in rec.authors:
            graph.add_entity(author_id, EntityKind.RESEARCHER, name)
            graph.add_edge(author_id, PropertyLabel.AUTHOR, rec.paper_id)
    return graph
