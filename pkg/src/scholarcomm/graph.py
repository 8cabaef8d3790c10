"""Typed scholarly knowledge graph and the co-author network derived from it.

The graph holds three kinds of entities (researchers, publications, venues)
connected by a closed vocabulary of properties. Only integer publication
years are stored as literals; everything else descriptive (titles, display
names) is metadata and never participates in computation.
"""

from __future__ import annotations

import enum
import io
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, NamedTuple, TextIO

from .errors import (
    DuplicateEntity,
    KindViolation,
    UnknownEntity,
    UnknownProperty,
    WrongKind,
)

__all__ = [
    "EntityKind",
    "PropertyLabel",
    "Edge",
    "ScholarlyKnowledgeGraph",
    "CoAuthorNetwork",
    "canonical_pair",
    "derive_co_author_network",
    "papers_of",
    "write_triples",
]


class EntityKind(str, enum.Enum):
    RESEARCHER = "Researcher"
    PUBLICATION = "Publication"
    VENUE = "Venue"

    @classmethod
    def parse(cls, value: "str | EntityKind") -> "EntityKind":
        if isinstance(value, cls):
            return value
        for kind in cls:
            if value.lower() in (kind.value.lower(), kind.name.lower()):
                return kind
        raise ValueError(f"unknown entity kind {value!r}")


class PropertyLabel(str, enum.Enum):
    AUTHOR = "author"
    CO_AUTHOR = "co-author"
    PUBLISHED_IN = "published-in"
    YEAR = "year"
    RDF_TYPE = "rdf-type"

    @classmethod
    def parse(cls, value: "str | PropertyLabel") -> "PropertyLabel":
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            raise UnknownProperty(f"unknown property label {value!r}") from None


# (subject kind, object kind) for entity-valued properties
_SIGNATURES = {
    PropertyLabel.AUTHOR: (EntityKind.RESEARCHER, EntityKind.PUBLICATION),
    PropertyLabel.PUBLISHED_IN: (EntityKind.PUBLICATION, EntityKind.VENUE),
    PropertyLabel.CO_AUTHOR: (EntityKind.RESEARCHER, EntityKind.RESEARCHER),
}


class Edge(NamedTuple):
    subject: str
    property: PropertyLabel
    object: "str | int"


def canonical_pair(a: str, b: str) -> tuple[str, str]:
    """Order an unordered pair of ids under the package-wide total order."""
    return (a, b) if a < b else (b, a)


class ScholarlyKnowledgeGraph:
    """Append-only typed graph of researchers, publications and venues.

    Entities are registered with :meth:`add_entity` and connected with
    :meth:`add_edge`. Kind constraints are enforced on insertion, so a graph
    that was built without raising is always consistent. Adjacency indices
    are kept alongside the edge set; counts are O(1).
    """

    def __init__(self):
        self._kinds: dict[str, EntityKind] = {}
        self._names: dict[str, str] = {}
        self._edges: set[Edge] = set()
        self._by_kind: dict[EntityKind, set[str]] = {k: set() for k in EntityKind}
        self._papers: dict[str, set[str]] = defaultdict(set)
        self._authors: dict[str, set[str]] = defaultdict(set)
        self._venue_of: dict[str, str] = {}
        self._venue_papers: dict[str, set[str]] = defaultdict(set)
        self._year_of: dict[str, int] = {}

    # -- construction ---------------------------------------------------

    def add_entity(self, entity_id: str, kind: "EntityKind | str", name: str = "") -> "ScholarlyKnowledgeGraph":
        if not isinstance(entity_id, str) or not entity_id:
            raise ValueError("entity ids must be non-empty strings")
        kind = EntityKind.parse(kind)
        existing = self._kinds.get(entity_id)
        if existing is not None:
            if existing is not kind:
                raise DuplicateEntity(
                    f"{entity_id!r} already registered as {existing.value}, not {kind.value}"
                )
            return self
        self._kinds[entity_id] = kind
        self._names[entity_id] = name or entity_id
        self._by_kind[kind].add(entity_id)
        return self

    def add_edge(self, subject: str, prop: "PropertyLabel | str", obj: "str | int") -> "ScholarlyKnowledgeGraph":
        prop = PropertyLabel.parse(prop)
        subject_kind = self.kind_of(subject)

        if prop is PropertyLabel.YEAR:
            if subject_kind is not EntityKind.PUBLICATION:
                raise KindViolation(f"year attaches to publications, not {subject_kind.value}")
            if isinstance(obj, bool) or not isinstance(obj, int):
                raise KindViolation(f"year must be an integer literal, got {obj!r}")
            current = self._year_of.get(subject)
            if current is not None and current != obj:
                raise KindViolation(f"{subject!r} already has year {current}")
            self._year_of[subject] = obj
            self._edges.add(Edge(subject, prop, obj))
            return self

        if prop is PropertyLabel.RDF_TYPE:
            # types are implied by add_entity; only a consistent restatement is accepted
            if EntityKind.parse(str(obj)) is not subject_kind:
                raise KindViolation(f"{subject!r} is a {subject_kind.value}, not {obj!r}")
            return self

        if not isinstance(obj, str):
            raise KindViolation(f"{prop.value} expects an entity reference, got {obj!r}")
        object_kind = self.kind_of(obj)
        want_subject, want_object = _SIGNATURES[prop]
        if subject_kind is not want_subject or object_kind is not want_object:
            raise KindViolation(
                f"{prop.value} connects {want_subject.value} -> {want_object.value}, "
                f"got {subject_kind.value} -> {object_kind.value}"
            )
        if prop is PropertyLabel.CO_AUTHOR and subject == obj:
            raise KindViolation("co-author edges are irreflexive")
        if prop is PropertyLabel.PUBLISHED_IN:
            current = self._venue_of.get(subject)
            if current is not None and current != obj:
                raise KindViolation(f"{subject!r} is already published in {current!r}")

        edge = Edge(subject, prop, obj)
        if edge in self._edges:
            return self
        self._edges.add(edge)
        if prop is PropertyLabel.AUTHOR:
            self._papers[subject].add(obj)
            self._authors[obj].add(subject)
        elif prop is PropertyLabel.PUBLISHED_IN:
            self._venue_of[subject] = obj
            self._venue_papers[obj].add(subject)
        return self

    # -- queries ----------------------------------------------------------

    def __contains__(self, entity_id: object) -> bool:
        return entity_id in self._kinds

    def kind_of(self, entity_id: str) -> EntityKind:
        try:
            return self._kinds[entity_id]
        except KeyError:
            raise UnknownEntity(f"unknown entity {entity_id!r}") from None

    def name_of(self, entity_id: str) -> str:
        self.kind_of(entity_id)
        return self._names[entity_id]

    def entities(self, kind: "EntityKind | str | None" = None) -> frozenset[str]:
        if kind is None:
            return frozenset(self._kinds)
        return frozenset(self._by_kind[EntityKind.parse(kind)])

    def count(self, kind: "EntityKind | str | None" = None) -> int:
        if kind is None:
            return len(self._kinds)
        return len(self._by_kind[EntityKind.parse(kind)])

    @property
    def n_edges(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> frozenset[Edge]:
        return frozenset(self._edges)

    @property
    def display_names(self) -> dict[str, str]:
        return dict(self._names)

    def _require(self, entity_id: str, kind: EntityKind) -> None:
        actual = self.kind_of(entity_id)
        if actual is not kind:
            raise WrongKind(f"{entity_id!r} is a {actual.value}, expected {kind.value}")

    def papers_of(self, researcher: str, venue_filter: "Iterable[str] | None" = None) -> frozenset[str]:
        self._require(researcher, EntityKind.RESEARCHER)
        papers = self._papers.get(researcher, set())
        if venue_filter is None:
            return frozenset(papers)
        venues = set(venue_filter)
        return frozenset(p for p in papers if self._venue_of.get(p) in venues)

    def authors_of(self, publication: str) -> frozenset[str]:
        self._require(publication, EntityKind.PUBLICATION)
        return frozenset(self._authors.get(publication, ()))

    def venue_of(self, publication: str) -> "str | None":
        self._require(publication, EntityKind.PUBLICATION)
        return self._venue_of.get(publication)

    def year_of(self, publication: str) -> "int | None":
        self._require(publication, EntityKind.PUBLICATION)
        return self._year_of.get(publication)

    def publications_at(self, venue: str) -> frozenset[str]:
        self._require(venue, EntityKind.VENUE)
        return frozenset(self._venue_papers.get(venue, ()))

    def researchers_at(self, venue: str) -> frozenset[str]:
        """Researchers with at least one publication at ``venue``."""
        out: set[str] = set()
        for paper in self.publications_at(venue):
            out |= self._authors.get(paper, set())
        return frozenset(out)

    def neighbors(self, entity_id: str) -> Iterator[str]:
        """Entities adjacent through ``author`` or ``published-in`` edges, either direction."""
        kind = self.kind_of(entity_id)
        if kind is EntityKind.RESEARCHER:
            yield from self._papers.get(entity_id, ())
        elif kind is EntityKind.PUBLICATION:
            yield from self._authors.get(entity_id, ())
            venue = self._venue_of.get(entity_id)
            if venue is not None:
                yield venue
        else:
            yield from self._venue_papers.get(entity_id, ())

    def __repr__(self):
        counts = ", ".join(f"{k.value.lower()}s={len(v)}" for k, v in self._by_kind.items())
        return f"<ScholarlyKnowledgeGraph {counts}, edges={len(self._edges)}>"


@dataclass(frozen=True)
class CoAuthorNetwork:
    """Researcher-only network; each unordered pair maps to its shared papers."""

    researchers: frozenset[str]
    edges: dict[tuple[str, str], frozenset[str]] = field(default_factory=dict)

    def has_edge(self, a: str, b: str) -> bool:
        return canonical_pair(a, b) in self.edges

    def shared(self, a: str, b: str) -> frozenset[str]:
        return self.edges.get(canonical_pair(a, b), frozenset())

    def pairs(self) -> frozenset[tuple[str, str]]:
        return frozenset(self.edges)

    def __len__(self):
        return len(self.edges)


def derive_co_author_network(graph: ScholarlyKnowledgeGraph) -> CoAuthorNetwork:
    shared: dict[tuple[str, str], set[str]] = defaultdict(set)
    for paper in graph.entities(EntityKind.PUBLICATION):
        for a, b in combinations(sorted(graph.authors_of(paper)), 2):
            shared[(a, b)].add(paper)
    edges = {pair: frozenset(papers) for pair, papers in sorted(shared.items())}
    return CoAuthorNetwork(graph.entities(EntityKind.RESEARCHER), edges)


def papers_of(graph: ScholarlyKnowledgeGraph, researcher: str,
              venue_filter: "Iterable[str] | None" = None) -> frozenset[str]:
    return graph.papers_of(researcher, venue_filter)


def triple_lines(graph: ScholarlyKnowledgeGraph) -> list[str]:
    lines = [f"{e}\t{PropertyLabel.RDF_TYPE.value}\t{graph.kind_of(e).value}" for e in graph.entities()]
    lines += [f"{e.subject}\t{e.property.value}\t{e.object}" for e in graph.edges]
    return sorted(lines)


def write_triples(graph: ScholarlyKnowledgeGraph, out: "TextIO | None" = None) -> str:
    """Tab-separated ``subject property object`` lines, sorted; returns the text."""
    text = "".join(line + "\n" for line in triple_lines(graph))
    if out is not None:
        out.write(text)
    return text


def read_triples(source: "TextIO | str") -> ScholarlyKnowledgeGraph:
    """Inverse of :func:`write_triples`."""
    if isinstance(source, str):
        source = io.StringIO(source)
    rows = [line.rstrip("\n").split("\t") for line in source if line.strip()]
    graph = ScholarlyKnowledgeGraph()
    for s, p, o in rows:
        if p == PropertyLabel.RDF_TYPE.value:
            graph.add_entity(s, o)
    for s, p, o in rows:
        if p == PropertyLabel.YEAR.value:
            graph.add_edge(s, p, int(o))
        elif p != PropertyLabel.RDF_TYPE.value:
            graph.add_edge(s, p, o)
    return graph
