"""Same-type relatedness: scored entity pairs and percentile thresholding.

A :class:`RelatednessSet` is a sparse symmetric score table over one entity
kind. Pairs that are absent score 0. Scores come from one of four sources:

* ``simr``     -- researcher overlap on a focus venue series, normalised by
                  the union of their full publication lists;
* ``simc``     -- Jaccard index of the author sets of two venues;
* ``path``     -- number of short simple paths through author/venue edges;
* ``external`` -- any scored-pair file produced elsewhere.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, TextIO

from .errors import EmptyRelatednessSet, MethodKindMismatch, UnknownEntity, WrongKind
from .graph import EntityKind, ScholarlyKnowledgeGraph, canonical_pair

__all__ = [
    "RelatednessTriple",
    "RelatednessSet",
    "sim_r",
    "sim_c",
    "path_relatedness",
    "compute_sc",
    "percentile_cutoff",
    "percentile_threshold",
    "read_scores",
    "write_sc",
    "read_sc",
]

METHODS = ("simr", "simc", "path", "external")


class RelatednessTriple(NamedTuple):
    left: str
    right: str
    score: float


@dataclass(frozen=True)
class RelatednessSet:
    """Scored unordered pairs over a universe of same-kind entities.

    ``universe`` lists every entity that downstream partitioning must cover,
    including entities that have no positive score with anybody. ``cutoff``
    records the percentile cutoff when the set is the output of
    :func:`percentile_threshold`.
    """

    entity_kind: EntityKind
    scores: dict[tuple[str, str], float]
    universe: frozenset[str] = frozenset()
    cutoff: float | None = None
    percentile: int | None = None

    def __post_init__(self):
        endpoints = {e for pair in self.scores for e in pair}
        object.__setattr__(self, "universe", frozenset(self.universe) | endpoints)

    @classmethod
    def from_triples(cls, kind, triples: Iterable, universe: Iterable[str] = ()) -> "RelatednessSet":
        kind = EntityKind.parse(kind)
        scores: dict[tuple[str, str], float] = {}
        for left, right, score in triples:
            if left == right:
                raise ValueError(f"self-pair {left!r} in relatedness triples")
            score = float(score)
            if not math.isfinite(score) or not 0.0 <= score <= 1.0:
                raise ValueError(f"score for ({left}, {right}) outside [0, 1]: {score}")
            pair = canonical_pair(left, right)
            if pair in scores and scores[pair] != score:
                raise ValueError(f"conflicting scores for pair {pair}")
            if score > 0:
                scores[pair] = score
        return cls(kind, dict(sorted(scores.items())), frozenset(universe))

    def score(self, a: str, b: str) -> float:
        return self.scores.get(canonical_pair(a, b), 0.0)

    def __len__(self):
        return len(self.scores)

    def __iter__(self) -> Iterator[RelatednessTriple]:
        for (a, b), s in sorted(self.scores.items()):
            yield RelatednessTriple(a, b, s)

    def __contains__(self, pair) -> bool:
        return canonical_pair(*pair) in self.scores

    def pairs(self) -> frozenset[tuple[str, str]]:
        return frozenset(self.scores)

    def neighbors(self) -> dict[str, dict[str, float]]:
        adj: dict[str, dict[str, float]] = {e: {} for e in self.universe}
        for (a, b), s in self.scores.items():
            adj[a][b] = s
            adj[b][a] = s
        return adj

    def restrict(self, keep: Iterable[tuple[str, str]], **changes) -> "RelatednessSet":
        keep = set(keep)
        scores = {p: s for p, s in self.scores.items() if p in keep}
        return RelatednessSet(self.entity_kind, scores, self.universe,
                              changes.get("cutoff", self.cutoff),
                              changes.get("percentile", self.percentile))


# -- similarity measures ------------------------------------------------------


def _check(graph: ScholarlyKnowledgeGraph, entity: str, kind: EntityKind) -> None:
    actual = graph.kind_of(entity)
    if actual is not kind:
        raise WrongKind(f"{entity!r} is a {actual.value}, expected {kind.value}")


def sim_r(graph: ScholarlyKnowledgeGraph, r_i: str, r_j: str, focus_series: Iterable[str]) -> float:
    """Shared focus-series papers over the union of both researchers' papers.

    ``|PC_i & PC_j| / |TP_i | TP_j|`` where PC restricts to venues in
    ``focus_series`` and TP is the full publication list; 0 when neither
    researcher has any paper.
    """
    _check(graph, r_i, EntityKind.RESEARCHER)
    _check(graph, r_j, EntityKind.RESEARCHER)
    focus = frozenset(focus_series)
    total = graph.papers_of(r_i) | graph.papers_of(r_j)
    if not total:
        return 0.0
    shared = graph.papers_of(r_i, focus) & graph.papers_of(r_j, focus)
    return len(shared) / len(total)


def sim_c(graph: ScholarlyKnowledgeGraph, c_i: str, c_j: str) -> float:
    """Jaccard index of the author sets of two venues."""
    _check(graph, c_i, EntityKind.VENUE)
    _check(graph, c_j, EntityKind.VENUE)
    a, b = graph.researchers_at(c_i), graph.researchers_at(c_j)
    union = a | b
    if not union:
        return 0.0
    return len(a & b) / len(union)


def _count_paths_from(graph: ScholarlyKnowledgeGraph, source: str, kind: EntityKind,
                      max_len: int) -> dict[str, int]:
    counts: dict[str, int] = defaultdict(int)
    on_path = {source}

    def walk(node: str, depth: int) -> None:
        if depth == max_len:
            return
        for nxt in graph.neighbors(node):
            if nxt in on_path:
                continue
            if nxt > source and graph.kind_of(nxt) is kind:
                counts[nxt] += 1
            on_path.add(nxt)
            walk(nxt, depth + 1)
            on_path.discard(nxt)

    walk(source, 0)
    return counts


def path_relatedness(graph: ScholarlyKnowledgeGraph, kind, max_len: int = 2) -> RelatednessSet:
    """Relatedness from the number of simple paths of length <= ``max_len``.

    Paths run over ``author`` and ``published-in`` edges in either
    direction. Raw counts are divided by the largest count, so the best
    connected pair scores exactly 1.
    """
    kind = EntityKind.parse(kind)
    if max_len not in (2, 4):
        raise ValueError(f"max_len must be 2 or 4, got {max_len}")
    raw: dict[tuple[str, str], int] = {}
    for source in sorted(graph.entities(kind)):
        for target, n in _count_paths_from(graph, source, kind, max_len).items():
            raw[(source, target)] = n
    top = max(raw.values(), default=0)
    scores = {pair: n / top for pair, n in sorted(raw.items())} if top else {}
    return RelatednessSet(kind, scores, graph.entities(kind))


def compute_sc(graph: ScholarlyKnowledgeGraph, kind, method: str, *,
               focus_series: Iterable[str] | None = None,
               venues: Iterable[str] | None = None,
               max_len: int = 2,
               scores: Iterable | None = None,
               scores_path: "str | Path | None" = None) -> RelatednessSet:
    """Score every same-kind pair with ``method``; zero-score pairs are dropped.

    ``focus_series`` is required for ``simr``. ``venues`` optionally limits
    the ``simc`` universe. ``external`` takes triples from ``scores`` or from
    a tab-separated file at ``scores_path``.
    """
    kind = EntityKind.parse(kind)
    method = method.lower()
    if method not in METHODS:
        raise ValueError(f"unknown relatedness method {method!r}; choose from {METHODS}")
    if method == "simr" and kind is not EntityKind.RESEARCHER:
        raise MethodKindMismatch("simr scores researchers only")
    if method == "simc" and kind is not EntityKind.VENUE:
        raise MethodKindMismatch("simc scores venues only")

    if method == "path":
        return path_relatedness(graph, kind, max_len)

    universe = graph.entities(kind)
    out: dict[tuple[str, str], float] = {}

    if method == "simr":
        if focus_series is None:
            raise ValueError("simr needs a focus venue series")
        focus = frozenset(focus_series)
        if not focus:
            raise ValueError("focus venue series is empty")
        candidates = set()
        for venue in sorted(focus & graph.entities(EntityKind.VENUE)):
            for paper in graph.publications_at(venue):
                candidates.update(combinations(sorted(graph.authors_of(paper)), 2))
        for a, b in sorted(candidates):
            s = sim_r(graph, a, b, focus)
            if s > 0:
                out[(a, b)] = s

    elif method == "simc":
        if venues is not None:
            universe = frozenset(venues)
            for v in universe:
                _check(graph, v, EntityKind.VENUE)
        by_researcher = defaultdict(set)
        for v in universe:
            for r in graph.researchers_at(v):
                by_researcher[r].add(v)
        candidates = set()
        for vs in by_researcher.values():
            candidates.update(combinations(sorted(vs), 2))
        for a, b in sorted(candidates):
            s = sim_c(graph, a, b)
            if s > 0:
                out[(a, b)] = s

    else:
        if scores is None and scores_path is None:
            raise ValueError("external method needs scores or scores_path")
        triples = list(scores) if scores is not None else read_scores(scores_path)
        imported = RelatednessSet.from_triples(kind, triples)
        for e in imported.universe:
            if e not in graph:
                raise UnknownEntity(f"external score refers to unknown entity {e!r}")
            _check(graph, e, kind)
        out = dict(imported.scores)

    return RelatednessSet(kind, out, universe)


# -- percentile thresholding --------------------------------------------------


def percentile_cutoff(values: Iterable[float], p: int) -> float:
    """Nearest-rank percentile: the value at rank ceil(p/100 * n), ascending."""
    if isinstance(p, bool) or not isinstance(p, int) or not 1 <= p <= 99:
        raise ValueError(f"percentile must be an integer in [1, 99], got {p!r}")
    ordered = sorted(values)
    if not ordered:
        raise EmptyRelatednessSet("cannot take a percentile of no scores")
    rank = -(-p * len(ordered) // 100)
    return ordered[rank - 1]


def percentile_threshold(sc: RelatednessSet, p: int) -> RelatednessSet:
    """Keep the pairs scoring at or above the nearest-rank ``p``-th percentile."""
    positive = [s for s in sc.scores.values() if s > 0]
    if not positive:
        raise EmptyRelatednessSet("relatedness set has no positive scores")
    cut = percentile_cutoff(positive, p)
    keep = [pair for pair, s in sc.scores.items() if s >= cut]
    return sc.restrict(keep, cutoff=cut, percentile=p)


# -- tab-separated I/O --------------------------------------------------------


def read_scores(source: "str | Path | TextIO") -> list[RelatednessTriple]:
    """Read ``left<TAB>right<TAB>score`` lines. Blank and ``#`` lines are skipped."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            return read_scores(fh)
    out = []
    for lineno, line in enumerate(source, start=1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 3 tab-separated fields, got {len(parts)}")
        out.append(RelatednessTriple(parts[0], parts[1], float(parts[2])))
    return out


def write_sc(sc: RelatednessSet, out: TextIO | None = None) -> str:
    text = "".join(f"{a}\t{b}\t{s!r}\n" for a, b, s in sc)
    if out is not None:
        out.write(text)
    return text


def read_sc(source: "str | Path | TextIO", kind=EntityKind.RESEARCHER,
            universe: Iterable[str] = ()) -> RelatednessSet:
    return RelatednessSet.from_triples(kind, read_scores(source), universe)
