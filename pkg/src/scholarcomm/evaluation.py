"""Reproducible evaluation: temporal holdout, ranking metrics, planted partitions."""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, TextIO

import numpy as np

from .errors import DegenerateSplit, InvalidSpec, NoPredictions
from .graph import CoAuthorNetwork, EntityKind, ScholarlyKnowledgeGraph, derive_co_author_network
from .ingest import PublicationRecord, build_graph
from .partition import Partition
from .predict import PredictedNetwork
from .relatedness import RelatednessSet

__all__ = [
    "HoldoutSplit",
    "RankingReport",
    "PlantedSpec",
    "temporal_split",
    "rank_eval",
    "generate_planted",
    "adjusted_rand",
]


@dataclass(frozen=True)
class HoldoutSplit:
    cutoff_year: int
    train_graph: ScholarlyKnowledgeGraph
    observed: CoAuthorNetwork
    future_edges: frozenset[tuple[str, str]]
    train_records: tuple[PublicationRecord, ...]
    test_records: tuple[PublicationRecord, ...]

    @property
    def n_candidates(self) -> int:
        """Researcher pairs of the training graph that are not co-authors yet."""
        return comb(len(self.observed.researchers), 2) - len(self.observed)

    def is_candidate(self, pair: tuple[str, str]) -> bool:
        a, b = pair
        return (a != b and a in self.observed.researchers and b in self.observed.researchers
                and not self.observed.has_edge(a, b))


def _pairs(record: PublicationRecord) -> set[tuple[str, str]]:
    return set(combinations(sorted(record.author_ids()), 2))


def temporal_split(records: Iterable[PublicationRecord], cutoff_year: int) -> HoldoutSplit:
    """Train on records up to and including ``cutoff_year``; test on later ones.

    ``future_edges`` holds the author pairs of the later records that were
    not already co-authors in the training part.
    """
    records = list(records)
    train = tuple(r for r in records if r.year <= cutoff_year)
    test = tuple(r for r in records if r.year > cutoff_year)
    if not train or not test:
        side = "training" if not train else "test"
        raise DegenerateSplit(f"cutoff {cutoff_year} leaves the {side} side empty")
    graph = build_graph(train)
    observed = derive_co_author_network(graph)
    future: set[tuple[str, str]] = set()
    for rec in test:
        future |= _pairs(rec)
    future -= observed.pairs()
    return HoldoutSplit(cutoff_year, graph, observed, frozenset(future), train, test)


@dataclass(frozen=True)
class RankingReport:
    k: int
    precision_at_k: float
    recall_at_k: float
    random_baseline: float
    hits: int = 0
    n_future: int = 0
    n_candidates: int = 0

    @property
    def lift(self) -> float:
        return self.precision_at_k / self.random_baseline if self.random_baseline else float("inf")

    HEADER = ("k", "precision_at_k", "recall_at_k", "random_baseline", "hits", "n_future", "n_candidates")

    def to_csv(self, header: bool = True, out: TextIO | None = None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if header:
            writer.writerow(self.HEADER)
        writer.writerow([self.k, repr(self.precision_at_k), repr(self.recall_at_k),
                         repr(self.random_baseline), self.hits, self.n_future, self.n_candidates])
        if out is not None:
            out.write(buf.getvalue())
        return buf.getvalue()


def rank_eval(predictions: PredictedNetwork, split: HoldoutSplit, k: int) -> RankingReport:
    """Precision and recall of the top-``k`` predictions against future co-authorships.

    The random baseline is the expected precision of a uniformly drawn
    candidate pair, i.e. the share of future edges among all pairs of the
    training researchers that are not co-authors yet.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(predictions) == 0:
        raise NoPredictions("no predictions to rank")
    future = split.future_edges
    hits = sum(1 for r in predictions.top(k) if r.pair in future)
    reachable = sum(1 for p in future if split.is_candidate(p))
    n_cand = split.n_candidates
    return RankingReport(
        k=k,
        precision_at_k=hits / k,
        recall_at_k=hits / len(future) if future else 0.0,
        random_baseline=reachable / n_cand if n_cand else 0.0,
        hits=hits,
        n_future=len(future),
        n_candidates=n_cand,
    )


@dataclass(frozen=True)
class PlantedSpec:
    n_entities: int
    n_communities: int
    intra_score_range: tuple[float, float] = (0.7, 0.9)
    inter_score_range: tuple[float, float] = (0.0, 0.2)
    seed: int = 0

    def validate(self) -> None:
        if self.n_entities < 1 or not 1 <= self.n_communities <= self.n_entities:
            raise InvalidSpec("need 1 <= n_communities <= n_entities")
        for lo, hi in (self.intra_score_range, self.inter_score_range):
            if not 0.0 <= lo <= hi <= 1.0:
                raise InvalidSpec(f"score range ({lo}, {hi}) must satisfy 0 <= lo <= hi <= 1")
        if self.intra_score_range[0] <= self.inter_score_range[1]:
            raise InvalidSpec("intra scores must lie strictly above inter scores")


def generate_planted(spec: PlantedSpec) -> tuple[RelatednessSet, Partition]:
    """Scores with a planted community structure and the structure itself.

    Entities are assigned to communities of near-equal size through a seeded
    random permutation, so community membership is unrelated to id order.
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    n, c = spec.n_entities, spec.n_communities
    width = len(str(n - 1))
    ids = [f"e{i:0{width}d}" for i in range(n)]
    label = np.empty(n, dtype=int)
    label[rng.permutation(n)] = np.arange(n) * c // n
    scores = {}
    for i, j in combinations(range(n), 2):
        lo, hi = spec.intra_score_range if label[i] == label[j] else spec.inter_score_range
        s = float(rng.uniform(lo, hi)) if hi > lo else lo
        if s > 0:
            scores[(ids[i], ids[j])] = s
    sc = RelatednessSet(EntityKind.RESEARCHER, scores, frozenset(ids))
    truth = Partition.from_labels({ids[i]: int(label[i]) for i in range(n)})
    return sc, truth


def adjusted_rand(found: Partition, truth: Partition) -> float:
    """Adjusted Rand index of two partitions, over the entities they share."""
    shared = found.universe & truth.universe
    fl, tl = found.labels(), truth.labels()
    table = Counter((fl[e], tl[e]) for e in shared)
    rows = Counter(fl[e] for e in shared)
    cols = Counter(tl[e] for e in shared)
    index = sum(comb(v, 2) for v in table.values())
    a = sum(comb(v, 2) for v in rows.values())
    b = sum(comb(v, 2) for v in cols.values())
    total = comb(len(shared), 2)
    if total == 0:
        return 1.0
    expected = a * b / total
    top = (a + b) / 2
    if top == expected:
        return 1.0
    return (index - expected) / (top - expected)
