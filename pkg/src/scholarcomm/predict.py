"""Homophily-based co-author prediction inside communities.

Every pair of members of one community that are not already co-authors is
proposed as a new relation. Its weight of connectivity aggregates the
relatedness scores found among the community's members; by default the
aggregate runs over the whole community, so all predictions of a community
share one weight.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, TextIO

from .errors import UniverseMismatch
from .graph import CoAuthorNetwork, canonical_pair
from .partition import Community, Partition
from .relatedness import RelatednessSet

__all__ = [
    "Aggregator",
    "PredictedRelation",
    "PredictedNetwork",
    "connectivity_weight",
    "generate_patterns",
    "write_predictions",
    "read_predictions",
]


class Aggregator(str, enum.Enum):
    AVERAGE = "avg"
    MINIMUM = "min"
    PRODUCT = "product"

    @classmethod
    def parse(cls, value: "str | Aggregator") -> "Aggregator":
        if isinstance(value, cls):
            return value
        aliases = {"average": cls.AVERAGE, "mean": cls.AVERAGE, "minimum": cls.MINIMUM, "prod": cls.PRODUCT}
        value = value.lower()
        if value in aliases:
            return aliases[value]
        return cls(value)

    def __call__(self, scores: Iterable[float]) -> float:
        scores = list(scores)
        if not scores:
            return 0.0
        if self is Aggregator.AVERAGE:
            return math.fsum(scores) / len(scores)
        if self is Aggregator.MINIMUM:
            return min(scores)
        return math.prod(scores)


@dataclass(frozen=True, order=True)
class PredictedRelation:
    left: str
    right: str
    weight: float
    community_id: int

    @property
    def pair(self) -> tuple[str, str]:
        return (self.left, self.right)


@dataclass(frozen=True)
class PredictedNetwork:
    relations: tuple[PredictedRelation, ...]

    def __post_init__(self):
        ordered = tuple(sorted(self.relations, key=lambda r: (-r.weight, r.left, r.right)))
        pairs = [r.pair for r in ordered]
        if len(set(pairs)) != len(pairs):
            raise ValueError("duplicate pairs in predicted network")
        object.__setattr__(self, "relations", ordered)

    def __len__(self):
        return len(self.relations)

    def __iter__(self):
        return iter(self.relations)

    def pairs(self) -> list[tuple[str, str]]:
        return [r.pair for r in self.relations]

    def top(self, k: int) -> list[PredictedRelation]:
        return list(self.relations[:k])


def _scores_within(members: frozenset[str], sc: RelatednessSet) -> list[float]:
    return [sc.scores[p] for p in combinations(sorted(members), 2) if p in sc.scores]


def connectivity_weight(community: "Community | Iterable[str]", sc: RelatednessSet,
                        f: "Aggregator | str" = Aggregator.AVERAGE,
                        pair: tuple[str, str] | None = None) -> float:
    """Aggregate of the relatedness scores among a community's members.

    With ``pair`` given, only scores incident to either endpoint of the pair
    (and to another member) are aggregated instead of the whole community.
    """
    f = Aggregator.parse(f)
    members = community.members if isinstance(community, Community) else frozenset(community)
    if pair is None:
        return f(_scores_within(members, sc))
    ends = set(pair)
    scores = [sc.scores[p] for p in combinations(sorted(members), 2)
              if p in sc.scores and ends & set(p)]
    return f(scores)


def generate_patterns(partition: Partition, sc: RelatednessSet, observed: CoAuthorNetwork,
                      f: "Aggregator | str" = Aggregator.AVERAGE, min_weight: float = 0.0,
                      pair_local: bool = False) -> PredictedNetwork:
    """Propose every non-observed intra-community pair, weighted and filtered."""
    f = Aggregator.parse(f)
    stray = partition.universe - observed.researchers
    if stray:
        raise UniverseMismatch(
            f"{len(stray)} partitioned entities are not researchers of the observed network, "
            f"e.g. {min(stray)!r}"
        )
    out = []
    for community in partition:
        if len(community) < 2:
            continue
        shared = None if pair_local else connectivity_weight(community, sc, f)
        for a, b in combinations(sorted(community.members), 2):
            if observed.has_edge(a, b):
                continue
            weight = shared if shared is not None else connectivity_weight(community, sc, f, (a, b))
            if weight < min_weight:
                continue
            left, right = canonical_pair(a, b)
            out.append(PredictedRelation(left, right, weight, community.id))
    return PredictedNetwork(tuple(out))


def write_predictions(network: PredictedNetwork, out: TextIO | None = None) -> str:
    text = "".join(f"{r.left}\t{r.right}\t{r.weight!r}\t{r.community_id}\n" for r in network)
    if out is not None:
        out.write(text)
    return text


def read_predictions(source: "str | Path | TextIO") -> PredictedNetwork:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            return read_predictions(fh)
    rels = []
    for line in source:
        if not line.strip():
            continue
        left, right, weight, cid = line.rstrip("\r\n").split("\t")
        rels.append(PredictedRelation(left, right, float(weight), int(cid)))
    return PredictedNetwork(tuple(rels))
