"""Community solvers over a thresholded relatedness set.

Two deterministic partitioners are provided:

``semantic``
    Greedy agglomeration. Triples are visited from the highest score down and
    the two communities holding the endpoints are merged when the merged
    community keeps a mean pairwise score of at least ``merge_floor``
    (missing pairs count as 0).

``kway``
    Balanced k-way min-cut. Farthest-first seeding, capacity-bounded greedy
    region growing, then single-vertex moves that lower the cut while every
    community stays inside the balance bounds.

Every tie is broken by entity-id order, so identical inputs always give the
same partition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, TextIO

import numpy as np

from .errors import EmptyRelatednessSet, KTooLarge
from .relatedness import RelatednessSet

__all__ = [
    "Community",
    "Partition",
    "PartitionerParams",
    "partition_semantic",
    "partition_kway",
    "run_partitioner",
    "total_cut_weight",
    "write_partition",
    "read_partition",
]


@dataclass(frozen=True)
class Community:
    id: int
    members: frozenset[str]

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class Partition:
    communities: tuple[Community, ...]
    universe: frozenset[str]

    def __post_init__(self):
        seen: set[str] = set()
        for c in self.communities:
            if not c.members:
                raise ValueError(f"community {c.id} is empty")
            if seen & c.members:
                raise ValueError("communities overlap")
            seen |= c.members
        if seen != self.universe:
            raise ValueError("communities do not cover the universe exactly")

    @classmethod
    def from_groups(cls, groups: Iterable[Iterable[str]], universe: Iterable[str] | None = None) -> "Partition":
        """Build a partition from member groups; ids follow smallest-member order.

        When ``universe`` is given, entities not in any group become singletons.
        """
        groups = [frozenset(g) for g in groups]
        groups = [g for g in groups if g]
        covered = frozenset().union(*groups) if groups else frozenset()
        if universe is not None:
            universe = frozenset(universe)
            groups += [frozenset([e]) for e in universe - covered]
        else:
            universe = covered
        groups.sort(key=min)
        return cls(tuple(Community(i, g) for i, g in enumerate(groups)), universe)

    @classmethod
    def from_labels(cls, labels: Mapping[str, object]) -> "Partition":
        groups: dict[object, set[str]] = {}
        for entity, label in labels.items():
            groups.setdefault(label, set()).add(entity)
        return cls.from_groups(groups.values(), labels.keys())

    def labels(self) -> dict[str, int]:
        return {m: c.id for c in self.communities for m in c.members}

    def groups(self) -> frozenset[frozenset[str]]:
        return frozenset(c.members for c in self.communities)

    def __len__(self):
        return len(self.communities)

    def __iter__(self):
        return iter(self.communities)


@dataclass(frozen=True)
class PartitionerParams:
    method: str = "semantic"
    k: int | None = None
    merge_floor: float | None = None
    seed: int = 0  # reserved; does not influence current partitioners
    balance_tolerance: float = 0.1
    max_refine_iters: int = 20


DEFAULT_MERGE_FLOOR = 0.5


# -- semantic agglomeration ---------------------------------------------------


def partition_semantic(sc: RelatednessSet, params: PartitionerParams | None = None) -> Partition:
    params = params or PartitionerParams()
    if not sc.universe:
        raise EmptyRelatednessSet("relatedness set has an empty universe")
    floor = params.merge_floor
    if floor is None:
        floor = sc.cutoff if sc.cutoff is not None else DEFAULT_MERGE_FLOOR
    if not 0.0 <= floor <= 1.0:
        raise ValueError(f"merge_floor must lie in [0, 1], got {floor}")

    adj = sc.neighbors()
    owner = {e: e for e in sc.universe}          # entity -> community key
    members = {e: {e} for e in sc.universe}     # key -> member set
    internal = {e: 0.0 for e in sc.universe}    # key -> sum of intra scores

    ordered = sorted(sc.scores.items(), key=lambda item: (-item[1], item[0]))
    for (a, b), _ in ordered:
        ka, kb = owner[a], owner[b]
        if ka == kb:
            continue
        small, large = (ka, kb) if len(members[ka]) <= len(members[kb]) else (kb, ka)
        cross = 0.0
        for m in sorted(members[small]):
            row = adj[m]
            cross += sum(row[x] for x in sorted(row) if owner[x] == large)
        size = len(members[ka]) + len(members[kb])
        total = internal[ka] + internal[kb] + cross
        if total / (size * (size - 1) / 2) < floor:
            continue
        keep, gone = (ka, kb) if ka < kb else (kb, ka)
        for m in members[gone]:
            owner[m] = keep
        members[keep] |= members.pop(gone)
        internal[keep] = total
        internal.pop(gone)
    return Partition.from_groups(members.values(), sc.universe)


# -- balanced k-way ------------------------------------------------------------


def _dense(sc: RelatednessSet) -> tuple[list[str], np.ndarray]:
    ids = sorted(sc.universe)
    index = {e: i for i, e in enumerate(ids)}
    w = np.zeros((len(ids), len(ids)))
    for (a, b), s in sc.scores.items():
        w[index[a], index[b]] = w[index[b], index[a]] = s
    return ids, w


def _balance_bounds(n: int, k: int, tol: float) -> tuple[int, int]:
    # integral sizes must remain feasible even when n/k*(1±tol) has no integer in it
    ideal = n / k
    hi = max(math.ceil(ideal), math.floor(ideal * (1 + tol) + 1e-12))
    lo = max(1, min(n // k, math.ceil(ideal * (1 - tol) - 1e-12)))
    return lo, hi


def total_cut_weight(sc: RelatednessSet, partition: Partition) -> float:
    labels = partition.labels()
    return math.fsum(s for (a, b), s in sc.scores.items() if labels[a] != labels[b])


def _seed(w: np.ndarray, k: int) -> list[int]:
    degree = w.sum(axis=1)
    n = len(degree)
    first = min(range(n), key=lambda i: (-degree[i], i))
    seeds = [first]
    closeness = w[first].copy()
    closeness[first] = np.inf
    while len(seeds) < k:
        nxt = min((i for i in range(n) if i not in seeds),
                  key=lambda i: (closeness[i], -degree[i], i))
        seeds.append(nxt)
        closeness = np.maximum(closeness, w[nxt])
        closeness[seeds] = np.inf
    return seeds


def _grow(w: np.ndarray, seeds: list[int], capacity: int, floor: int = 1) -> np.ndarray:
    n, k = len(w), len(seeds)
    label = np.full(n, -1)
    size = np.zeros(k, dtype=int)
    affinity = np.zeros((n, k))
    for r, s in enumerate(seeds):
        label[s] = r
        size[r] = 1
        affinity[:, r] += w[:, s]
    for step in range(n - k):
        open_regions = size < capacity
        # once the unassigned vertices are all needed to lift small regions
        # up to ``floor``, only those regions may grow
        short = size < floor
        if np.maximum(floor - size, 0).sum() >= n - k - step:
            open_regions &= short
        cand = affinity.copy()
        cand[label >= 0, :] = -np.inf
        cand[:, ~open_regions] = -np.inf
        best = cand.max()
        rows, cols = np.nonzero(cand == best)
        # ties: smallest region, then lowest entity index, then lowest region index
        v, r = min(zip(rows.tolist(), cols.tolist()), key=lambda vr: (size[vr[1]], vr[0], vr[1]))
        label[v] = r
        size[r] += 1
        affinity[:, r] += w[:, v]
    return label


def _refine(w: np.ndarray, label: np.ndarray, k: int, lo: int, hi: int, max_iters: int) -> np.ndarray:
    n = len(w)
    affinity = np.zeros((n, k))
    for r in range(k):
        affinity[:, r] = w[:, label == r].sum(axis=1)
    size = np.bincount(label, minlength=k)
    for _ in range(max_iters):
        moved = False
        for v in range(n):
            src = label[v]
            if size[src] - 1 < lo:
                continue
            gains = affinity[v] - affinity[v, src]
            best_r, best_gain = -1, 0.0
            for r in range(k):
                if r == src or size[r] + 1 > hi or affinity[v, r] <= 0:
                    continue
                if gains[r] > best_gain + 1e-15:
                    best_r, best_gain = r, gains[r]
            if best_r < 0:
                continue
            label[v] = best_r
            size[src] -= 1
            size[best_r] += 1
            affinity[:, src] -= w[:, v]
            affinity[:, best_r] += w[:, v]
            moved = True
        if not moved:
            break
    return label


def partition_kway(sc: RelatednessSet, params: PartitionerParams) -> Partition:
    n = len(sc.universe)
    k = params.k
    if k is None or k < 1:
        raise ValueError("kway partitioning needs k >= 1")
    if k > n:
        raise KTooLarge(f"k={k} exceeds the number of entities ({n})")
    ids, w = _dense(sc)
    if k == 1:
        return Partition.from_groups([ids], ids)
    lo, hi = _balance_bounds(n, k, params.balance_tolerance)
    seeds = _seed(w, k)
    label = _grow(w, seeds, capacity=math.ceil(n / k), floor=lo)
    label = _refine(w, label, k, lo, hi, params.max_refine_iters)
    groups = [[ids[i] for i in np.flatnonzero(label == r)] for r in range(k)]
    return Partition.from_groups(groups, ids)


def run_partitioner(sc: RelatednessSet, params: PartitionerParams) -> Partition:
    method = params.method.lower()
    if method == "semantic":
        return partition_semantic(sc, params)
    if method == "kway":
        return partition_kway(sc, params)
    raise ValueError(f"unknown partition method {params.method!r}")


# -- tab-separated I/O --------------------------------------------------------


def write_partition(partition: Partition, out: TextIO | None = None) -> str:
    rows = sorted((c.id, m) for c in partition for m in c.members)
    text = "".join(f"{cid}\t{m}\n" for cid, m in rows)
    if out is not None:
        out.write(text)
    return text


def read_partition(source: "str | Path | TextIO") -> Partition:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            return read_partition(fh)
    labels = {}
    for lineno, line in enumerate(source, start=1):
        line = line.rstrip("\r\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected community_id<TAB>entity_id")
        labels[parts[1]] = int(parts[0])
    return Partition.from_labels(labels)
