"""Partition quality measures on a weighted similarity graph.

All five measures are reported so that higher is better and the value lies
in [0, 1]: inverse conductance, coverage, modularity rescaled from
[-0.5, 1], performance, and inverse normalised total cut.

Note that with these definitions coverage and inverse normalised total cut
coincide: intra-community weight plus inter-community weight is the total.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, fields
from typing import Iterable, TextIO

import numpy as np

from .errors import EmptyPartition
from .partition import Partition
from .relatedness import RelatednessSet

__all__ = [
    "PartitionQualityReport",
    "conductance",
    "coverage",
    "modularity",
    "raw_modularity",
    "performance",
    "total_cut",
    "evaluate",
    "REPORT_HEADER",
    "write_report_csv",
]

REPORT_HEADER = ("method", "percentile", "inv_conductance", "coverage",
                 "scaled_modularity", "performance", "inv_norm_total_cut")


def _matrices(sc: RelatednessSet, partition: Partition) -> tuple[np.ndarray, np.ndarray]:
    if not partition.communities:
        raise EmptyPartition("partition has no communities")
    missing = sc.universe - partition.universe
    if missing:
        raise ValueError(f"partition does not cover {len(missing)} scored entities, e.g. {min(missing)!r}")
    ids = sorted(partition.universe)
    index = {e: i for i, e in enumerate(ids)}
    w = np.zeros((len(ids), len(ids)))
    for (a, b), s in sc.scores.items():
        w[index[a], index[b]] = w[index[b], index[a]] = s
    labels = partition.labels()
    return w, np.array([labels[e] for e in ids])


def _split(w: np.ndarray, labels: np.ndarray) -> tuple[float, float, float]:
    """(intra, inter, total) weight over unordered pairs."""
    same = labels[:, None] == labels[None, :]
    upper = np.triu(np.ones_like(w, dtype=bool), k=1)
    return float(w[same & upper].sum()), float(w[~same & upper].sum()), float(w[upper].sum())


def conductance(sc: RelatednessSet, partition: Partition, aggregate: str = "mean") -> float:
    """One minus the mean (or max) conductance over communities with a boundary.

    A community S is eligible when 0 < vol(S) < vol(V); its conductance is
    cut(S) / min(vol(S), vol(V - S)). With no eligible community the
    conductance is 0 and 1 is returned.
    """
    w, labels = _matrices(sc, partition)
    degree = w.sum(axis=1)
    vol_all = degree.sum()
    values = []
    for c in np.unique(labels):
        inside = labels == c
        vol = degree[inside].sum()
        if not 0 < vol < vol_all:
            continue
        cut = w[np.ix_(inside, ~inside)].sum()
        values.append(cut / min(vol, vol_all - vol))
    if not values:
        return 1.0
    if aggregate == "mean":
        return 1.0 - float(np.mean(values))
    if aggregate == "max":
        return 1.0 - float(np.max(values))
    raise ValueError(f"aggregate must be 'mean' or 'max', got {aggregate!r}")


def coverage(sc: RelatednessSet, partition: Partition) -> float:
    intra, _, total = _split(*_matrices(sc, partition))
    return 1.0 if total == 0 else intra / total


def raw_modularity(sc: RelatednessSet, partition: Partition) -> float:
    """Weighted Newman modularity Q, 0 for a graph without weight."""
    w, labels = _matrices(sc, partition)
    degree = w.sum(axis=1)
    two_m = degree.sum()
    if two_m == 0:
        return 0.0
    same = labels[:, None] == labels[None, :]
    expected = np.outer(degree, degree) / two_m
    return float(((w - expected) * same).sum() / two_m)


def modularity(sc: RelatednessSet, partition: Partition) -> float:
    """Modularity mapped from [-0.5, 1] onto [0, 1]."""
    return (raw_modularity(sc, partition) + 0.5) / 1.5


def performance(sc: RelatednessSet, partition: Partition, threshold: float | None = None) -> float:
    """Fraction of entity pairs classified correctly.

    A pair is a relationship when its score is > 0, or >= ``threshold`` when
    one is given. Correct means: related and in the same community, or
    unrelated and in different communities.
    """
    w, labels = _matrices(sc, partition)
    n = len(labels)
    if n < 2:
        return 1.0
    related = w > 0 if threshold is None else w >= threshold
    same = labels[:, None] == labels[None, :]
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    good = np.count_nonzero(upper & same & related) + np.count_nonzero(upper & ~same & ~related)
    return good / (n * (n - 1) / 2)


def total_cut(sc: RelatednessSet, partition: Partition) -> float:
    """One minus the inter-community weight divided by the total weight."""
    _, inter, total = _split(*_matrices(sc, partition))
    if total == 0:
        return 1.0
    return 1.0 - inter / total


@dataclass(frozen=True)
class PartitionQualityReport:
    method: str
    percentile: int | None
    inv_conductance: float
    coverage: float
    scaled_modularity: float
    performance: float
    inv_norm_total_cut: float

    def values(self) -> tuple[float, ...]:
        return (self.inv_conductance, self.coverage, self.scaled_modularity,
                self.performance, self.inv_norm_total_cut)

    def row(self) -> list[str]:
        pct = "" if self.percentile is None else str(self.percentile)
        return [self.method, pct] + [repr(v) for v in self.values()]


def evaluate(sc: RelatednessSet, partition: Partition, method: str = "",
             percentile: int | None = None, *, conductance_aggregate: str = "mean",
             performance_threshold: float | None = None) -> PartitionQualityReport:
    if percentile is None:
        percentile = sc.percentile
    return PartitionQualityReport(
        method=method,
        percentile=percentile,
        inv_conductance=conductance(sc, partition, conductance_aggregate),
        coverage=coverage(sc, partition),
        scaled_modularity=modularity(sc, partition),
        performance=performance(sc, partition, performance_threshold),
        inv_norm_total_cut=total_cut(sc, partition),
    )


def write_report_csv(reports: Iterable[PartitionQualityReport], out: TextIO | None = None,
                     header: bool = True) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if header:
        writer.writerow(REPORT_HEADER)
    for r in reports:
        writer.writerow(r.row())
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text


def read_report_csv(source: TextIO) -> list[PartitionQualityReport]:
    rows = []
    for rec in csv.DictReader(source):
        pct = rec["percentile"]
        rows.append(PartitionQualityReport(
            method=rec["method"],
            percentile=int(pct) if pct else None,
            **{f.name: float(rec[f.name]) for f in fields(PartitionQualityReport)
               if f.name not in ("method", "percentile")},
        ))
    return rows
