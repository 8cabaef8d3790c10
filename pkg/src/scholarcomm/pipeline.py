"""Stage composition: relatedness -> threshold -> communities -> metrics -> predictions.

Everything the command line writes can be reproduced by calling these
functions with the same arguments.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

from .evaluation import RankingReport, rank_eval, temporal_split
from .graph import CoAuthorNetwork, EntityKind, ScholarlyKnowledgeGraph, derive_co_author_network
from .ingest import DatasetManifest, PublicationRecord, build_graph
from .metrics import PartitionQualityReport, evaluate, write_report_csv
from .partition import Partition, PartitionerParams, run_partitioner, write_partition
from .predict import Aggregator, PredictedNetwork, generate_patterns, write_predictions
from .relatedness import RelatednessSet, compute_sc, percentile_threshold, write_sc

logger = logging.getLogger(__name__)

DEFAULT_PERCENTILES = (85, 90, 95, 98)
DEFAULT_METHODS = ("semantic", "kway")


@dataclass(frozen=True)
class SimilarityConfig:
    method: str = "simr"
    kind: str | None = None
    max_len: int = 2
    scores_path: str | None = None

    def entity_kind(self) -> EntityKind:
        if self.kind is not None:
            return EntityKind.parse(self.kind)
        return EntityKind.VENUE if self.method == "simc" else EntityKind.RESEARCHER


@dataclass(frozen=True)
class CellResult:
    method: str
    percentile: int
    sc: RelatednessSet
    partition: Partition
    report: PartitionQualityReport
    predictions: PredictedNetwork
    ranking: RankingReport | None = None

    @property
    def name(self) -> str:
        return f"{self.method}_p{self.percentile}"


def similarity(graph: ScholarlyKnowledgeGraph, manifest: DatasetManifest | None,
               config: SimilarityConfig) -> RelatednessSet:
    focus = manifest.focus_venue_series if manifest is not None else None
    if config.method == "simr" and not focus:
        raise ValueError("simr needs a manifest with a non-empty focus_venue_series")
    return compute_sc(graph, config.entity_kind(), config.method, focus_series=focus,
                      max_len=config.max_len, scores_path=config.scores_path)


def run_cell(sc: RelatednessSet, observed: CoAuthorNetwork | None, method: str, percentile: int, *,
             k: int | None = None, merge_floor: float | None = None,
             aggregator: str = "avg", min_weight: float = 0.0, pair_local: bool = False,
             balance_tolerance: float = 0.1, max_refine_iters: int = 20) -> CellResult:
    """Threshold, partition, evaluate and predict for one (method, percentile)."""
    kept = percentile_threshold(sc, percentile)
    params = PartitionerParams(method=method, k=k, merge_floor=merge_floor,
                               balance_tolerance=balance_tolerance, max_refine_iters=max_refine_iters)
    partition = run_partitioner(kept, params)
    report = evaluate(kept, partition, method=method, percentile=percentile)
    if observed is not None and sc.entity_kind is EntityKind.RESEARCHER:
        predictions = generate_patterns(partition, kept, observed, Aggregator.parse(aggregator),
                                        min_weight, pair_local)
    else:
        predictions = PredictedNetwork(())
    return CellResult(method, percentile, kept, partition, report, predictions)


@dataclass(frozen=True)
class SweepConfig:
    methods: Sequence[str] = DEFAULT_METHODS
    percentiles: Sequence[int] = DEFAULT_PERCENTILES
    similarity: SimilarityConfig = field(default_factory=SimilarityConfig)
    k: int | None = None
    merge_floor: float | None = None
    aggregator: str = "avg"
    min_weight: float = 0.0
    cutoff_year: int | None = None
    holdout_k: int = 10


def sweep(records: Sequence[PublicationRecord], manifest: DatasetManifest | None,
          config: SweepConfig = SweepConfig()) -> list[CellResult]:
    """Run every (method, percentile) cell.

    With ``cutoff_year`` set, everything is computed on the records up to the
    cutoff and each cell is additionally ranked against later co-authorships.
    When ``k`` is not given, the k-way partitioner uses the number of
    communities the semantic partitioner found at the same percentile.
    """
    split = None
    if config.cutoff_year is not None:
        split = temporal_split(records, config.cutoff_year)
        graph, observed = split.train_graph, split.observed
    else:
        graph = build_graph(records, manifest)
        observed = derive_co_author_network(graph)
    sc = similarity(graph, manifest, config.similarity)

    results = []
    for percentile in config.percentiles:
        semantic_size = None
        for method in config.methods:
            k = config.k
            if method == "kway" and k is None:
                if semantic_size is None:
                    semantic_size = len(run_cell(sc, None, "semantic", percentile,
                                                 merge_floor=config.merge_floor).partition)
                k = semantic_size
            cell = run_cell(sc, observed, method, percentile, k=k, merge_floor=config.merge_floor,
                            aggregator=config.aggregator, min_weight=config.min_weight)
            if method == "semantic":
                semantic_size = len(cell.partition)
            if split is not None and len(cell.predictions):
                cell = replace(cell, ranking=rank_eval(cell.predictions, split, config.holdout_k))
            results.append(cell)
    results.sort(key=lambda c: (list(config.methods).index(c.method), c.percentile))
    return results


def write_sweep(results: Sequence[CellResult], out_dir: "str | Path") -> list[Path]:
    """Write per-cell TSV files plus ``report.csv`` (and ``holdout.csv`` when ranked)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for cell in results:
        cell_dir = out / cell.name
        cell_dir.mkdir(exist_ok=True)
        for fname, text in (("sc.tsv", write_sc(cell.sc)),
                            ("partition.tsv", write_partition(cell.partition)),
                            ("predictions.tsv", write_predictions(cell.predictions))):
            path = cell_dir / fname
            path.write_text(text, encoding="utf-8")
            written.append(path)
    report = out / "report.csv"
    report.write_text(write_report_csv([c.report for c in results]), encoding="utf-8")
    written.append(report)

    ranked = [c for c in results if c.ranking is not None]
    if ranked:
        path = out / "holdout.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(("method", "percentile") + RankingReport.HEADER)
            for c in ranked:
                r = c.ranking
                writer.writerow([c.method, c.percentile, r.k, repr(r.precision_at_k), repr(r.recall_at_k),
                                 repr(r.random_baseline), r.hits, r.n_future, r.n_candidates])
        written.append(path)
    return written


HOLDOUT_SIMILARITY = SimilarityConfig(method="path", max_len=4)


def holdout(records: Sequence[PublicationRecord], manifest: DatasetManifest | None, cutoff_year: int,
            k: int = 10, *, percentile: int = 95, method: str = "semantic",
            similarity_config: SimilarityConfig = HOLDOUT_SIMILARITY, partition_k: int | None = None,
            merge_floor: float | None = None, aggregator: str = "avg") -> tuple[RankingReport, CellResult]:
    """Full pipeline on the pre-cutoff records, ranked against later co-authorships."""
    split = temporal_split(records, cutoff_year)
    sc = similarity(split.train_graph, manifest, similarity_config)
    if method == "kway" and partition_k is None:
        partition_k = len(run_cell(sc, None, "semantic", percentile, merge_floor=merge_floor).partition)
    cell = run_cell(sc, split.observed, method, percentile, k=partition_k,
                    merge_floor=merge_floor, aggregator=aggregator)
    report = rank_eval(cell.predictions, split, k)
    return report, replace(cell, ranking=report)
