"""Scholarly knowledge graphs, researcher relatedness, communities and co-author prediction."""

from .errors import ScholarlyError
from .evaluation import (
    HoldoutSplit,
    PlantedSpec,
    RankingReport,
    adjusted_rand,
    generate_planted,
    rank_eval,
    temporal_split,
)
from .graph import (
    CoAuthorNetwork,
    EntityKind,
    PropertyLabel,
    ScholarlyKnowledgeGraph,
    derive_co_author_network,
    papers_of,
)
from .ingest import DatasetManifest, PublicationRecord, build_graph, parse_records
from .metrics import PartitionQualityReport, evaluate
from .partition import Community, Partition, PartitionerParams, partition_kway, partition_semantic
from .predict import Aggregator, PredictedNetwork, PredictedRelation, connectivity_weight, generate_patterns
from .relatedness import (
    RelatednessSet,
    RelatednessTriple,
    compute_sc,
    path_relatedness,
    percentile_threshold,
    sim_c,
    sim_r,
)

__version__ = "0.1.0"
