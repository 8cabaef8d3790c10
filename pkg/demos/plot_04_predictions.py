"""
Predicting co-authorships inside communities
============================================

Members of one community who have not written together yet are proposed
as future co-authors. The weight of a proposal aggregates the relatedness
scores inside its community.
"""

from scholarcomm import datasets
from scholarcomm.graph import EntityKind, derive_co_author_network
from scholarcomm.ingest import build_graph
from scholarcomm.partition import PartitionerParams, run_partitioner
from scholarcomm.predict import Aggregator, generate_patterns
from scholarcomm.relatedness import compute_sc, percentile_threshold

records, manifest = datasets.load("sample")
graph = build_graph(records, manifest)
observed = derive_co_author_network(graph)

sc = percentile_threshold(compute_sc(graph, EntityKind.RESEARCHER, "path", max_len=4), 90)
partition = run_partitioner(sc, PartitionerParams("semantic"))
print(f"{len(partition)} communities, largest has {max(len(c) for c in partition)} members")

for f in Aggregator:
    predictions = generate_patterns(partition, sc, observed, f)
    weights = sorted({round(r.weight, 4) for r in predictions}, reverse=True)
    print(f"{f.value:8s} {len(predictions)} predictions, distinct weights {weights[:4]}")

###############################################################################
# With the pair-local variant only the scores touching the two endpoints
# count, so proposals within one community are ranked against each other.

local = generate_patterns(partition, sc, observed, "avg", pair_local=True)
for r in local.top(5):
    print(f"  {graph.name_of(r.left):14s} + {graph.name_of(r.right):14s} {r.weight:.3f}  (community {r.community_id})")
