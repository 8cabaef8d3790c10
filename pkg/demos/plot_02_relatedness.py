"""
Scoring researcher and venue relatedness
========================================

Three ways to score same-type pairs: overlap on a focus venue series,
Jaccard similarity of venue audiences, and counts of short paths in the
graph. Percentile thresholds keep only the strongest pairs.
"""

import numpy as np

from scholarcomm import datasets
from scholarcomm.graph import EntityKind
from scholarcomm.ingest import build_graph
from scholarcomm.relatedness import compute_sc, percentile_threshold

records, manifest = datasets.load("synthetic")
graph = build_graph(records, manifest)

simr = compute_sc(graph, EntityKind.RESEARCHER, "simr", focus_series=manifest.focus_venue_series)
simc = compute_sc(graph, EntityKind.VENUE, "simc")
path = compute_sc(graph, EntityKind.RESEARCHER, "path", max_len=4)

for name, sc in [("simr", simr), ("simc", simc), ("path-4", path)]:
    values = np.array(list(sc.scores.values()))
    print(f"{name:7s} pairs={len(sc):5d}  mean={values.mean():.3f}  max={values.max():.3f}")

###############################################################################
# Venue editions of the same series share most of their authors.

best = sorted(simc, key=lambda t: -t.score)[:4]
for a, b, s in best:
    print(f"  {a} ~ {b}: {s:.3f}")

###############################################################################
# Nearest-rank thresholds are nested: a higher percentile keeps a subset.

for p in (85, 90, 95, 98):
    kept = percentile_threshold(path, p)
    print(f"p{p}: cutoff {kept.cutoff:.4f}, {len(kept)} pairs kept")
