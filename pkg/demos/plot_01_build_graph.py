"""
Building a scholarly knowledge graph
====================================

Publication records are read from newline-delimited JSON and mapped onto a
typed graph of researchers, publications and venues. The co-author network
is derived from it.
"""

from collections import Counter

from scholarcomm import datasets
from scholarcomm.graph import EntityKind, derive_co_author_network, write_triples
from scholarcomm.ingest import build_graph, parse_records

records_path, manifest_path = datasets.paths("sample")
records, diagnostics = parse_records(records_path.read_bytes())
print(f"{len(records)} records, {len(diagnostics)} rejected lines")

# bad lines are reported, never fatal
_, diags = parse_records(b'{"paper_id": "p:x", "title": "no authors"}\n')
print("diagnostic:", diags[0])

graph = build_graph(records)
for kind in EntityKind:
    print(f"{kind.value:12s} {graph.count(kind)}")
print("edges", graph.n_edges)

###############################################################################
# Co-authorship is derived, never stored: two researchers are linked when they
# appear on the same publication.

network = derive_co_author_network(graph)
print(f"\n{len(network)} co-author pairs among {len(network.researchers)} researchers")
busiest = Counter(a for pair in network.pairs() for a in pair).most_common(3)
for rid, n in busiest:
    print(f"  {graph.name_of(rid):14s} {n} co-authors")

###############################################################################
# The graph can be exported as sorted tab-separated triples.

print()
print("\n".join(write_triples(graph).splitlines()[:5]))
