"""Network metrics and the concentration collapse.

Scalar metrics (node count, edge count, density, average degree) come out
directly. Distribution-valued metrics (degrees, PageRank, betweenness,
closeness) are collapsed to one number with the normalized Herfindahl-
Hirschman index: 0 means the scores spread evenly over the graph, 1 means a
single node monopolizes them.
"""

from kgrerank import (
    MetricKind,
    Multigraph,
    Node,
    betweenness,
    closeness,
    compute_metric,
    hhi,
    hhi_normalized,
    pagerank,
)


def graph_from(edges, directed=False):
    g = Multigraph()
    for v in sorted({v for e in edges for v in e}):
        g.add_node(Node(v, "node"))
    for a, b in edges:
        g.add_edge(a, "rel", b)
        if not directed:
            g.add_edge(b, "rel", a)
    return g


# The index itself: shares of 1 summing to 1.
print("HHI  of [0.5, 0.3, 0.2]:", hhi([0.5, 0.3, 0.2]))
print("HHI* of [0.5, 0.3, 0.2]:", round(hhi_normalized([0.5, 0.3, 0.2]), 4))
print("HHI* of uniform fifths: ", hhi_normalized([0.2] * 5))
print("HHI* of a monopoly:     ", hhi_normalized([1.0, 0.0, 0.0]))

# A star concentrates betweenness entirely on the hub; a cycle spreads it.
star = graph_from([("hub", f"leaf{i}") for i in range(5)])
cycle = graph_from([(f"c{i}", f"c{(i + 1) % 6}") for i in range(6)])
print("\nraw betweenness on a 5-leaf star:", betweenness(star))
for name, g in (("star", star), ("cycle", cycle)):
    value = compute_metric(g, MetricKind.BETWEENNESS).value
    print(f"betweenness concentration of the {name}: {value:.1f}")

# Harmonic closeness handles disconnected graphs without special cases.
split = graph_from([("a", "b"), ("c", "d")])
print("\nharmonic closeness on two disconnected edges:", closeness(split))

# PageRank runs on the directed view with uniform teleport.
chain = graph_from([("a", "b"), ("b", "c")], directed=True)
scores = pagerank(chain)
print("pagerank on a -> b -> c:", {v: round(s, 4) for v, s in scores.items()})

# Every metric lands in a comparable scalar via compute_metric.
print("\nall metrics on the 6-cycle:")
for kind in sorted(MetricKind, key=lambda k: k.value):
    print(f"  {kind.value:>14}: {compute_metric(cycle, kind).value:.4f}")
