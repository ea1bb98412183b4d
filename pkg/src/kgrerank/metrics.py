"""Network metrics on graph views, collapsed to scalars where needed.

Four metrics are plain scalars (node count, edge count, density, average
degree). The remaining five (in-/out-degree, PageRank, betweenness, closeness)
produce a score per node; those distributions are collapsed to a single
concentration value with the normalized Herfindahl-Hirschman index, so every
metric ends up as one number in a comparable range.

Betweenness and closeness are computed on the undirected view of the graph;
PageRank and the degree distributions use edge directions.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from enum import Enum


class MetricError(ValueError):
    """Raised when a metric is requested on an unsuitable input."""


class ConvergenceError(MetricError):
    """Power iteration failed to converge; carries the last iterate."""

    def __init__(self, message: str, last_scores: dict[str, float]):
        super().__init__(message)
        self.last_scores = last_scores


class MetricKind(Enum):
    NODE_COUNT = "node_count"
    EDGE_COUNT = "edge_count"
    DENSITY = "density"
    AVERAGE_DEGREE = "average_degree"
    IN_DEGREE = "in_degree"
    OUT_DEGREE = "out_degree"
    PAGERANK = "pagerank"
    BETWEENNESS = "betweenness"
    CLOSENESS = "closeness"

    @classmethod
    def from_name(cls, name: str) -> "MetricKind":
        try:
            return cls(name)
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise MetricError(f"unknown metric {name!r}; expected one of: {valid}")


SCALAR_KINDS = frozenset(
    {
        MetricKind.NODE_COUNT,
        MetricKind.EDGE_COUNT,
        MetricKind.DENSITY,
        MetricKind.AVERAGE_DEGREE,
    }
)
DISTRIBUTIONAL_KINDS = frozenset(set(MetricKind) - SCALAR_KINDS)


@dataclass(frozen=True)
class MetricValue:
    value: float
    kind: MetricKind


def hhi(shares: Sequence[float]) -> float:
    """Herfindahl-Hirschman index: sum of squared shares.

    ``shares`` must be non-negative and sum to 1 (within 1e-9). The result
    lies in [1/N, 1]: 1/N for a uniform split, 1 for a single monopoly.
    """
    if len(shares) == 0:
        raise MetricError("hhi requires at least one share")
    if any(s < 0 for s in shares):
        raise MetricError("shares must be non-negative")
    total = sum(shares)
    if abs(total - 1.0) > 1e-9:
        raise MetricError(f"shares must sum to 1, got {total!r}")
    return sum(s * s for s in shares)


def hhi_normalized(shares: Sequence[float]) -> float:
    """Normalized HHI in [0, 1]: 0 for uniform shares, 1 for a monopoly.

    Computed as (HHI - 1/N) / (1 - 1/N). A single share is maximally
    concentrated by definition, so N = 1 returns 1.0.
    """
    raw = hhi(shares)
    n = len(shares)
    if n == 1:
        return 1.0
    value = (raw - 1.0 / n) / (1.0 - 1.0 / n)
    # clamp away float dust so uniform inputs land exactly on 0
    return min(1.0, max(0.0, value))


def centrality_to_shares(scores: Mapping[str, float]) -> list[float]:
    """Normalize a per-node score map to shares (in sorted key order).

    A distribution with zero total mass (e.g. betweenness on a single edge)
    is treated as uniform: no node monopolizes anything.
    """
    if not scores:
        raise MetricError("empty centrality distribution")
    keys = sorted(scores)
    if any(scores[k] < 0 for k in keys):
        raise MetricError("centrality scores must be non-negative")
    total = sum(scores[k] for k in keys)
    if total == 0:
        return [1.0 / len(keys)] * len(keys)
    return [scores[k] / total for k in keys]


def _undirected_adjacency(g) -> dict[str, list[str]]:
    # sorted adjacency lists keep traversal order reproducible
    return {v: sorted(n for n in g.neighbors(v) if n != v) for v in g.node_ids()}


def betweenness(g) -> dict[str, float]:
    """Shortest-path betweenness on the undirected view (Brandes accumulation).

    Returns raw, unnormalized scores counting unordered node pairs; parallel
    edges collapse into a single adjacency.
    """
    adj = _undirected_adjacency(g)
    bc = dict.fromkeys(adj, 0.0)
    for s in adj:
        stack: list[str] = []
        preds: dict[str, list[str]] = {v: [] for v in adj}
        sigma = dict.fromkeys(adj, 0)
        sigma[s] = 1
        dist = dict.fromkeys(adj, -1)
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = dict.fromkeys(adj, 0.0)
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    # each unordered pair was counted from both endpoints
    return {v: value / 2.0 for v, value in bc.items()}


def closeness(g) -> dict[str, float]:
    """Harmonic closeness on the undirected view: sum of 1/distance.

    Unreachable nodes contribute 0, so disconnected graphs are handled
    without special cases.
    """
    adj = _undirected_adjacency(g)
    out: dict[str, float] = {}
    for s in adj:
        dist = {s: 0}
        queue = deque([s])
        total = 0.0
        while queue:
            v = queue.popleft()
            if v != s:
                total += 1.0 / dist[v]
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        out[s] = total
    return out


def pagerank(
    g, damping: float = 0.85, tol: float = 1e-9, max_iter: int = 200
) -> dict[str, float]:
    """PageRank by power iteration on the directed graph.

    Teleport is uniform, dangling-node mass is redistributed uniformly, and
    parallel edges weight the transition proportionally. Convergence is an L1
    change below ``tol``; exceeding ``max_iter`` raises
    :class:`ConvergenceError` carrying the last iterate.
    """
    if not 0.0 < damping < 1.0:
        raise MetricError(f"damping must lie in (0, 1), got {damping!r}")
    nodes = list(g.node_ids())
    n = len(nodes)
    if n == 0:
        raise MetricError("pagerank is undefined on an empty graph")
    index = {v: i for i, v in enumerate(nodes)}

    out_lists: list[list[tuple[int, float]]] = []
    for v in nodes:
        succ = g.successors(v)
        total = sum(len(p) for p in succ.values())
        if total == 0:
            out_lists.append([])
        else:
            out_lists.append(
                [(index[t], len(p) / total) for t, p in sorted(succ.items())]
            )

    ranks = [1.0 / n] * n
    base = (1.0 - damping) / n
    for _ in range(max_iter):
        nxt = [base] * n
        dangling = sum(ranks[i] for i in range(n) if not out_lists[i])
        if dangling:
            spread = damping * dangling / n
            nxt = [x + spread for x in nxt]
        for i, targets in enumerate(out_lists):
            if targets:
                r = damping * ranks[i]
                for j, w in targets:
                    nxt[j] += r * w
        change = sum(abs(a - b) for a, b in zip(nxt, ranks))
        ranks = nxt
        if change < tol:
            return dict(zip(nodes, ranks))
    raise ConvergenceError(
        f"pagerank did not converge within {max_iter} iterations",
        dict(zip(nodes, ranks)),
    )


def in_degree_scores(g) -> dict[str, float]:
    return {v: float(g.in_degree(v)) for v in g.node_ids()}


def out_degree_scores(g) -> dict[str, float]:
    return {v: float(g.out_degree(v)) for v in g.node_ids()}


_DISTRIBUTIONS = {
    MetricKind.IN_DEGREE: in_degree_scores,
    MetricKind.OUT_DEGREE: out_degree_scores,
    MetricKind.PAGERANK: pagerank,
    MetricKind.BETWEENNESS: betweenness,
    MetricKind.CLOSENESS: closeness,
}


def compute_metric(g, kind: MetricKind) -> MetricValue:
    """Evaluate one metric on a graph view.

    Scalar metrics follow their definitions directly (density uses the
    directed formula |E| / (|V| (|V|-1)), average degree counts each directed
    edge once). Distributional metrics are collapsed via the normalized HHI of
    the per-node shares and therefore land in [0, 1].
    """
    n = g.num_nodes
    if kind is MetricKind.NODE_COUNT:
        return MetricValue(float(n), kind)
    if kind is MetricKind.EDGE_COUNT:
        return MetricValue(float(g.num_edges), kind)
    if kind is MetricKind.DENSITY:
        value = 0.0 if n <= 1 else g.num_edges / (n * (n - 1))
        return MetricValue(value, kind)
    if kind is MetricKind.AVERAGE_DEGREE:
        value = 0.0 if n == 0 else g.num_edges / n
        return MetricValue(value, kind)
    if kind in _DISTRIBUTIONS:
        if n == 0:
            raise MetricError(f"{kind.value} is undefined on an empty graph")
        scores = _DISTRIBUTIONS[kind](g)
        return MetricValue(hhi_normalized(centrality_to_shares(scores)), kind)
    raise MetricError(f"unknown metric kind {kind!r}")  # pragma: no cover
