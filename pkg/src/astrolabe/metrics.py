"""Node metrics and clusterings for skeleton graphs.

Node metrics (degree family, PageRank, betweenness, Katz, HITS, DAG depth,
reachability count) run on the directed graph with parallel edges
collapsed; community methods (louvain, greedy modularity, spectral) run on
the symmetrized graph with parallel multiplicities summed into weights.
Every method is deterministic: iterative solvers have pinned tolerances
and iteration caps, tie-breaking methods take an explicit seed.

A source filter restricts computation to one source's induced subgraph,
which by construction contains no cross-source edges; per-source results
are therefore unaffected by bridge edges between sources.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import networkx as nx
import numpy as np

from .leannets import SkeletonGraph
from .store import StoreError

METRIC_NAMES = (
    "degree",
    "in_degree",
    "out_degree",
    "pagerank",
    "betweenness",
    "katz",
    "hits_hub",
    "hits_authority",
    "dag_depth",
    "reachability",
)

CLUSTER_METHODS = ("louvain", "greedy_modularity", "spectral", "by_sort", "by_depth")


class UnknownMetric(StoreError):
    code = "unknown_metric"


class UnknownMethod(StoreError):
    code = "unknown_method"


class NonConvergence(StoreError):
    code = "non_convergence"

    def __init__(self, message: str, residual: float):
        super().__init__(message, residual=residual)
        self.residual = residual


class EmptyGraph(StoreError):
    code = "empty_graph"


@dataclass
class MetricVector:
    name: str
    values: dict[str, float]
    params: dict = field(default_factory=dict)


@dataclass
class Clustering:
    method: str
    assignment: dict[str, int]
    quality: Optional[float] = None


def _select(graph: SkeletonGraph, source_filter: Optional[str]) -> SkeletonGraph:
    if source_filter is None:
        return graph
    return graph.by_source.get(source_filter, SkeletonGraph())


def compute_metric(
    graph: SkeletonGraph,
    name: str,
    params: Optional[dict] = None,
    source_filter: Optional[str] = None,
) -> MetricVector:
    if name not in METRIC_NAMES:
        raise UnknownMetric(f"no metric named {name!r}; known: {list(METRIC_NAMES)}")
    sub = _select(graph, source_filter)
    params = dict(params or {})
    params["source"] = source_filter

    if name == "degree":
        succ, pred = sub.successors(), sub.predecessors()
        values = {n: float(len(succ[n]) + len(pred[n])) for n in sub.nodes}
    elif name == "in_degree":
        pred = sub.predecessors()
        values = {n: float(len(pred[n])) for n in sub.nodes}
    elif name == "out_degree":
        succ = sub.successors()
        values = {n: float(len(succ[n])) for n in sub.nodes}
    elif name == "pagerank":
        values, extra = pagerank(
            sub.successors(),
            damping=float(params.get("damping", 0.85)),
            tol=float(params.get("tol", 1e-9)),
            max_iter=int(params.get("max_iter", 200)),
        )
        params.update(extra)
    elif name == "betweenness":
        values = betweenness(sub.successors())
    elif name == "katz":
        values, extra = katz(
            sub.successors(),
            alpha=params.get("alpha"),
            beta=float(params.get("beta", 1.0)),
            tol=float(params.get("tol", 1e-10)),
            max_iter=int(params.get("max_iter", 500)),
        )
        params.update(extra)
    elif name in ("hits_hub", "hits_authority"):
        hubs, authorities, extra = hits(
            sub.successors(),
            tol=float(params.get("tol", 1e-9)),
            max_iter=int(params.get("max_iter", 1000)),
            start=params.get("start"),
        )
        values = hubs if name == "hits_hub" else authorities
        params.update(extra)
        params.pop("start", None)
    elif name == "dag_depth":
        return dag_depth(graph, source_filter)
    else:
        return reachability_count(graph, source_filter)

    return MetricVector(name=name, values=values, params=params)


def pagerank(
    succ: dict[str, list[str]],
    damping: float = 0.85,
    tol: float = 1e-9,
    max_iter: int = 200,
) -> tuple[dict[str, float], dict]:
    """Power iteration with uniform teleport; dangling mass spread uniformly.

    L1 residual under ``tol`` stops the iteration; exceeding ``max_iter``
    with a larger residual raises NonConvergence.
    """
    nodes = sorted(succ)
    n = len(nodes)
    if n == 0:
        return {}, {"damping": damping, "iterations": 0, "converged": True}
    rank = {v: 1.0 / n for v in nodes}
    base = (1.0 - damping) / n
    for iteration in range(1, max_iter + 1):
        nxt = {v: 0.0 for v in nodes}
        dangling = 0.0
        for v in nodes:
            out = succ[v]
            if out:
                share = rank[v] / len(out)
                for w in out:
                    nxt[w] += share
            else:
                dangling += rank[v]
        spread = dangling / n
        for v in nodes:
            nxt[v] = base + damping * (nxt[v] + spread)
        residual = sum(abs(nxt[v] - rank[v]) for v in nodes)
        rank = nxt
        if residual < tol:
            return rank, {
                "damping": damping,
                "tol": tol,
                "iterations": iteration,
                "converged": True,
            }
    raise NonConvergence(
        f"pagerank residual {residual:.3e} above {tol} after {max_iter} iterations",
        residual=residual,
    )


def betweenness(succ: dict[str, list[str]]) -> dict[str, float]:
    """Brandes' exact algorithm on the unweighted directed graph.

    Unnormalized; endpoints are not credited for the paths they terminate.
    """
    bc = {v: 0.0 for v in succ}
    for s in succ:
        # Single-source shortest paths with counts.
        sigma = {v: 0.0 for v in succ}
        dist = {v: -1 for v in succ}
        preds: dict[str, list[str]] = {v: [] for v in succ}
        sigma[s] = 1.0
        dist[s] = 0
        order: list[str] = []
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in succ[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        # Dependency accumulation in reverse discovery order.
        delta = {v: 0.0 for v in succ}
        for w in reversed(order):
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    return bc


def _adjacency_matrix(succ: dict[str, list[str]]) -> tuple[list[str], np.ndarray]:
    nodes = sorted(succ)
    index = {v: i for i, v in enumerate(nodes)}
    a = np.zeros((len(nodes), len(nodes)))
    for v, out in succ.items():
        for w in out:
            a[index[v], index[w]] = 1.0
    return nodes, a


def spectral_radius_estimate(a: np.ndarray, steps: int = 100) -> float:
    """Largest eigenvalue magnitude by plain power iteration."""
    n = a.shape[0]
    if n == 0:
        return 0.0
    v = np.ones(n) / math.sqrt(n)
    lam = 0.0
    for _ in range(steps):
        w = a @ v
        norm = float(np.linalg.norm(w))
        if norm < 1e-300:
            return 0.0
        v = w / norm
        lam = norm
    return lam


def katz(
    succ: dict[str, list[str]],
    alpha: Optional[float] = None,
    beta: float = 1.0,
    tol: float = 1e-10,
    max_iter: int = 500,
) -> tuple[dict[str, float], dict]:
    """Katz centrality x = beta * sum over k >= 0 of (alpha A^T)^k 1.

    When alpha is not given it is set to 0.85 / lambda_max with the radius
    estimated by power iteration, keeping the series convergent on any
    graph. Solved by fixed-point iteration x <- alpha A^T x + beta.
    """
    nodes, a = _adjacency_matrix(succ)
    n = len(nodes)
    if n == 0:
        return {}, {"alpha": alpha, "beta": beta, "iterations": 0, "converged": True}
    if alpha is None:
        lam = spectral_radius_estimate(a)
        alpha = 0.85 / lam if lam > 0 else 0.85
    at = a.T
    x = np.full(n, beta)
    for iteration in range(1, max_iter + 1):
        nxt = alpha * (at @ x) + beta
        residual = float(np.abs(nxt - x).sum())
        x = nxt
        if residual < tol:
            values = {v: float(x[i]) for i, v in enumerate(nodes)}
            return values, {
                "alpha": alpha,
                "beta": beta,
                "tol": tol,
                "iterations": iteration,
                "converged": True,
            }
    raise NonConvergence(
        f"katz residual {residual:.3e} above {tol} after {max_iter} iterations",
        residual=residual,
    )


def hits(
    succ: dict[str, list[str]],
    tol: float = 1e-9,
    max_iter: int = 1000,
    start: Optional[dict[str, float]] = None,
) -> tuple[dict[str, float], dict[str, float], dict]:
    """Alternating hub/authority updates, Euclidean-normalized each round.

    Edgeless graphs yield all-zero vectors. ``start`` seeds both vectors
    (any positive vector); the default is uniform.
    """
    nodes, a = _adjacency_matrix(succ)
    n = len(nodes)
    empty = {"tol": tol, "iterations": 0, "converged": True}
    if n == 0:
        return {}, {}, empty
    if not a.any():
        zeros = {v: 0.0 for v in nodes}
        return zeros, dict(zeros), empty
    if start is None:
        h = np.ones(n)
    else:
        h = np.array([float(start[v]) for v in nodes])
    h = h / np.linalg.norm(h)
    auth = h.copy()
    for iteration in range(1, max_iter + 1):
        new_auth = a.T @ h
        norm = np.linalg.norm(new_auth)
        if norm > 0:
            new_auth = new_auth / norm
        new_h = a @ new_auth
        norm = np.linalg.norm(new_h)
        if norm > 0:
            new_h = new_h / norm
        residual = float(np.abs(new_auth - auth).sum() + np.abs(new_h - h).sum())
        h, auth = new_h, new_auth
        if residual < tol:
            hubs = {v: float(h[i]) for i, v in enumerate(nodes)}
            authorities = {v: float(auth[i]) for i, v in enumerate(nodes)}
            return hubs, authorities, {
                "tol": tol,
                "iterations": iteration,
                "converged": True,
            }
    raise NonConvergence(
        f"hits residual {residual:.3e} above {tol} after {max_iter} iterations",
        residual=residual,
    )


def strongly_connected_components(succ: dict[str, list[str]]) -> list[list[str]]:
    """Tarjan's algorithm, iterative; components in reverse topological order."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = [0]
    components: list[list[str]] = []

    for root in sorted(succ):
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            node, pi = work[-1]
            if pi == 0:
                index[node] = low[node] = counter[0]
                counter[0] += 1
                stack.append(node)
                on_stack.add(node)
            advanced = False
            for nxt in succ[node][pi:]:
                pi += 1
                work[-1] = (node, pi)
                if nxt not in index:
                    work.append((nxt, 0))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if low[node] == index[node]:
                comp = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    comp.append(member)
                    if member == node:
                        break
                components.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return components


def dag_depth(graph: SkeletonGraph, source_filter: Optional[str] = None) -> MetricVector:
    """Longest path from any in-degree-0 node, on the SCC condensation.

    Cycles collapse to one component whose members share a depth, so the
    value is well defined on any directed graph.
    """
    sub = _select(graph, source_filter)
    succ = sub.successors()
    components = strongly_connected_components(succ)
    comp_of = {v: i for i, comp in enumerate(components) for v in comp}

    comp_succ: dict[int, set[int]] = {i: set() for i in range(len(components))}
    indegree = {i: 0 for i in range(len(components))}
    for v, out in succ.items():
        for w in out:
            a, b = comp_of[v], comp_of[w]
            if a != b and b not in comp_succ[a]:
                comp_succ[a].add(b)
                indegree[b] += 1

    depth = {i: 0 for i in range(len(components))}
    queue = deque(i for i in range(len(components)) if indegree[i] == 0)
    while queue:
        c = queue.popleft()
        for d in comp_succ[c]:
            depth[d] = max(depth[d], depth[c] + 1)
            indegree[d] -= 1
            if indegree[d] == 0:
                queue.append(d)

    values = {v: float(depth[comp_of[v]]) for v in succ}
    return MetricVector(name="dag_depth", values=values, params={"source": source_filter})


def reachability_count(
    graph: SkeletonGraph, source_filter: Optional[str] = None
) -> MetricVector:
    """Number of distinct nodes forward-reachable from each node, self excluded."""
    sub = _select(graph, source_filter)
    succ = sub.successors()
    values: dict[str, float] = {}
    for s in succ:
        seen = {s}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in succ[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        values[s] = float(len(seen) - 1)
    return MetricVector(
        name="reachability", values=values, params={"source": source_filter}
    )


def _modularity_graph(sub: SkeletonGraph) -> nx.Graph:
    """Symmetrized view with parallel directed edges summed into weights."""
    g = nx.Graph()
    g.add_nodes_from(sub.nodes)
    for e in sub.edges:
        if g.has_edge(e.src, e.dst):
            g[e.src][e.dst]["weight"] += 1.0
        else:
            g.add_edge(e.src, e.dst, weight=1.0)
    return g


def _canonical_assignment(clusters: list[set[str]]) -> dict[str, int]:
    """Contiguous labels from 0, clusters ordered by smallest member id."""
    ordered = sorted((c for c in clusters if c), key=min)
    return {v: label for label, cluster in enumerate(ordered) for v in cluster}


def cluster(
    graph: SkeletonGraph,
    method: str,
    params: Optional[dict] = None,
    source_filter: Optional[str] = None,
) -> Clustering:
    if method not in CLUSTER_METHODS:
        raise UnknownMethod(
            f"no clustering method {method!r}; known: {list(CLUSTER_METHODS)}"
        )
    sub = _select(graph, source_filter)
    params = dict(params or {})
    seed = int(params.get("seed", 0))
    n = len(sub.nodes)

    if method == "spectral":
        k = int(params.get("k", 2))
        if k < 1:
            raise UnknownMethod("spectral clustering needs k >= 1")
        if k > n:
            raise EmptyGraph(f"spectral k={k} exceeds node count {n}")

    if n == 0:
        return Clustering(method=method, assignment={}, quality=None)

    if method == "by_sort":
        groups: dict[str, set[str]] = {}
        for node_id, fields in sub.nodes.items():
            groups.setdefault(fields.sort, set()).add(node_id)
        clusters = list(groups.values())
    elif method == "by_depth":
        depths = dag_depth(graph, source_filter).values
        groups_by_depth: dict[float, set[str]] = {}
        for node_id, value in depths.items():
            groups_by_depth.setdefault(value, set()).add(node_id)
        clusters = list(groups_by_depth.values())
    elif method == "louvain":
        g = _modularity_graph(sub)
        if g.number_of_edges() == 0:
            clusters = [{v} for v in sub.nodes]
        else:
            clusters = [set(c) for c in nx.community.louvain_communities(
                g, weight="weight", seed=seed
            )]
    elif method == "greedy_modularity":
        g = _modularity_graph(sub)
        if g.number_of_edges() == 0:
            clusters = [{v} for v in sub.nodes]
        else:
            clusters = [
                set(c)
                for c in nx.community.greedy_modularity_communities(g, weight="weight")
            ]
    else:
        clusters = _spectral_clusters(sub, int(params.get("k", 2)), seed)

    assignment = _canonical_assignment(clusters)
    g = _modularity_graph(sub)
    quality = None
    if g.number_of_edges() > 0:
        quality = float(nx.community.modularity(g, clusters, weight="weight"))
    return Clustering(method=method, assignment=assignment, quality=quality)


def _spectral_clusters(sub: SkeletonGraph, k: int, seed: int) -> list[set[str]]:
    """Normalized-Laplacian embedding plus seeded k-means.

    Embeds each node as its row across the k smallest nontrivial
    eigenvectors of the symmetrized graph's normalized Laplacian, then
    runs seeded k-means on the rows.
    """
    nodes = sorted(sub.nodes)
    n = len(nodes)
    index = {v: i for i, v in enumerate(nodes)}
    w = np.zeros((n, n))
    for e in sub.edges:
        i, j = index[e.src], index[e.dst]
        w[i, j] += 1.0
        w[j, i] += 1.0

    degree = w.sum(axis=1)
    inv_sqrt = np.where(degree > 0, 1.0 / np.sqrt(np.where(degree > 0, degree, 1.0)), 0.0)
    lap = np.eye(n) - (inv_sqrt[:, None] * w * inv_sqrt[None, :])
    _, vecs = np.linalg.eigh(lap)
    # Column 0 holds the trivial eigenvector; the embedding starts past it.
    features = vecs[:, 1 : 1 + min(k, n - 1)]

    labels = _kmeans(features, k, seed)
    clusters: dict[int, set[str]] = {}
    for v, label in zip(nodes, labels):
        clusters.setdefault(int(label), set()).add(v)
    return list(clusters.values())


def _kmeans(points: np.ndarray, k: int, seed: int, restarts: int = 10) -> np.ndarray:
    # Single Lloyd runs are init-sensitive; keep the lowest-inertia of
    # several runs spawned deterministically from the seed.
    spawn = np.random.default_rng(seed)
    best_labels = None
    best_inertia = float("inf")
    for sub_seed in spawn.integers(0, 2**32, size=restarts):
        labels = _lloyd(points, k, int(sub_seed))
        inertia = 0.0
        for c in range(k):
            members = points[labels == c]
            if len(members) > 0:
                inertia += float(((members - members.mean(axis=0)) ** 2).sum())
        if best_labels is None or inertia < best_inertia - 1e-12:
            best_labels = labels
            best_inertia = inertia
    return best_labels


def _lloyd(points: np.ndarray, k: int, seed: int, rounds: int = 100) -> np.ndarray:
    n = points.shape[0]
    rng = np.random.default_rng(seed)
    centers = points[rng.choice(n, size=k, replace=False)].copy()
    labels = np.zeros(n, dtype=int)
    for _ in range(rounds):
        distances = np.linalg.norm(points[:, None, :] - centers[None, :, :], axis=2)
        new_labels = distances.argmin(axis=1)
        for c in range(k):
            members = points[new_labels == c]
            if len(members) > 0:
                centers[c] = members.mean(axis=0)
            else:
                # Reseat an empty cluster on the farthest point.
                farthest = distances.min(axis=1).argmax()
                centers[c] = points[farthest]
                new_labels[farthest] = c
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    return labels
