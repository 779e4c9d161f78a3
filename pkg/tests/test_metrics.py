"""Node metrics and clusterings, checked against independent oracles."""

import random

import networkx as nx
import pytest

from astrolabe.leannets import extract_skeleton
from astrolabe.metrics import (
    CLUSTER_METHODS,
    METRIC_NAMES,
    EmptyGraph,
    NonConvergence,
    UnknownMethod,
    UnknownMetric,
    betweenness,
    cluster,
    compute_metric,
    dag_depth,
    hits,
    katz,
    pagerank,
    strongly_connected_components,
)
from astrolabe.store import STRUCTURAL, Nerve, Store

from helpers.oracles import enumerate_paths_betweenness, katz_series


def make_skeleton(edges, extra_nodes=(), records=None):
    """Skeleton over friendly node ids, one width-1 nerve per edge."""
    store = Store(STRUCTURAL)
    nodes = set(extra_nodes)
    for s, t in edges:
        nodes.update((s, t))
    for name in sorted(nodes):
        record = (records or {}).get(name, "")
        store.nerves[name] = Nerve(name, (name,), record)
    for i, (s, t) in enumerate(edges):
        edge_id = f"x{i:03d}"
        store.nerves[edge_id] = Nerve(edge_id, (s, t), f"edge {i} {s} {t}")
    return extract_skeleton(store)


def random_adjacency(rng, n, p):
    nodes = [f"n{i}" for i in range(n)]
    return {
        v: [w for w in nodes if w != v and rng.random() < p] for v in nodes
    }


TWO_TRIANGLES = [
    ("a1", "a2"), ("a1", "a3"), ("a2", "a3"),
    ("b1", "b2"), ("b1", "b3"), ("b2", "b3"),
    ("a1", "b1"),
]


class TestDegreeFamily:
    def test_semantic_goldens(self, semantic_store):
        skeleton = extract_skeleton(semantic_store)
        out = compute_metric(skeleton, "out_degree").values
        assert out == {"D1": 0.0, "D2": 3.0, "L1": 1.0, "T1": 1.0}
        inc = compute_metric(skeleton, "in_degree").values
        assert inc == {"D1": 1.0, "D2": 0.0, "L1": 2.0, "T1": 2.0}
        deg = compute_metric(skeleton, "degree").values
        assert deg == {"D1": 1.0, "D2": 3.0, "L1": 3.0, "T1": 3.0}

    def test_parallel_edges_collapse(self):
        skeleton = make_skeleton([("a", "b"), ("a", "b")])
        assert compute_metric(skeleton, "out_degree").values["a"] == 1.0


class TestDagDepthAndReachability:
    def test_semantic_goldens(self, semantic_store):
        skeleton = extract_skeleton(semantic_store)
        depths = compute_metric(skeleton, "dag_depth").values
        # L1 and T1 sit in one 2-cycle component one step below D2.
        assert depths == {"D1": 1.0, "D2": 0.0, "L1": 1.0, "T1": 1.0}
        reach = compute_metric(skeleton, "reachability").values
        assert reach == {"D1": 0.0, "D2": 3.0, "L1": 1.0, "T1": 1.0}

    def test_chain_depths(self):
        skeleton = make_skeleton([("a", "b"), ("b", "c"), ("c", "d")])
        values = dag_depth(skeleton).values
        assert values == {"a": 0.0, "b": 1.0, "c": 2.0, "d": 3.0}

    def test_cycle_members_share_depth(self):
        skeleton = make_skeleton([("r", "a"), ("a", "b"), ("b", "a"), ("b", "t")])
        values = dag_depth(skeleton).values
        assert values["a"] == values["b"] == 1.0
        assert values["r"] == 0.0 and values["t"] == 2.0

    def test_scc_partition(self):
        succ = {"a": ["b"], "b": ["c"], "c": ["a", "d"], "d": []}
        comps = strongly_connected_components(succ)
        assert sorted(map(tuple, comps)) == [("a", "b", "c"), ("d",)]


class TestPagerank:
    def test_cycle_is_uniform(self):
        skeleton = make_skeleton([("a", "b"), ("b", "c"), ("c", "a")])
        values = compute_metric(skeleton, "pagerank").values
        for rank in values.values():
            assert rank == pytest.approx(1.0 / 3.0, abs=1e-9)

    def test_sums_to_one(self):
        rng = random.Random(10)
        for _ in range(25):
            succ = random_adjacency(rng, rng.randint(1, 12), 0.3)
            values, params = pagerank(succ)
            assert sum(values.values()) == pytest.approx(1.0, abs=1e-6)
            assert params["converged"]

    def test_sink_attracts_mass(self):
        skeleton = make_skeleton([("a", "c"), ("b", "c")])
        values = compute_metric(skeleton, "pagerank").values
        assert values["c"] > values["a"] == values["b"]

    def test_empty_graph(self):
        values, params = pagerank({})
        assert values == {} and params["converged"]

    def test_nonconvergence_raises(self):
        succ = {"a": ["b"], "b": ["c"], "c": []}
        with pytest.raises(NonConvergence) as info:
            pagerank(succ, tol=1e-15, max_iter=1)
        assert info.value.residual > 0
        assert info.value.code == "non_convergence"

    def test_params_echoed(self, semantic_store):
        skeleton = extract_skeleton(semantic_store)
        vector = compute_metric(skeleton, "pagerank", {"damping": 0.5})
        assert vector.params["damping"] == 0.5
        assert vector.params["iterations"] >= 1


class TestBetweenness:
    def test_path_golden(self):
        skeleton = make_skeleton([("a", "b"), ("b", "c")])
        values = compute_metric(skeleton, "betweenness").values
        assert values == {"a": 0.0, "b": 1.0, "c": 0.0}

    def test_split_credit(self):
        skeleton = make_skeleton(
            [("s", "u"), ("s", "v"), ("u", "t"), ("v", "t")]
        )
        values = compute_metric(skeleton, "betweenness").values
        assert values["u"] == pytest.approx(0.5)
        assert values["v"] == pytest.approx(0.5)

    def test_semantic_all_adjacent(self, semantic_store):
        # Every reachable pair is already adjacent, so nothing lies between.
        skeleton = extract_skeleton(semantic_store)
        values = compute_metric(skeleton, "betweenness").values
        assert set(values.values()) == {0.0}

    def test_matches_path_enumeration(self):
        rng = random.Random(11)
        for _ in range(60):
            succ = random_adjacency(rng, rng.randint(2, 7), 0.35)
            got = betweenness(succ)
            want = enumerate_paths_betweenness(succ)
            for v in succ:
                assert got[v] == pytest.approx(want[v], abs=1e-9)


class TestKatz:
    def test_matches_series(self):
        rng = random.Random(12)
        for _ in range(20):
            succ = random_adjacency(rng, rng.randint(2, 8), 0.3)
            values, params = katz(succ, alpha=0.05)
            want = katz_series(succ, alpha=0.05, beta=1.0)
            for v in succ:
                assert values[v] == pytest.approx(want[v], abs=1e-8)

    def test_auto_alpha_converges(self):
        # A 2-cycle has spectral radius 1, so a fixed alpha of 0.85 is
        # exactly the auto choice and the series still converges.
        succ = {"a": ["b"], "b": ["a"]}
        values, params = katz(succ)
        assert params["alpha"] == pytest.approx(0.85, rel=1e-6)
        assert params["converged"]
        assert values["a"] == pytest.approx(values["b"])

    def test_more_citations_score_higher(self):
        skeleton = make_skeleton([("a", "c"), ("b", "c"), ("a", "b")])
        values = compute_metric(skeleton, "katz").values
        assert values["c"] > values["b"] > values["a"]

    def test_empty(self):
        values, _ = katz({})
        assert values == {}


class TestHits:
    def test_hub_and_authority_split(self):
        skeleton = make_skeleton([("h", "a1"), ("h", "a2")])
        hub = compute_metric(skeleton, "hits_hub").values
        auth = compute_metric(skeleton, "hits_authority").values
        assert hub["h"] == pytest.approx(1.0)
        assert auth["h"] == pytest.approx(0.0, abs=1e-9)
        assert auth["a1"] == pytest.approx(auth["a2"])

    def test_unit_norm(self, semantic_store):
        skeleton = extract_skeleton(semantic_store)
        hub = compute_metric(skeleton, "hits_hub").values
        auth = compute_metric(skeleton, "hits_authority").values
        assert sum(v * v for v in hub.values()) == pytest.approx(1.0)
        assert sum(v * v for v in auth.values()) == pytest.approx(1.0)

    def test_start_independence(self):
        rng = random.Random(13)
        succ = random_adjacency(rng, 8, 0.35)
        uniform_h, uniform_a, _ = hits(succ)
        skew = {v: 1.0 + i for i, v in enumerate(sorted(succ))}
        skew_h, skew_a, _ = hits(succ, start=skew)
        for v in succ:
            assert uniform_h[v] == pytest.approx(skew_h[v], abs=1e-6)
            assert uniform_a[v] == pytest.approx(skew_a[v], abs=1e-6)

    def test_edgeless_is_zero(self):
        skeleton = make_skeleton([], extra_nodes=("a", "b"))
        values = compute_metric(skeleton, "hits_hub").values
        assert values == {"a": 0.0, "b": 0.0}


class TestSourceIsolation:
    BRIDGED = [
        ("lean one", "lean two"),
        ("lean two", "lean three"),
        ("tex one", "lean one"),
        ("tex one", "tex two"),
    ]

    def build(self, with_tex):
        store = Store()
        names = {"lean one", "lean two", "lean three"}
        if with_tex:
            names |= {"tex one", "tex two"}
        ids = {}
        for name in sorted(names):
            source, label = name.split()
            ids[name] = store.insert_atom(
                '{"sort":"lemma","source":"%s","title":"%s"}' % (source, label)
            )
        for s, t in self.BRIDGED:
            if s in names and t in names:
                store.insert_nerve(f"{s} to {t}", (ids[s], ids[t]))
        return extract_skeleton(store)

    @pytest.mark.parametrize("name", METRIC_NAMES)
    def test_bridge_edges_cannot_leak(self, name):
        full = self.build(with_tex=True)
        lean_only = self.build(with_tex=False)
        filtered = compute_metric(full, name, source_filter="lean")
        direct = compute_metric(lean_only, name, source_filter="lean")
        assert filtered.values == direct.values  # bit identical

    def test_cluster_isolation(self):
        full = self.build(with_tex=True)
        lean_only = self.build(with_tex=False)
        a = cluster(full, "louvain", {"seed": 4}, source_filter="lean")
        b = cluster(lean_only, "louvain", {"seed": 4}, source_filter="lean")
        assert a.assignment == b.assignment

    def test_unknown_source_is_empty(self, semantic_store):
        skeleton = extract_skeleton(semantic_store)
        vector = compute_metric(skeleton, "pagerank", source_filter="coq")
        assert vector.values == {}


def all_partitions(items):
    """Every partition of the item list (restricted growth strings)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in all_partitions(rest):
        for i in range(len(partition)):
            yield partition[:i] + [partition[i] | {first}] + partition[i + 1 :]
        yield partition + [{first}]


class TestClustering:
    def test_louvain_two_triangles_is_optimal(self):
        skeleton = make_skeleton(TWO_TRIANGLES)
        result = cluster(skeleton, "louvain", {"seed": 0})
        got = {}
        for node, label in result.assignment.items():
            got.setdefault(label, set()).add(node)

        g = nx.Graph()
        g.add_nodes_from(skeleton.nodes)
        g.add_edges_from((e.src, e.dst) for e in skeleton.edges)
        best = max(
            all_partitions(sorted(skeleton.nodes)),
            key=lambda p: nx.community.modularity(g, p),
        )
        assert {frozenset(c) for c in got.values()} == {
            frozenset(c) for c in best
        }
        assert {frozenset(c) for c in best} == {
            frozenset({"a1", "a2", "a3"}),
            frozenset({"b1", "b2", "b3"}),
        }
        assert result.quality == pytest.approx(
            nx.community.modularity(g, best)
        )

    def test_greedy_modularity_two_triangles(self):
        skeleton = make_skeleton(TWO_TRIANGLES)
        result = cluster(skeleton, "greedy_modularity")
        got = {}
        for node, label in result.assignment.items():
            got.setdefault(label, set()).add(node)
        assert {frozenset(c) for c in got.values()} == {
            frozenset({"a1", "a2", "a3"}),
            frozenset({"b1", "b2", "b3"}),
        }

    def test_spectral_two_cliques(self):
        # The embedding takes exactly k nontrivial eigenvectors, so a
        # thin single bridge gets split off as its own cluster; with a
        # double bridge the community cut is the cheaper one.
        a = [f"a{i}" for i in range(1, 6)]
        b = [f"b{i}" for i in range(1, 6)]
        edges = [
            (x, y)
            for part in (a, b)
            for i, x in enumerate(part)
            for y in part[i + 1 :]
        ]
        edges += [("a1", "b1"), ("a2", "b2")]
        result = cluster(make_skeleton(edges), "spectral", {"k": 2, "seed": 0})
        labels = result.assignment
        assert len({labels[v] for v in a}) == 1
        assert len({labels[v] for v in b}) == 1
        assert labels["a1"] != labels["b1"]

    def test_by_sort_golden(self, semantic_store):
        skeleton = extract_skeleton(semantic_store)
        result = cluster(skeleton, "by_sort")
        assert result.assignment == {"D1": 0, "D2": 0, "L1": 1, "T1": 2}

    def test_by_depth_golden(self, semantic_store):
        skeleton = extract_skeleton(semantic_store)
        result = cluster(skeleton, "by_depth")
        assert result.assignment == {"D1": 0, "L1": 0, "T1": 0, "D2": 1}

    def test_labels_contiguous_from_zero(self):
        rng = random.Random(14)
        for method in ("louvain", "greedy_modularity", "by_sort", "spectral"):
            edges = [
                (f"n{rng.randrange(9)}", f"n{rng.randrange(9)}")
                for _ in range(12)
            ]
            edges = [(s, t) for s, t in edges if s != t]
            skeleton = make_skeleton(edges, extra_nodes=("n0", "z_lone"))
            result = cluster(skeleton, method, {"seed": 1})
            labels = sorted(set(result.assignment.values()))
            assert labels == list(range(len(labels)))
            assert set(result.assignment) == set(skeleton.nodes)

    def test_seeded_determinism(self):
        skeleton = make_skeleton(TWO_TRIANGLES)
        a = cluster(skeleton, "louvain", {"seed": 7}).assignment
        b = cluster(skeleton, "louvain", {"seed": 7}).assignment
        assert a == b
        c = cluster(skeleton, "spectral", {"k": 2, "seed": 7}).assignment
        d = cluster(skeleton, "spectral", {"k": 2, "seed": 7}).assignment
        assert c == d

    def test_edgeless_louvain_singletons(self):
        skeleton = make_skeleton([], extra_nodes=("a", "b", "c"))
        result = cluster(skeleton, "louvain")
        assert sorted(result.assignment.values()) == [0, 1, 2]
        assert result.quality is None

    def test_empty_graph(self):
        result = cluster(make_skeleton([]), "louvain")
        assert result.assignment == {} and result.quality is None


class TestErrors:
    def test_unknown_metric(self, semantic_store):
        skeleton = extract_skeleton(semantic_store)
        with pytest.raises(UnknownMetric):
            compute_metric(skeleton, "eigenvector")

    def test_unknown_method(self, semantic_store):
        skeleton = extract_skeleton(semantic_store)
        with pytest.raises(UnknownMethod):
            cluster(skeleton, "kmeans")

    def test_spectral_bad_k(self, semantic_store):
        skeleton = extract_skeleton(semantic_store)
        with pytest.raises(UnknownMethod):
            cluster(skeleton, "spectral", {"k": 0})
        with pytest.raises(EmptyGraph):
            cluster(skeleton, "spectral", {"k": 99})

    def test_method_names_exported(self):
        assert "louvain" in CLUSTER_METHODS
        assert "pagerank" in METRIC_NAMES
