"""Independent reference implementations used to check the library.

Each oracle takes a different route than the code under test: whole-set
fixpoint iteration instead of a worklist, memoized recursion instead of
iteration, networkx SCC analysis instead of hand-rolled Tarjan, boolean
matrix closure instead of BFS, literal path enumeration and batched
shortest-walk counting instead of Brandes, truncated series summation
instead of fixed-point Katz.
"""

from __future__ import annotations

import itertools
import random
from typing import Optional

import networkx as nx
import numpy as np

from astrolabe.store import STRUCTURAL, Nerve, Store


def split_refs(store: Store) -> tuple[dict[str, list[str]], set[str]]:
    """(reference lists of width>0 nerves, atom id set)."""
    refs = {n.id: list(n.ref) for n in store if not n.is_atom()}
    atoms = {n.id for n in store if n.is_atom()}
    return refs, atoms


def naive_filtration(
    refs: dict[str, list[str]], atoms: set[str]
) -> tuple[dict[str, int], int, list[set[str]]]:
    """Whole-set fixpoint: recompute the admitted set from scratch per stage.

    Returns (depths with -1 for never-admitted, stabilization stage,
    admitted set per stage).
    """
    depths = {a: 0 for a in atoms}
    stages = [set(atoms)]
    while True:
        current = stages[-1]
        admitted = set(current)
        for nerve_id, ref in refs.items():
            if all(r in current for r in ref):
                admitted.add(nerve_id)
        if admitted == current:
            break
        stage = len(stages)
        for nerve_id in admitted - current:
            depths[nerve_id] = stage
        stages.append(admitted)
    for nerve_id in refs:
        depths.setdefault(nerve_id, -1)
    return depths, len(stages) - 1, stages


def recursive_depths(refs: dict[str, list[str]], atoms: set[str]) -> dict[str, int]:
    """Memoized recursion; only valid on acyclic stores."""
    memo: dict[str, int] = {a: 0 for a in atoms}

    def depth(nerve_id: str) -> int:
        if nerve_id not in memo:
            memo[nerve_id] = 1 + max(depth(r) for r in refs[nerve_id])
        return memo[nerve_id]

    for nerve_id in refs:
        depth(nerve_id)
    return memo


def cycle_reachers(refs: dict[str, list[str]], atoms: set[str]) -> set[str]:
    """Ids that reach a nontrivial SCC of the reference digraph (networkx)."""
    g = nx.DiGraph()
    g.add_nodes_from(atoms)
    g.add_nodes_from(refs)
    for nerve_id, ref in refs.items():
        for r in ref:
            g.add_edge(nerve_id, r)
    cyclic = set()
    for component in nx.strongly_connected_components(g):
        if len(component) > 1:
            cyclic |= component
    reachers = set(cyclic)
    for node in g.nodes:
        if node not in reachers and any(
            target in cyclic for target in nx.descendants(g, node)
        ):
            reachers.add(node)
    return reachers


def closure_reachable(adjacency: dict[str, list[str]]) -> dict[str, set[str]]:
    """Forward-reachable sets via boolean matrix closure (numpy)."""
    nodes = sorted(adjacency)
    index = {v: i for i, v in enumerate(nodes)}
    n = len(nodes)
    a = np.zeros((n, n), dtype=bool)
    for v, out in adjacency.items():
        for w in out:
            a[index[v], index[w]] = True
    closure = a.copy()
    for _ in range(n):
        update = closure | (closure @ a)
        if (update == closure).all():
            break
        closure = update
    return {
        v: {nodes[j] for j in range(n) if closure[index[v], j]} for v in nodes
    }


def enumerate_paths_betweenness(adjacency: dict[str, list[str]]) -> dict[str, float]:
    """Literal definition: enumerate every simple path per ordered pair,
    keep the shortest ones, credit interior vertices fractionally."""
    nodes = sorted(adjacency)
    bc = {v: 0.0 for v in nodes}

    def simple_paths(start: str, goal: str) -> list[list[str]]:
        out: list[list[str]] = []
        stack = [(start, [start])]
        while stack:
            node, path = stack.pop()
            if node == goal:
                out.append(path)
                continue
            for nxt in adjacency[node]:
                if nxt not in path:
                    stack.append((nxt, path + [nxt]))
        return out

    for s, t in itertools.permutations(nodes, 2):
        paths = simple_paths(s, t)
        if not paths:
            continue
        shortest = min(len(p) for p in paths)
        geodesics = [p for p in paths if len(p) == shortest]
        for path in geodesics:
            for interior in path[1:-1]:
                bc[interior] += 1.0 / len(geodesics)
    return bc


def batched_betweenness_oracle(bits_array: np.ndarray, n: int = 5) -> np.ndarray:
    """Betweenness of many edge-subset graphs at once by walk counting.

    A walk of minimal length between two nodes is necessarily a simple
    shortest path, so sigma_st = (A^d(s,t))_st, and the pair dependency of
    v is sigma_sv * sigma_vt / sigma_st exactly when d(s,v) + d(v,t) =
    d(s,t). Returns an array of shape (len(bits_array), n).
    """
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    g = len(bits_array)
    a = np.zeros((g, n, n), dtype=np.float64)
    for k, (i, j) in enumerate(pairs):
        a[:, i, j] = (bits_array >> k) & 1

    walks = [None, a]
    for _ in range(2, n):
        walks.append(walks[-1] @ a)
    dist = np.full((g, n, n), np.inf)
    for k in range(1, n):
        newly = (walks[k] > 0) & np.isinf(dist)
        dist[newly] = k
    sigma = np.zeros((g, n, n))
    for k in range(1, n):
        sigma = np.where(dist == k, walks[k], sigma)

    d_sv = dist[:, :, :, None]
    d_vt = dist[:, None, :, :]
    d_st = dist[:, :, None, :]
    compatible = ((d_sv + d_vt) == d_st) & np.isfinite(d_st)
    denominator = np.where(sigma > 0, sigma, 1.0)[:, :, None, :]
    contrib = np.where(
        compatible,
        sigma[:, :, :, None] * sigma[:, None, :, :] / denominator,
        0.0,
    )
    idx = np.arange(n)
    contrib[:, idx, idx, :] = 0.0  # s == v
    contrib[:, :, idx, idx] = 0.0  # v == t
    contrib[:, idx, :, idx] = 0.0  # s == t
    return contrib.sum(axis=(1, 3))


def katz_series(
    adjacency: dict[str, list[str]], alpha: float, beta: float, terms: int = 400
) -> dict[str, float]:
    """Truncated power series beta * sum_k (alpha A^T)^k 1."""
    nodes = sorted(adjacency)
    index = {v: i for i, v in enumerate(nodes)}
    n = len(nodes)
    at = np.zeros((n, n))
    for v, out in adjacency.items():
        for w in out:
            at[index[w], index[v]] = 1.0
    total = np.zeros(n)
    term = np.full(n, beta)
    for _ in range(terms):
        total += term
        term = alpha * (at @ term)
    return {v: float(total[index[v]]) for v in nodes}


def random_structural_store(
    rng: random.Random,
    max_nerves: int = 50,
    cycle_probability: float = 0.3,
) -> Store:
    """A well-formed (axioms 1-5) store with synthetic ids.

    Grows an acyclic layer of atoms and higher nerves, then with the given
    probability injects a reference ring (each member carries one atom as
    ballast, so every ring nerve has width >= 1) plus an optional tail
    nerve hanging off the ring, mirroring how labeled figure data is shaped.
    """
    store = Store(STRUCTURAL)
    total = rng.randint(1, max_nerves)
    n_atoms = rng.randint(max(1, total // 3), total)
    ids: list[str] = []
    for i in range(n_atoms):
        nerve_id = f"a{i}"
        store.nerves[nerve_id] = Nerve(nerve_id, (nerve_id,), f"atom {i}")
        ids.append(nerve_id)

    for i in range(total - n_atoms):
        if len(ids) < 2:
            break
        nerve_id = f"n{i}"
        k = rng.randint(2, min(5, len(ids)))
        ref = tuple(rng.sample(ids, k))
        store.nerves[nerve_id] = Nerve(nerve_id, ref, f"nerve {i}")
        ids.append(nerve_id)

    if rng.random() < cycle_probability:
        length = rng.randint(2, 4)
        ring = [f"c{i}" for i in range(length)]
        for i, nerve_id in enumerate(ring):
            ballast = rng.choice(ids)
            ref = (ring[(i + 1) % length], ballast)
            store.nerves[nerve_id] = Nerve(nerve_id, ref, f"ring {i}")
        if rng.random() < 0.5:
            store.nerves["t0"] = Nerve("t0", (ring[0], rng.choice(ids)), "tail")
    return store


def _first_primes(count: int) -> list[int]:
    primes: list[int] = []
    candidate = 2
    while len(primes) < count:
        if all(candidate % p for p in primes if p * p <= candidate):
            primes.append(candidate)
        candidate += 1
    return primes


def _icbrt(x: int) -> int:
    r = 1 << ((x.bit_length() + 2) // 3)
    while True:
        better = (2 * r + x // (r * r)) // 3
        if better >= r:
            return r
        r = better


def pure_sha256_hex(data: bytes) -> str:
    """From-scratch SHA-256 built from the standard's definition.

    The round constants are not copied from anywhere: they are derived
    here as the fractional bits of square and cube roots of the first
    primes, which is their mathematical definition. Slow, but an oracle
    only needs to be right.
    """
    import math

    primes = _first_primes(64)
    h = [math.isqrt(p << 64) & 0xFFFFFFFF for p in primes[:8]]
    k = [_icbrt(p << 96) & 0xFFFFFFFF for p in primes]

    def rotr(x: int, n: int) -> int:
        return ((x >> n) | (x << (32 - n))) & 0xFFFFFFFF

    length = len(data) * 8
    data = data + b"\x80"
    data = data + b"\x00" * ((56 - len(data) % 64) % 64)
    data = data + length.to_bytes(8, "big")

    for start in range(0, len(data), 64):
        w = [
            int.from_bytes(data[start + 4 * j : start + 4 * j + 4], "big")
            for j in range(16)
        ]
        for j in range(16, 64):
            s0 = rotr(w[j - 15], 7) ^ rotr(w[j - 15], 18) ^ (w[j - 15] >> 3)
            s1 = rotr(w[j - 2], 17) ^ rotr(w[j - 2], 19) ^ (w[j - 2] >> 10)
            w.append((w[j - 16] + s0 + w[j - 7] + s1) & 0xFFFFFFFF)
        a, b, c, d, e, f, g, hh = h
        for j in range(64):
            s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25)
            ch = (e & f) ^ (~e & g)
            t1 = (hh + s1 + ch + k[j] + w[j]) & 0xFFFFFFFF
            s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22)
            maj = (a & b) ^ (a & c) ^ (b & c)
            t2 = (s0 + maj) & 0xFFFFFFFF
            hh, g, f, e, d, c, b, a = (
                g, f, e, (d + t1) & 0xFFFFFFFF, c, b, a, (t1 + t2) & 0xFFFFFFFF,
            )
        h = [
            (x + y) & 0xFFFFFFFF
            for x, y in zip(h, (a, b, c, d, e, f, g, hh))
        ]
    return "".join(f"{x:08x}" for x in h)
