"""Width and depth decompositions of a store.

Width is syntactic: reference count minus one. Depth is the admission stage
of the monotone filtration that starts from the atoms and repeatedly admits
every nerve whose references are all admitted. Nerves trapped behind a
reference cycle are never admitted and carry the sentinel depth -1; they
form the set U, and each member owns a finite witness path into a cycle.

All functions are pure over a store snapshot and assume the store already
passes the structural axioms (1-5).
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field

from .store import Store

UNDEPTHED = -1


@dataclass
class WidthProfile:
    widths: dict[str, int] = field(default_factory=dict)
    histogram: dict[int, int] = field(default_factory=dict)


@dataclass
class DepthAssignment:
    depths: dict[str, int] = field(default_factory=dict)
    stabilization_stage: int = 0

    def undepthed(self) -> set[str]:
        return {i for i, d in self.depths.items() if d == UNDEPTHED}


def width_profile(store: Store) -> WidthProfile:
    widths = {n.id: n.width for n in store}
    return WidthProfile(widths=widths, histogram=dict(Counter(widths.values())))


def depth_filtration(store: Store) -> DepthAssignment:
    """Minimal admission stage per nerve; -1 for the never-admitted.

    Worklist over the reverse-reference index instead of whole-set
    iteration: each nerve is finalized once all its references are, giving
    depth(e) = 1 + max depth over refs in O(total reference length). Atoms
    are the base case at stage 0; their self-reference is not a dependency.
    """
    depths: dict[str, int] = {}
    dependents: dict[str, list[str]] = {i: [] for i in store.nerves}
    pending: dict[str, int] = {}
    queue: deque[str] = deque()

    for nerve in store:
        if nerve.is_atom():
            depths[nerve.id] = 0
            queue.append(nerve.id)
        else:
            pending[nerve.id] = len(nerve.ref)
            for r in nerve.ref:
                dependents[r].append(nerve.id)

    while queue:
        done = queue.popleft()
        for dep in dependents[done]:
            pending[dep] -= 1
            if pending[dep] == 0:
                refs = store.nerves[dep].ref
                depths[dep] = 1 + max(depths[r] for r in refs)
                queue.append(dep)

    stage = max((d for d in depths.values()), default=0)
    for nerve_id in store.nerves:
        if nerve_id not in depths:
            depths[nerve_id] = UNDEPTHED
    return DepthAssignment(depths=depths, stabilization_stage=stage)


def undepthed_set(store: Store, assignment: DepthAssignment) -> dict[str, list[str]]:
    """The set U of depth -1 nerves, each with a reference-path witness.

    The witness is the shortest path (ties broken toward lexicographically
    smaller ids) from the member to a nerve on a cycle; for a member that is
    itself on a cycle, the witness walks the shortest cycle back to it.
    Atoms' self-references never count as cycle edges.
    """
    undepthed = assignment.undepthed()
    if not undepthed:
        return {}

    # Edges of the reference digraph, restricted to width>0 nerves.
    successors = {
        n.id: sorted(n.ref) for n in store if not n.is_atom()
    }
    cyclic = _nodes_on_cycles(successors)

    dist = _distance_to(set(cyclic), successors)
    witnesses: dict[str, list[str]] = {}
    for member in sorted(undepthed):
        if member in cyclic:
            witnesses[member] = _shortest_cycle_through(member, successors)
        else:
            witnesses[member] = _descend(member, dist, successors)
    return witnesses


def _nodes_on_cycles(successors: dict[str, list[str]]) -> set[str]:
    """Nodes inside a strongly connected component of size >= 2.

    Iterative Tarjan; width>0 nerves never self-reference, so every
    nontrivial SCC really is a cycle carrier.
    """
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = [0]
    result: set[str] = set()

    def strongconnect(root: str) -> None:
        work = [(root, 0)]
        while work:
            node, pi = work[-1]
            if pi == 0:
                index[node] = low[node] = counter[0]
                counter[0] += 1
                stack.append(node)
                on_stack.add(node)
            advanced = False
            for succ in successors.get(node, [])[pi:]:
                pi += 1
                work[-1] = (node, pi)
                if succ not in index:
                    work.append((succ, 0))
                    advanced = True
                    break
                if succ in on_stack:
                    low[node] = min(low[node], index[succ])
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
                if len(comp) > 1:
                    result.update(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])

    for node in successors:
        if node not in index:
            strongconnect(node)
    return result


def _distance_to(targets: set[str], successors: dict[str, list[str]]) -> dict[str, int]:
    """BFS over reversed reference edges from every target at once."""
    predecessors: dict[str, list[str]] = {}
    for node, succs in successors.items():
        for s in succs:
            predecessors.setdefault(s, []).append(node)
    dist = {t: 0 for t in targets}
    queue = deque(sorted(targets))
    while queue:
        node = queue.popleft()
        for pred in sorted(predecessors.get(node, [])):
            if pred not in dist:
                dist[pred] = dist[node] + 1
                queue.append(pred)
    return dist


def _descend(start: str, dist: dict[str, int], successors: dict[str, list[str]]) -> list[str]:
    """Greedy walk down the distance gradient; smallest id at each tie."""
    path = [start]
    node = start
    while dist[node] > 0:
        node = min(s for s in successors[node] if dist.get(s) == dist[node] - 1)
        path.append(node)
    return path


def _shortest_cycle_through(node: str, successors: dict[str, list[str]]) -> list[str]:
    dist_back = _distance_to({node}, successors)
    candidates = [s for s in successors[node] if s in dist_back]
    best = min(candidates, key=lambda s: (dist_back[s], s))
    return [node] + _descend(best, dist_back, successors)
