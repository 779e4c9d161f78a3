"""LeanNets plugin: semantic networks over the raw store.

The plugin reads record strings as JSON documents with mathematical fields
(sort, source, title, notes, content, state), projects the store onto a
directed graph (atoms as nodes, width-1 atom-to-atom nerves as edges
ref[0] -> ref[1]), derives edge classifications from the endpoint atoms,
and runs semantic change propagation over that graph.

Records that are not JSON objects never fail to parse: the text is kept in
``notes`` and a leading sort keyword, when present, still classifies the
entry. Everything here is pure over a store snapshot.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .store import Store, StoreError

SORTS = (
    "definition",
    "theorem",
    "lemma",
    "proposition",
    "corollary",
    "example",
    "proof",
)
SOURCES = ("tex", "lean")
UNKNOWN = "unknown"

# Edge meanings determined by the endpoint sort pair (ref[0], ref[1]).
SORT_PAIR_MEANINGS = {
    ("theorem", "proof"): "Statement-proof link",
    ("theorem", "definition"): "Depends on definition",
    ("proof", "lemma"): "Proof cites lemma",
    ("theorem", "theorem"): "Cross-source correspondence",
}

STATEMENT_PROOF_RECORD = "statement-proof link"

_ENTRYREF_RE = re.compile(r"\\entryref\{([^{}]*)\}\{([^{}]*)\}")
_ENTRYREF_ANY_RE = re.compile(r"\\entryref\b")


class NotAnEdge(StoreError):
    code = "not_an_edge"


class UnknownAtom(StoreError):
    code = "unknown_atom"


@dataclass(frozen=True)
class RecordFields:
    sort: str = UNKNOWN
    source: str = UNKNOWN
    title: Optional[str] = None
    notes: Optional[str] = None
    content: Optional[str] = None
    state: Optional[str] = None
    # Original strings when the record used a value outside the known enums.
    raw_sort: Optional[str] = None
    raw_source: Optional[str] = None
    extra: tuple[tuple[str, object], ...] = ()

    def to_record_dict(self) -> dict:
        """Field set as a JSON-ready dict; inverse of parse_record on
        JSON-object records."""
        out: dict = {}
        sort_value = self.raw_sort if self.raw_sort is not None else (
            self.sort if self.sort != UNKNOWN else None
        )
        source_value = self.raw_source if self.raw_source is not None else (
            self.source if self.source != UNKNOWN else None
        )
        if sort_value is not None:
            out["sort"] = sort_value
        if source_value is not None:
            out["source"] = source_value
        for name in ("title", "state", "content", "notes"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        out.update(dict(self.extra))
        return out


def parse_record(record: str) -> RecordFields:
    """Interpret a record string; total by design.

    JSON objects map their fields verbatim (unrecognized sort/source values
    classify as unknown but the original string is retained). Any other
    record is plain text: it lands in notes, and its first word classifies
    the sort when it names one (the prototype's figure data labels entries
    "definition ...", "theorem ..." without JSON wrapping).
    """
    doc = None
    if record.lstrip()[:1] == "{":
        try:
            doc = json.loads(record)
        except (json.JSONDecodeError, RecursionError):
            doc = None
    if not isinstance(doc, dict):
        return _parse_plain(record)

    known_string = {}
    extra = []
    for key, value in doc.items():
        if key in ("sort", "source", "title", "notes", "content", "state") and isinstance(
            value, str
        ):
            known_string[key] = value
        else:
            extra.append((key, value))

    raw_sort = known_string.get("sort")
    raw_source = known_string.get("source")
    sort = raw_sort if raw_sort in SORTS else UNKNOWN
    source = raw_source if raw_source in SOURCES else UNKNOWN
    return RecordFields(
        sort=sort,
        source=source,
        title=known_string.get("title"),
        notes=known_string.get("notes"),
        content=known_string.get("content"),
        state=known_string.get("state"),
        raw_sort=raw_sort,
        raw_source=raw_source,
        extra=tuple(extra),
    )


def _parse_plain(record: str) -> RecordFields:
    words = record.split(None, 1)
    if not words:
        return RecordFields()
    head = words[0].lower()
    sort = head if head in SORTS else UNKNOWN
    return RecordFields(sort=sort, notes=record)


@dataclass(frozen=True)
class SkeletonEdge:
    id: str
    src: str
    dst: str
    fields: RecordFields


@dataclass
class SkeletonGraph:
    nodes: dict[str, RecordFields] = field(default_factory=dict)
    edges: list[SkeletonEdge] = field(default_factory=list)
    by_source: dict[str, "SkeletonGraph"] = field(default_factory=dict)

    def node_ids(self) -> list[str]:
        return sorted(self.nodes)

    def successors(self) -> dict[str, list[str]]:
        """Forward adjacency, neighbors ascending, parallels collapsed."""
        adj: dict[str, set[str]] = {n: set() for n in self.nodes}
        for e in self.edges:
            adj[e.src].add(e.dst)
        return {n: sorted(s) for n, s in adj.items()}

    def predecessors(self) -> dict[str, list[str]]:
        adj: dict[str, set[str]] = {n: set() for n in self.nodes}
        for e in self.edges:
            adj[e.dst].add(e.src)
        return {n: sorted(s) for n, s in adj.items()}


def extract_skeleton(store: Store) -> SkeletonGraph:
    """Project the store onto its directed semantic graph.

    Atoms become nodes. A width-1 nerve whose both references are atoms
    becomes the edge ref[0] -> ref[1]; anything wider, or referencing a
    non-atom, stays out of the graph. Parallel edges and 2-cycles are kept.
    The per-source partition drops every cross-source edge, so per-source
    analysis is immune to bridge edges between conventions.
    """
    graph = SkeletonGraph()
    for nerve_id in sorted(store.nerves):
        nerve = store.nerves[nerve_id]
        if nerve.is_atom():
            graph.nodes[nerve_id] = parse_record(nerve.record)
    for nerve_id in sorted(store.nerves):
        nerve = store.nerves[nerve_id]
        if nerve.width == 1:
            src, dst = nerve.ref
            if src in graph.nodes and dst in graph.nodes:
                graph.edges.append(
                    SkeletonEdge(nerve_id, src, dst, parse_record(nerve.record))
                )

    sources = sorted({f.source for f in graph.nodes.values()})
    for source in sources:
        sub = SkeletonGraph()
        sub.nodes = {
            n: f for n, f in graph.nodes.items() if f.source == source
        }
        sub.edges = [
            e for e in graph.edges if e.src in sub.nodes and e.dst in sub.nodes
        ]
        graph.by_source[source] = sub
    return graph


@dataclass(frozen=True)
class SortPair:
    pair: tuple[str, str]
    source_pair: tuple[str, str]
    meaning: Optional[str] = None


def derive_sort_pair(store: Store, edge_id: str) -> SortPair:
    """Classification an edge inherits from its endpoint atoms.

    Never authored: recomputed from the two atoms' parsed records, so it
    stays consistent under any unrelated store edit.
    """
    nerve = store.get(edge_id)
    if nerve is None or nerve.width != 1:
        raise NotAnEdge(f"{edge_id!r} is not a width-1 nerve")
    src, dst = nerve.ref
    src_nerve, dst_nerve = store.get(src), store.get(dst)
    if src_nerve is None or dst_nerve is None or not (
        src_nerve.is_atom() and dst_nerve.is_atom()
    ):
        raise NotAnEdge(f"{edge_id!r} does not join two atoms")
    a, b = parse_record(src_nerve.record), parse_record(dst_nerve.record)
    pair = (a.sort, b.sort)
    return SortPair(
        pair=pair,
        source_pair=(a.source, b.source),
        meaning=SORT_PAIR_MEANINGS.get(pair),
    )


def inherited_fields(store: Store, nerve_id: str) -> tuple[tuple[str, str], ...]:
    """Ordered (sort, source) tuple over a nerve's references.

    Each reference contributes its own parsed record fields whether or not
    it is an atom; no recursion into deeper structure.
    """
    from .store import NotFound

    nerve = store.get(nerve_id)
    if nerve is None:
        raise NotFound(f"no such nerve: {nerve_id}")
    if nerve.width < 1:
        raise ValueError("inherited fields are defined for width >= 1 nerves")
    out = []
    for r in nerve.ref:
        ref_nerve = store.get(r)
        if ref_nerve is None:
            raise NotFound(f"ref {r} of {nerve_id} does not resolve")
        f = parse_record(ref_nerve.record)
        out.append((f.sort, f.source))
    return tuple(out)


@dataclass
class AffectedSet:
    changed: str
    affected: list[str] = field(default_factory=list)
    hop_distance: dict[str, int] = field(default_factory=dict)


def propagate(skeleton: SkeletonGraph, changed: str, reverse: bool = False) -> AffectedSet:
    """Flag every atom semantically downstream of a changed atom.

    Content addressing keeps identities local, so a record edit never
    cascades through hashes; this traversal is the explicit substitute.
    BFS follows edge direction ref[0] -> ref[1] (dependency to dependent);
    ``reverse`` walks the transposed graph instead. Neighbors are visited
    in ascending id order, making discovery order deterministic.
    """
    if changed not in skeleton.nodes:
        raise UnknownAtom(f"{changed!r} is not a node of the skeleton")
    adjacency = skeleton.predecessors() if reverse else skeleton.successors()
    result = AffectedSet(changed=changed)
    seen = {changed}
    queue = deque([(changed, 0)])
    while queue:
        node, hops = queue.popleft()
        for nxt in adjacency[node]:
            if nxt not in seen:
                seen.add(nxt)
                result.affected.append(nxt)
                result.hop_distance[nxt] = hops + 1
                queue.append((nxt, hops + 1))
    return result


class EntryrefScan(tuple):
    """Result of scanning notes text: well-formed refs plus a count of
    \\entryref occurrences whose braces do not parse."""

    __slots__ = ()

    def __new__(cls, refs: list[tuple[str, str]], malformed: int):
        return super().__new__(cls, (refs, malformed))

    @property
    def refs(self) -> list[tuple[str, str]]:
        return self[0]

    @property
    def malformed(self) -> int:
        return self[1]


def scan_entryrefs(fields: RecordFields) -> EntryrefScan:
    """Inline references \\entryref{hash}{display} from the notes field."""
    notes = fields.notes or ""
    refs = [(m.group(1), m.group(2)) for m in _ENTRYREF_RE.finditer(notes)]
    malformed = len(_ENTRYREF_ANY_RE.findall(notes)) - len(refs)
    return EntryrefScan(refs, malformed)


def export_network(store: Store) -> dict:
    """Skeleton as a plain JSON document for the CLI and the HTTP API.

    Shape: {nodes: [{id, sort, source, title}], edges: [{id, from, to,
    sort_pair, source_pair, meaning, notes}]}, both lists ascending by id.
    """
    skeleton = extract_skeleton(store)
    nodes = [
        {
            "id": node_id,
            "sort": f.sort,
            "source": f.source,
            "title": f.title,
        }
        for node_id, f in sorted(skeleton.nodes.items())
    ]
    edges = []
    for e in sorted(skeleton.edges, key=lambda e: e.id):
        pair = derive_sort_pair(store, e.id)
        edges.append(
            {
                "id": e.id,
                "from": e.src,
                "to": e.dst,
                "sort_pair": list(pair.pair),
                "source_pair": list(pair.source_pair),
                "meaning": pair.meaning,
                "notes": e.fields.notes,
            }
        )
    return {"nodes": nodes, "edges": edges}
