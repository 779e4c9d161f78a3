"""
Building a two-source knowledge base
====================================

A small end-to-end tour: ingest an informal LaTeX note and its formal
Lean counterpart into one store, bridge them with a cross-source edge,
then ask the network questions.
"""

from astrolabe import Store
from astrolabe import ingest, leannets, metrics

store = Store()

# A theorem with its prose proof, as it would appear in a LaTeX note.
tex_note = r"""
\begin{definition}[Compact Space]
A subset $K$ is compact if every open cover has a finite subcover.
\end{definition}
\begin{theorem}[Heine-Borel]
A subset of $\mathbb{R}^n$ is compact iff it is closed and bounded.
\end{theorem}
\begin{proof}
By contradiction, extract a sequence with no convergent subsequence ...
\end{proof}
"""
tex_ids = ingest.commit(store, ingest.parse_tex(tex_note))
tex_definition, tex_theorem = tex_ids[0], tex_ids[1]
print("tex nerves:", tex_ids)

# The formal side: one theorem, split into statement and proof atoms so
# the two keep independent identities.
lean_note = """
theorem isCompact_iff_closed_bounded (s : Set Rn) :
    IsCompact s <-> IsClosed s && Bounded s := by
  constructor <;> intro h
  exact proof_omitted
"""
lean_result = ingest.parse_lean(lean_note)

# Identity is the hash of the record alone. The parser links statement
# and proof with one fixed record, so a second such edge in the same
# store would collide with the tex one: same record, same id, different
# refs. The insert refuses rather than silently rebinding.
try:
    ingest.commit(store, lean_result)
except Exception as conflict:
    print("second fixed-record link refused:", type(conflict).__name__)

# Distinct pairs coexist once the linking record is distinctive, which
# is the authored-edge convention anyway: say what the link means.
lean_statement = store.insert_atom(lean_result.atoms[0][0])
lean_proof = store.insert_atom(lean_result.atoms[1][0])
store.insert_nerve(
    "proof of isCompact_iff_closed_bounded", (lean_statement, lean_proof)
)

# Bridge the informal and formal statements. Sort and source pairs are
# inherited from the endpoints, so the edge record only carries intent.
bridge = store.insert_nerve("formalized as", (tex_theorem, lean_statement))
print("cross-source edge:", bridge,
      "|", leannets.derive_sort_pair(store, bridge).meaning)

# The skeleton graph has one node per atom and one directed edge per
# width-1 nerve joining two atoms.
skeleton = leannets.extract_skeleton(store)
print(f"skeleton: {len(skeleton.nodes)} nodes, {len(skeleton.edges)} edges")
for source, subgraph in sorted(skeleton.by_source.items()):
    print(f"  {source}: {len(subgraph.nodes)} nodes, {len(subgraph.edges)} edges")

titles = {
    node: f"{fields.source}:{fields.title or fields.sort}"
    for node, fields in skeleton.nodes.items()
}

# If the informal theorem statement changes, everything downstream of it
# is flagged: its prose proof, and through the bridge the formal pair.
affected = leannets.propagate(skeleton, tex_theorem)
print("editing", titles[tex_theorem], "affects:",
      [titles[a] for a in affected.affected])

# An authored dependency edge; its classification is inherited too.
uses = store.insert_nerve("uses compactness", (tex_theorem, tex_definition))
print("authored edge:", uses,
      "|", leannets.derive_sort_pair(store, uses).meaning)

# Walking edges in reverse answers the dual question: a change to the
# definition reaches whoever depends on it.
skeleton = leannets.extract_skeleton(store)
affected = leannets.propagate(skeleton, tex_definition, reverse=True)
print("editing", titles[tex_definition], "reaches:",
      [titles[a] for a in affected.affected])

# Centrality on the same skeleton; per-source values never see the bridge.
ranks = metrics.compute_metric(skeleton, "pagerank").values
top = max(ranks, key=ranks.get)
print("highest pagerank:", titles[top], round(ranks[top], 4))

tex_only = metrics.compute_metric(skeleton, "pagerank", source_filter="tex")
print("tex-only pagerank over", len(tex_only.values), "atoms")
