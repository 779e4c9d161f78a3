"""
Depth filtration and reference cycles
=====================================

Content addressing hashes only the record, never the references, so
reference cycles are representable. This walkthrough layers a store,
watches the depth filtration climb, then wires a cycle and inspects the
witnesses that explain why its members never acquire a depth.
"""

import json

from astrolabe import Store, compute_id, loads
from astrolabe import decomposition

store = Store()

# Four atoms: depth 0 by definition.
a = [store.insert_atom(f"observation {i}") for i in range(4)]

# A chain of nerves, each referring one level down.
e1 = store.insert_nerve("pairs 0 and 1", (a[0], a[1]))
e2 = store.insert_nerve("pairs 2 and 3", (a[2], a[3]))
f1 = store.insert_nerve("joins the pairs", (e1, e2))
m1 = store.insert_nerve("summarizes the join", (f1, a[0]))

assignment = decomposition.depth_filtration(store)
for nerve_id in (a[0], e1, f1, m1):
    print(nerve_id, "depth", assignment.depths[nerve_id])
print("stabilizes after stage", assignment.stabilization_stage)

# Width is orthogonal to depth: it counts references, not layers.
profile = decomposition.width_profile(store)
print("width histogram:", dict(sorted(profile.histogram.items())))

# Now a cycle: three nerves chasing each other's ids. Authoring inserts
# refuse unknown references, but ids depend only on records, so all
# three ids are known up front and the cycle can be written as a file.
doc = {
    nerve.id: {"ref": list(nerve.ref), "record": nerve.record}
    for nerve in store
}
r = [compute_id(f"cycle nerve {i}") for i in range(3)]
ballast = a[0]
doc[r[0]] = {"ref": [r[1], ballast], "record": "cycle nerve 0"}
doc[r[1]] = {"ref": [r[2], ballast], "record": "cycle nerve 1"}
doc[r[2]] = {"ref": [r[0], ballast], "record": "cycle nerve 2"}

cycle_store = loads(json.dumps(doc))
print("cycle store validates:", cycle_store.validate().is_well_formed)

# The cycle members are stored but never admitted by any stage.
assignment = decomposition.depth_filtration(cycle_store)
print("undepthed:", assignment.undepthed())

# Each trapped nerve carries a witness path into a cycle.
witnesses = decomposition.undepthed_set(cycle_store, assignment)
for nerve_id, path in sorted(witnesses.items()):
    print(nerve_id, "->", " -> ".join(path[1:]))

# Depths of everything else are untouched by the cycle's presence.
assert assignment.depths[m1] == 3
print("m1 still at depth", assignment.depths[m1])
