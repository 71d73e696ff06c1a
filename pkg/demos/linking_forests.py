"""Link whole trees together and keep answering meet queries.

The fixed-level forest classifies each tree into a stage by an Ackermann
row; the adaptive wrapper re-tunes the level count as the workload's
link/query mix drifts.

Run:  python3 demos/linking_forests.py
"""

import random

from dynca import AckermannTable, AdaptiveLinkForest, LinkForest, alpha

rng = random.Random(7)

# --- stages on a fixed level ---

lf = LinkForest(level=1, ack=AckermannTable(64), max_n=64)
v = [lf.make_node() for _ in range(8)]

lf.link(v[0], v[1])
lf.link(v[1], v[2])
print("3 linked nodes, stage", lf.stage[1][v[0]], "(under 4: bare lists)")

lf.link(v[0], v[3])
print("4th node arrives, stage", lf.stage[1][v[0]],
      "(the whole tree moved into a packed subtree)")

for i in range(4, 8):
    lf.link(v[i - 1], v[i])
print("8 nodes, stage", lf.stage[1][v[0]])
print("ca(v5, v2) =", tuple(lf.ca(v[5], v[2])))
lf.check_invariants()

# --- the adaptive wrapper opens with the first link ---

af = AdaptiveLinkForest(max_n=1 << 12)
nodes = [af.make_node() for _ in range(1 << 12)]

print("\nqueries before any link are free:",
      af.nca(nodes[0], nodes[1]), "(separate trees)")

af.link(nodes[0], nodes[1])
print("first link: counted ops m =", af.m1, " linked nodes n =", af.n1,
      " level =", af.level)

# pair up fresh singletons: n grows as fast as m, alpha climbs,
# and the wrapper reorganizes the moment it leaves {level-1, level}
for i in range(1, 300):
    af.link(nodes[2 * i], nodes[2 * i + 1])
print("after 300 pair links, level =", af.level,
      " reorganizations =", af.reorg_log)

# flood queries: m races ahead of n, alpha falls back to 1, and that is
# still inside the tolerated window, so no reorganization happens
for _ in range(5000):
    af.nca(rng.choice(nodes[:600]), rng.choice(nodes[:600]))
print("after a 5000-query flood, alpha =", alpha(af.m1, af.n1),
      " level =", af.level, " reorganizations =", af.reorg_log)
