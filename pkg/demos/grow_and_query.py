"""Grow a tree one leaf at a time and watch the numbering pay for itself.

Run:  python3 demos/grow_and_query.py
"""

import random

from dynca import Forest, IncrementalTree, linear_tree, oracle_ca

rng = random.Random(42)

# --- a tree that renumbers itself as it grows ---

t = IncrementalTree(max_n=2000)
for _ in range(1999):
    t.add_leaf(rng.randrange(t.n))

print("grew", t.n, "nodes")
print("recompressions:", t.stats.recompressions,
      "| nodes renumbered:", t.stats.recompression_nodes,
      "| most renumbered node:", max(t.renum), "times")

# meets come back as (meet, step below on x's side, step below on y's side)
print("ca(1500, 1777) =", tuple(t.ca(1500, 1777)))
print("worst query so far took", t.stats.max_query_steps, "counted steps")

# --- same answers as a brute-force walk, always ---

f = Forest()
f.make_node()
t2 = IncrementalTree(500)
for _ in range(499):
    x = rng.randrange(t2.n)
    f.add_leaf(x, f.make_node())
    t2.add_leaf(x)

checked = 0
for _ in range(5000):
    x, y = rng.randrange(500), rng.randrange(500)
    assert t2.ca(x, y) == oracle_ca(f, x, y)
    checked += 1
print(checked, "random meets agree with the parent-walking oracle")

# --- add_root puts new roots on top without touching stored numbers ---

t3 = IncrementalTree(64)
for _ in range(20):
    t3.add_leaf(rng.randrange(t3.n))
old_root = t3.root
r = t3.add_root()
print("new root", r, "over old root", old_root,
      "| nca(old_root, 5) is now", t3.nca(old_root, 5))

# --- the three-level build does the same work in O(1) amortized per add ---

big = linear_tree(1 << 14)
for _ in range((1 << 14) - 1):
    big.add_leaf(rng.randrange(big.n))
print("3-level growth work per node:",
      round(big.stats.work / big.n, 2), "(flat as n doubles)")
