"""Leveled incremental trees: microsets on top, one fat-numbered tree below.

Levels run L down to 1.  Level L holds the real vertices, partitioned
into subtrees of at most mu nodes each.  A subtree that reaches mu nodes
contracts to a node one level down, and the frontier invariant (nonfull
subtrees have no child subtrees) keeps every contracted level a single
tree.  Level 1 is one IncrementalTree that never fills.

A query recurses: the level below names the subtree holding the meet,
the two entry nodes into that subtree stand in for x and y, and a packed
microset query inside it finishes the job.  When a stand-in turns out to
be the meet itself, the answer component is patched back to the subtree
root it stands for.  Queries under a moved root combine three stored
root queries at the vertex level.

Two presets: two levels with mu = floor(log2 cap) gives O(log n) total
growth work per vertex below the packed layer; three levels with
mu = ceil(log2 cap) brings total growth work down to O(n).
"""

from math import ceil, log2

from .arena import Arena
from .errors import CapacityError
from .fat_preorder import DYNAMIC_PARAMS
from .forest import CaTriple, combine_rerooted
from .incremental import IncrementalTree
from .microset import Microset
from .stats import Stats


class _Sub:
    """One subtree on a level at or above 2: a microset and its contraction."""

    __slots__ = ("ms", "up")

    def __init__(self, ms):
        self.ms = ms
        self.up = None  # node one level down, set when the subtree fills


class MultilevelInc:
    """Incremental tree with vertex ids 0..n-1, vertex 0 the first root."""

    def __init__(self, max_n, levels=3, mu=None, params=DYNAMIC_PARAMS, stats=None, arena=None):
        if levels < 2:
            raise ValueError("need at least two levels")
        self.L = levels
        self.max_n = max_n
        if mu is None:
            mu = max(2, min(63, ceil(log2(max(max_n, 4)))))
        if not 2 <= mu <= 63:
            raise ValueError(f"subtree capacity {mu} outside [2, 63]")
        self.mu = mu
        self.params = params
        self.stats = stats if stats is not None else Stats()
        self.arena = arena if arena is not None else Arena()
        # per-level node arrays, levels L..2; level 1 lives in the inc tree
        self.piL = {l: [] for l in range(2, levels + 1)}
        self.subref = {l: [] for l in range(2, levels + 1)}
        self.mid = {l: [] for l in range(2, levels + 1)}
        self.anc = {l: [] for l in range(2, levels + 1)}
        self.down = {l: [] for l in range(1, levels)}
        self.inc = None
        self._inc_cap = max(2, max_n // mu ** (levels - 1) + 1)
        self.varrho = 0
        self._register(levels)
        self.subref[levels][0] = self._singleton(0, levels)
        self.stats.eta += 1

    @property
    def n(self):
        return len(self.piL[self.L])

    @property
    def root(self):
        return self.varrho

    def check_id(self, v):
        if not isinstance(v, int) or not 0 <= v < len(self.piL[self.L]):
            raise ValueError(f"unallocated node id {v!r}")

    def _register(self, l):
        """Allocate the next node id on level l, parentless and unplaced."""
        y = len(self.piL[l])
        self.piL[l].append(None)
        self.subref[l].append(None)
        self.mid[l].append(0)
        self.anc[l].append(0)
        if l < self.L:
            self.down[l].append(None)
        return y

    def _singleton(self, y, l):
        return _Sub(Microset(y, self.mu, self.mid[l], self.anc[l], self.arena, self.stats))

    def add_leaf(self, x):
        """Attach and return a new child vertex of x."""
        self.check_id(x)
        if len(self.piL[self.L]) >= self.max_n:
            raise CapacityError(f"tree is at its declared capacity {self.max_n}")
        y = self._attach(x, self.L)
        self.stats.eta += 1
        return y

    def add_root(self):
        """Attach and return a new root above the current one."""
        y = self.add_leaf(self.varrho)
        self.varrho = y
        return y

    def _attach(self, x, l):
        """Grow level l with a new node under x, contracting filled subtrees."""
        if l == 1:
            y = self.inc.add_leaf(x)
            if len(self.down[1]) <= y:
                self.down[1].append(None)
            return y
        y = self._register(l)
        self.piL[l][y] = x
        P = self.subref[l][x]
        if P.ms.full:
            self.subref[l][y] = self._singleton(y, l)
            return y
        ok = P.ms.add(x, y)
        assert ok
        self.subref[l][y] = P
        if P.ms.full:
            r = P.ms.root
            w = self.piL[l][r]
            if w is None:
                # the whole level was this one subtree; seed the next level
                if l - 1 == 1:
                    self.inc = IncrementalTree(self._inc_cap, self.params,
                                               stats=self.stats, arena=self.arena)
                    z = 0
                    self.down[1].append(None)
                else:
                    z = self._register(l - 1)
                    self.subref[l - 1][z] = self._singleton(z, l - 1)
            else:
                W = self.subref[l][w]
                assert W.up is not None, "parent subtree at the frontier must be full"
                z = self._attach(W.up, l - 1)
            P.up = z
            self.down[l - 1][z] = P
        return y

    def _c(self, x, y, l):
        """Characteristic ancestors of l-nodes x and y within level l."""
        if l == 1:
            return self.inc.ca(x, y)
        piL = self.piL[l]
        sub = self.subref[l]
        Px = sub[x]
        Py = sub[y]
        if Px is Py:
            return Px.ms.ca(x, y)
        # stand-ins for nodes of nonfull subtrees: the parent of the
        # subtree root, which the frontier invariant puts in a full one
        rx = ry = None
        if Px.up is None:
            rx = Px.ms.root
            x = piL[rx]
            Px = sub[x]
        if Py.up is None:
            ry = Py.ms.root
            y = piL[ry]
            Py = sub[y]
        x2 = x
        y2 = y
        if Px is Py:
            b, bx, by = Px.ms.ca(x, y)
        else:
            down = self.down[l - 1]
            A, AX, AY = self._c(Px.up, Py.up, l - 1)
            if AX != A:
                x = piL[down[AX].ms.root]
            if AY != A:
                y = piL[down[AY].ms.root]
            b, bx, by = down[A].ms.ca(x, y)
            if bx == b and AX != A:
                bx = down[AX].ms.root
            if by == b and AY != A:
                by = down[AY].ms.root
        # a stand-in that turns out to be the meet reports the subtree
        # root it stood for; when the inner replacement fired instead,
        # the meet lies in another subtree and this comparison is false
        if rx is not None and b == x2:
            bx = rx
        if ry is not None and b == y2:
            by = ry
        return CaTriple(b, bx, by)

    def ca(self, x, y):
        """Characteristic ancestors of vertices x and y under the current root."""
        self.check_id(x)
        self.check_id(y)
        if x == y:
            self.stats.note_query(0)
            return CaTriple(x, x, x)
        z = self.varrho
        if z == 0:
            return self._c(x, y, self.L)
        cxy = self._c(x, y, self.L)
        cxz = CaTriple(x, x, x) if x == z else self._c(x, z, self.L)
        cyz = CaTriple(y, y, y) if y == z else self._c(y, z, self.L)
        return combine_rerooted(cxy, cxz, cyz, self.piL[self.L].__getitem__)

    def nca(self, x, y):
        return self.ca(x, y).a

    def parent(self, v):
        """Stored parent of vertex v (root handle not applied)."""
        self.check_id(v)
        return self.piL[self.L][v]


def edmonds_tree(max_n, stats=None, arena=None):
    """Two levels, packed sets of floor(log2 cap) nodes over one fat tree."""
    mu = max(2, min(63, int(log2(max(max_n, 4)))))
    return MultilevelInc(max_n, levels=2, mu=mu, stats=stats, arena=arena)


def linear_tree(max_n, stats=None, arena=None):
    """Three levels, packed sets of ceil(log2 cap) nodes, linear total growth."""
    mu = max(2, min(63, ceil(log2(max(max_n, 4)))))
    return MultilevelInc(max_n, levels=3, mu=mu, stats=stats, arena=arena)
