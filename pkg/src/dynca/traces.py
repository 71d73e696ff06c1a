"""Trace format, generators, engine adapters, and the differential runner.

A trace is a line-oriented op list over externally chosen integer ids;
parsing maps them to dense internal ids in declaration order and checks
every operand against the declared universe.  Engines wrap the package's
structures behind one replay interface, the runner executes a trace on
several engines in lockstep and compares answers pointwise, and a failing
run is shrunk to its shortest failing prefix.  Generators produce the
five workload shapes the test suite leans on, deterministically per seed.
"""

import time
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .arena import Arena
from .errors import ConfigError, TraceParseError
from .fat_preorder import StaticCa
from .forest import CaTriple, Forest, oracle_ca
from .incremental import IncrementalTree
from .linkforest import AdaptiveLinkForest
from .multilevel import edmonds_tree, linear_tree
from .stats import Stats

STRUCTURAL = ("make_node", "add_leaf", "add_root", "link")
QUERIES = ("nca", "ca")


class TraceOp(NamedTuple):
    kind: str
    a: Optional[int]
    b: Optional[int]
    expected: object  # None, "none", int (nca), or (a, ax, ay) for ca
    line: int


class Trace(list):
    """Ops with dense ids, plus the dense-to-external id map."""

    __slots__ = ("ext",)

    def __init__(self, ops=(), ext=None):
        super().__init__(ops)
        self.ext = list(ext) if ext is not None else []

    @property
    def n_nodes(self):
        return len(self.ext)

    def prefix(self, k):
        return Trace(list.__getitem__(self, slice(0, k)), self.ext)


def parse_trace(text):
    """Parse trace text into a Trace; raise TraceParseError with location."""
    ext2d = {}
    ext = []
    ops = []

    def declare(tok, line, col):
        try:
            v = int(tok)
        except ValueError:
            raise TraceParseError(f"expected an integer id, got {tok!r}", line, col)
        if v in ext2d:
            raise TraceParseError(f"duplicate node id {v}", line, col)
        d = len(ext)
        ext2d[v] = d
        ext.append(v)
        return d

    def lookup(tok, line, col):
        try:
            v = int(tok)
        except ValueError:
            raise TraceParseError(f"expected an integer id, got {tok!r}", line, col)
        d = ext2d.get(v)
        if d is None:
            raise TraceParseError(f"undeclared node id {v}", line, col)
        return d

    for ln, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = []
        col = 0
        i = 0
        while i < len(body):
            if body[i].isspace():
                i += 1
                continue
            j = i
            while j < len(body) and not body[j].isspace():
                j += 1
            toks.append((body[i:j], i + 1))
            i = j
        if not toks:
            continue
        kind, kcol = toks[0]
        args = toks[1:]

        def need(k):
            if len(args) != k:
                raise TraceParseError(
                    f"{kind} takes {k} operand{'s' if k != 1 else ''}, got {len(args)}",
                    ln, args[k][1] if len(args) > k else kcol)

        if kind == "make_node":
            need(1)
            v = declare(args[0][0], ln, args[0][1])
            ops.append(TraceOp(kind, v, None, None, ln))
        elif kind == "add_leaf":
            need(2)
            p = lookup(args[0][0], ln, args[0][1])
            c = declare(args[1][0], ln, args[1][1])
            ops.append(TraceOp(kind, p, c, None, ln))
        elif kind == "add_root":
            need(1)
            if not ext2d or len(ext) == 0:
                raise TraceParseError("add_root before any node exists", ln, kcol)
            r = declare(args[0][0], ln, args[0][1])
            ops.append(TraceOp(kind, r, None, None, ln))
        elif kind == "link":
            need(2)
            x = lookup(args[0][0], ln, args[0][1])
            y = lookup(args[1][0], ln, args[1][1])
            ops.append(TraceOp(kind, x, y, None, ln))
        elif kind in ("nca", "ca"):
            if len(args) < 2:
                raise TraceParseError(f"{kind} takes 2 operands", ln, kcol)
            x = lookup(args[0][0], ln, args[0][1])
            y = lookup(args[1][0], ln, args[1][1])
            expected = None
            rest = args[2:]
            if rest:
                if rest[0][0] != "=":
                    raise TraceParseError("expected '=' before the answer", ln, rest[0][1])
                vals = rest[1:]
                if kind == "nca":
                    if len(vals) != 1:
                        raise TraceParseError("nca answer is one id or none", ln, rest[0][1])
                    tok, tcol = vals[0]
                    expected = "none" if tok == "none" else lookup(tok, ln, tcol)
                else:
                    if len(vals) == 1 and vals[0][0] == "none":
                        expected = "none"
                    elif len(vals) == 3:
                        expected = tuple(lookup(t, ln, c) for t, c in vals)
                    else:
                        raise TraceParseError("ca answer is three ids or none", ln, rest[0][1])
            ops.append(TraceOp(kind, x, y, expected, ln))
        else:
            raise TraceParseError(f"unknown op {kind!r}", ln, kcol)
    return Trace(ops, ext)


def extern_answer(trace, ans):
    """Map a query answer from dense ids back to the trace's external ids."""
    if isinstance(ans, int):
        return trace.ext[ans]
    if isinstance(ans, tuple):
        return tuple(trace.ext[v] for v in ans)
    return ans


def format_trace(trace):
    """Serialize a Trace back to text, external ids restored."""
    ext = trace.ext
    out = []
    for op in trace:
        if op.kind == "make_node":
            out.append(f"make_node {ext[op.a]}")
        elif op.kind == "add_leaf":
            out.append(f"add_leaf {ext[op.a]} {ext[op.b]}")
        elif op.kind == "add_root":
            out.append(f"add_root {ext[op.a]}")
        elif op.kind == "link":
            out.append(f"link {ext[op.a]} {ext[op.b]}")
        else:
            s = f"{op.kind} {ext[op.a]} {ext[op.b]}"
            if op.expected == "none":
                s += " = none"
            elif isinstance(op.expected, int):
                s += f" = {ext[op.expected]}"
            elif isinstance(op.expected, tuple):
                s += " = " + " ".join(str(ext[v]) for v in op.expected)
            out.append(s)
    return "\n".join(out) + ("\n" if out else "")


# ---------------------------------------------------------------- engines


class _Engine:
    """Replay interface: structural ops mutate, queries return a CaTriple or None."""

    ops = frozenset()

    def __init__(self, name, max_n):
        self.name = name
        self.max_n = max_n
        self.stats = Stats()
        self.arena = None

    def precheck(self, trace):
        for op in trace:
            if op.kind not in self.ops:
                raise ConfigError(
                    f"engine {self.name} does not support {op.kind}"
                    + (" (express growth as link)" if op.kind in ("add_leaf", "add_root") else ""))

    def apply(self, op):
        raise NotImplementedError

    @property
    def reorgs(self):
        return self.stats.reorgs

    @property
    def arena_cells(self):
        return self.arena.used if self.arena is not None else 0


class OracleEngine(_Engine):
    """Brute-force baseline: parent walks on a plain forest."""

    ops = frozenset(STRUCTURAL + QUERIES)

    def __init__(self, name, max_n):
        super().__init__(name, max_n)
        self.f = Forest()
        self.root = None  # current root of the (single) grown tree

    def apply(self, op):
        f = self.f
        k = op.kind
        if k == "make_node":
            v = f.make_node()
            if self.root is None:
                self.root = v
        elif k == "add_leaf":
            v = f.make_node()
            f.add_leaf(op.a, v)
        elif k == "add_root":
            v = f.make_node()
            f.add_root(v, f.root_of(self.root))
            self.root = v
        elif k == "link":
            f.link(op.a, op.b)
        else:
            return oracle_ca(f, op.a, op.b)


class _GrowEngine(_Engine):
    """Single grown tree: make_node once, then add_leaf / add_root / queries."""

    ops = frozenset(("make_node", "add_leaf", "add_root", "nca", "ca"))

    def make(self):
        raise NotImplementedError

    def __init__(self, name, max_n):
        super().__init__(name, max_n)
        self.t = None

    def apply(self, op):
        k = op.kind
        if k == "make_node":
            if self.t is not None:
                raise ConfigError(f"engine {self.name} holds a single tree")
            self.t = self.make()
            self.arena = self.t.arena
            return
        if self.t is None:
            raise ConfigError(f"engine {self.name} needs make_node first")
        if k == "add_leaf":
            v = self.t.add_leaf(op.a)
            assert v == op.b
        elif k == "add_root":
            v = self.t.add_root()
            assert v == op.a
        else:
            return self.t.ca(op.a, op.b)


class IncEngine(_GrowEngine):
    def make(self):
        return IncrementalTree(self.max_n, stats=self.stats)


class IncLog2Engine(_GrowEngine):
    def make(self):
        return edmonds_tree(self.max_n, stats=self.stats)


class IncLinearEngine(_GrowEngine):
    def make(self):
        return linear_tree(self.max_n, stats=self.stats)


class StaticEngine(_Engine):
    """Builds once from the structural prefix; queries freeze it."""

    ops = frozenset(("make_node", "add_leaf", "add_root", "nca", "ca"))

    def __init__(self, name, max_n):
        super().__init__(name, max_n)
        self.f = Forest()
        self.sca = None
        self.root = None

    def precheck(self, trace):
        super().precheck(trace)
        seen_query = False
        for op in trace:
            if op.kind in QUERIES:
                seen_query = True
            elif seen_query:
                raise ConfigError(
                    "engine static cannot mutate after its first query")

    def apply(self, op):
        k = op.kind
        if k == "make_node":
            v = self.f.make_node()
            if self.root is None:
                self.root = v
        elif k == "add_leaf":
            v = self.f.make_node()
            self.f.add_leaf(op.a, v)
        elif k == "add_root":
            v = self.f.make_node()
            self.f.add_root(v, self.f.root_of(self.root))
            self.root = v
        else:
            if self.sca is None:
                self.sca = StaticCa(self.f, stats=self.stats)
            return self.sca.ca(op.a, op.b)


class LinkEngine(_Engine):
    """The adaptive link forest."""

    ops = frozenset(("make_node", "link", "nca", "ca"))

    def __init__(self, name, max_n):
        super().__init__(name, max_n)
        self.lf = AdaptiveLinkForest(max_n, stats=self.stats)
        self.arena = self.lf.arena

    def apply(self, op):
        k = op.kind
        if k == "make_node":
            self.lf.make_node()
        elif k == "link":
            self.lf.link(op.a, op.b)
        else:
            return self.lf.ca(op.a, op.b)

    @property
    def reorgs(self):
        return len(self.stats.reorg_log)


ENGINES = {
    "oracle": OracleEngine,
    "static": StaticEngine,
    "inc": IncEngine,
    "inc-log2": IncLog2Engine,
    "inc-linear": IncLinearEngine,
    "link": LinkEngine,
}


def make_engine(name, max_n):
    cls = ENGINES.get(name)
    if cls is None:
        raise ConfigError(f"unknown engine {name!r} (have {', '.join(sorted(ENGINES))})")
    return cls(name, max_n)


def compatible_engines(trace):
    """Engine names that can replay this trace, oracle first."""
    names = ["oracle"]
    kinds = {op.kind for op in trace}
    if "link" in kinds or sum(1 for op in trace if op.kind == "make_node") > 1:
        if not kinds & {"add_leaf", "add_root"}:
            names.append("link")
        return names
    names += ["inc", "inc-log2", "inc-linear"]
    seen_query = False
    interleaved = False
    for op in trace:
        if op.kind in QUERIES:
            seen_query = True
        elif seen_query:
            interleaved = True
            break
    if not interleaved:
        names.insert(1, "static")
    return names


# ----------------------------------------------------------------- runner


@dataclass
class EngineReport:
    engine: str
    n: int
    m: int
    eta: int
    reorgs: int
    recompressions: int
    arena_cells: int
    max_query_steps: int
    wall_ms: float
    answers: list = field(default_factory=list)

    def csv_row(self):
        return (f"{self.engine},{self.n},{self.m},{self.eta},{self.reorgs},"
                f"{self.recompressions},{self.arena_cells},{self.max_query_steps},"
                f"{self.wall_ms:.3f}")


CSV_HEADER = "engine,n,m,eta,reorgs,recompressions,arena_cells,max_query_steps,wall_ms"


@dataclass
class RunReport:
    reports: list
    mismatch: object = None  # (op_index, engine, got, want) or None
    repro: object = None     # minimized failing Trace

    @property
    def ok(self):
        return self.mismatch is None

    def csv(self):
        return "\n".join([CSV_HEADER] + [r.csv_row() for r in self.reports]) + "\n"


def _norm(kind, ans):
    if ans is None:
        return None
    return ans.a if kind == "nca" else (ans.a, ans.ax, ans.ay)


def run(trace, engines, check=False, max_n=None, keep_answers=False, _fail_fast=True):
    """Replay the trace on every named engine, comparing query answers.

    With check, the first engine is the baseline (use oracle) unless the
    trace carries expected answers; comparison stops the run at the first
    mismatch and attaches a minimized reproduction.
    """
    if not engines:
        raise ConfigError("engine set is empty")
    cap = max_n if max_n is not None else max(2, trace.n_nodes)
    if trace.n_nodes > cap:
        raise ConfigError(f"trace declares {trace.n_nodes} nodes, capacity is {cap}")
    has_expected = any(op.expected is not None for op in trace if op.kind in QUERIES)
    if check and "oracle" not in engines and not has_expected:
        raise ConfigError("check needs the oracle among the engines or expected answers")
    insts = [make_engine(name, cap) for name in engines]
    for e in insts:
        e.precheck(trace)
    walls = [0.0] * len(insts)
    answers = [[] for _ in insts]
    queries = 0
    mismatch = None
    base_idx = engines.index("oracle") if "oracle" in engines else None
    for idx, op in enumerate(trace):
        is_q = op.kind in QUERIES
        got = [None] * len(insts)
        for j, e in enumerate(insts):
            t0 = time.perf_counter()
            r = e.apply(op)
            walls[j] += time.perf_counter() - t0
            if is_q:
                got[j] = _norm(op.kind, r)
                if keep_answers:
                    answers[j].append(got[j])
        if is_q:
            queries += 1
            if check:
                want = None
                have_want = base_idx is not None
                if have_want:
                    want = got[base_idx]
                if op.expected is not None:
                    exp = None if op.expected == "none" else op.expected
                    if have_want:
                        if want != exp:
                            mismatch = (idx, engines[base_idx], want, exp)
                    else:
                        want, have_want = exp, True
                if have_want and mismatch is None:
                    for j, g in enumerate(got):
                        if j != base_idx and g != want:
                            mismatch = (idx, engines[j], g, want)
                            break
                if mismatch is not None and _fail_fast:
                    break
    reports = []
    for j, e in enumerate(insts):
        reports.append(EngineReport(
            engine=e.name,
            n=trace.n_nodes,
            m=queries,
            eta=e.stats.eta,
            reorgs=e.reorgs,
            recompressions=e.stats.recompressions,
            arena_cells=e.arena_cells,
            max_query_steps=e.stats.max_query_steps,
            wall_ms=walls[j] * 1000.0,
            answers=answers[j],
        ))
    rep = RunReport(reports, mismatch)
    if mismatch is not None and _fail_fast:
        rep.repro = minimize(trace, engines, check=check, max_n=max_n)
    return rep


def minimize(trace, engines, check=True, max_n=None):
    """Shortest failing prefix of a failing trace, found by bisection."""

    def fails(k):
        sub = trace.prefix(k)
        return run(sub, engines, check=check, max_n=max_n, _fail_fast=False).mismatch is not None

    lo, hi = 0, len(trace)
    if not fails(hi):
        return None
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if fails(mid):
            hi = mid
        else:
            lo = mid
    return trace.prefix(hi)


def as_links(trace):
    """Rewrite grown-tree structure as link ops (queries pass through).

    add_leaf p c becomes make_node c; link p c, and add_root r becomes
    make_node r; link r <old root>.  Node declaration order, hence the
    dense id map, and the forest state seen by every query are unchanged,
    so answers are comparable op for op with the original trace.
    """
    ops = []
    root = None
    for op in trace:
        k = op.kind
        if k == "make_node":
            if root is None:
                root = op.a
            ops.append(op)
        elif k == "add_leaf":
            ops.append(TraceOp("make_node", op.b, None, None, op.line))
            ops.append(TraceOp("link", op.a, op.b, None, op.line))
        elif k == "add_root":
            ops.append(TraceOp("make_node", op.a, None, None, op.line))
            ops.append(TraceOp("link", op.a, root, None, op.line))
            root = op.a
        else:
            ops.append(op)
    return Trace(ops, trace.ext)


# ------------------------------------------------------------- generators

PROFILES = ("leaf-heavy", "root-heavy", "link-balanced", "link-skewed", "query-heavy")


def generate(seed, profile, n, m):
    """Deterministic trace for one of the named workload shapes."""
    import random

    if profile not in PROFILES:
        raise ConfigError(f"unknown profile {profile!r} (have {', '.join(PROFILES)})")
    if n < 1:
        raise ConfigError("need n >= 1")
    rng = random.Random(f"{profile}:{seed}:{n}:{m}")
    ops = []
    emitted = 0

    def query(hi):
        nonlocal emitted
        x = rng.randrange(hi)
        y = rng.randrange(hi)
        ops.append(TraceOp("nca" if rng.random() < 0.5 else "ca", x, y, None, 0))
        emitted += 1

    if profile in ("leaf-heavy", "query-heavy"):
        ops.append(TraceOp("make_node", 0, None, None, 0))
        for v in range(1, n):
            ops.append(TraceOp("add_leaf", rng.randrange(v), v, None, 0))
        for _ in range(m):
            query(n)
    elif profile == "root-heavy":
        ops.append(TraceOp("make_node", 0, None, None, 0))
        acc = 0.0
        step = m / max(1, n - 1)
        for v in range(1, n):
            if rng.random() < 0.25:
                ops.append(TraceOp("add_root", v, None, None, 0))
            else:
                ops.append(TraceOp("add_leaf", rng.randrange(v), v, None, 0))
            acc += step
            while acc >= 1.0:
                query(v + 1)
                acc -= 1.0
        while emitted < m:
            query(n)
    else:
        members = {v: [v] for v in range(n)}
        for v in range(n):
            ops.append(TraceOp("make_node", v, None, None, 0))
        roots = list(range(n))
        links = n - 1
        acc = 0.0
        step = m / max(1, links)
        for _ in range(links):
            if profile == "link-skewed":
                y = roots.pop()
                if not roots:
                    roots.append(y)
                    break
                host = roots[0]
                x = rng.choice(members[host])
            else:
                i = rng.randrange(len(roots))
                y = roots.pop(i)
                host = roots[rng.randrange(len(roots))]
                x = rng.choice(members[host])
            members[host].extend(members.pop(y))
            ops.append(TraceOp("link", x, y, None, 0))
            acc += step
            while acc >= 1.0:
                query(n)
                acc -= 1.0
        while emitted < m:
            query(n)
    return Trace(ops, range(n))
