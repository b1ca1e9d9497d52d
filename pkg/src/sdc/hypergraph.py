"""Open hypergraphs: the graphical form of terms, with or without Frobenius structure."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import BoundaryMismatch, CyclicGraph, NotMonogamous
from .syntax import (
    FROBENIUS_KINDS,
    Empty,
    Gen,
    Id,
    OperationDecl,
    Par,
    Seq,
    Sym,
    Term,
    format_word,
    id_word,
    par_all,
    permutation_term,
    seq_all,
    structural_op,
)


@dataclass(frozen=True)
class Hyperedge:
    op: OperationDecl
    sources: tuple
    targets: tuple


@dataclass(frozen=True)
class OpenHypergraph:
    """Nodes are the indices of ``nodes``, which stores their sorts."""

    nodes: tuple
    edges: tuple = ()
    left: tuple = ()
    right: tuple = ()

    def __post_init__(self):
        for name in ("nodes", "edges", "left", "right"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        n = len(self.nodes)
        for i in self.left + self.right:
            if not 0 <= i < n:
                raise ValueError(f"interface refers to missing node {i}")
        for e in self.edges:
            if len(e.sources) != len(e.op.arity) or len(e.targets) != len(e.op.coarity):
                raise ValueError(f"edge {e.op.name} has the wrong number of endpoints")
            for i, s in itertools.chain(zip(e.sources, e.op.arity), zip(e.targets, e.op.coarity)):
                if not 0 <= i < n:
                    raise ValueError(f"edge {e.op.name} refers to missing node {i}")
                if self.nodes[i] != s:
                    raise ValueError(f"edge {e.op.name} attaches sort {s} to a node of sort {self.nodes[i]}")

    def __hash__(self):
        # graphs key several caches; hashing the nested tuples each time dominates
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.nodes, self.edges, self.left, self.right))
            object.__setattr__(self, "_hash", h)
        return h

    @property
    def dom(self) -> tuple:
        return tuple(self.nodes[i] for i in self.left)

    @property
    def cod(self) -> tuple:
        return tuple(self.nodes[i] for i in self.right)

    def __len__(self):
        return len(self.nodes)


def _trusted(nodes: tuple, edges: tuple, left: tuple, right: tuple) -> OpenHypergraph:
    """Build a graph from parts already known to be well formed, skipping validation."""
    g = object.__new__(OpenHypergraph)
    object.__setattr__(g, "nodes", nodes)
    object.__setattr__(g, "edges", edges)
    object.__setattr__(g, "left", left)
    object.__setattr__(g, "right", right)
    return g


class UnionFind:
    """Union-find whose representative is always the smallest member."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        lo, hi = min(ra, rb), max(ra, rb)
        self.parent[hi] = lo
        return lo


def quotient(nodes, edges, left, right, uf: UnionFind) -> OpenHypergraph:
    """Rebuild a graph after merging nodes; classes keep the order of their smallest member."""
    index = {}
    new_nodes = []
    for v in range(len(nodes)):
        r = uf.find(v)
        if r not in index:
            index[r] = len(new_nodes)
            new_nodes.append(nodes[v])
    m = [index[uf.find(v)] for v in range(len(nodes))]
    return _trusted(
        tuple(new_nodes),
        tuple(Hyperedge(e.op, tuple(m[s] for s in e.sources), tuple(m[t] for t in e.targets)) for e in edges),
        tuple(m[v] for v in left),
        tuple(m[v] for v in right),
    )


def restrict(g: OpenHypergraph, keep_nodes: Iterable[int], keep_edges: Iterable[int]) -> OpenHypergraph:
    """Subgraph on the given nodes and edges, interfaces filtered to kept nodes."""
    keep = sorted(set(keep_nodes))
    m = {v: i for i, v in enumerate(keep)}
    edges = tuple(
        Hyperedge(g.edges[k].op, tuple(m[s] for s in g.edges[k].sources), tuple(m[t] for t in g.edges[k].targets))
        for k in sorted(set(keep_edges))
    )
    return _trusted(
        tuple(g.nodes[v] for v in keep),
        edges,
        tuple(m[v] for v in g.left if v in m),
        tuple(m[v] for v in g.right if v in m),
    )


EMPTY = OpenHypergraph(())


def identity_graph(w: Sequence[str]) -> OpenHypergraph:
    r = tuple(range(len(w)))
    return OpenHypergraph(tuple(w), (), r, r)


def edge_graph(op: OperationDecl) -> OpenHypergraph:
    a, c = len(op.arity), len(op.coarity)
    src, tgt = tuple(range(a)), tuple(range(a, a + c))
    return OpenHypergraph(op.arity + op.coarity, (Hyperedge(op, src, tgt),), src, tgt)


def frobenius_graph(op: OperationDecl) -> OpenHypergraph:
    """The discrete graph of a Frobenius generator (or cup/cap): a single node."""
    return OpenHypergraph((op.sort,), (), (0,) * len(op.arity), (0,) * len(op.coarity))


def par_compose(g: OpenHypergraph, h: OpenHypergraph) -> OpenHypergraph:
    off = len(g.nodes)
    return _trusted(
        g.nodes + h.nodes,
        g.edges
        + tuple(Hyperedge(e.op, tuple(s + off for s in e.sources), tuple(t + off for t in e.targets)) for e in h.edges),
        g.left + tuple(v + off for v in h.left),
        g.right + tuple(v + off for v in h.right),
    )


def seq_compose(g: OpenHypergraph, h: OpenHypergraph) -> OpenHypergraph:
    if g.cod != h.dom:
        raise BoundaryMismatch(f"cannot compose: {format_word(g.cod)} vs {format_word(h.dom)}")
    u = par_compose(g, h)
    off = len(g.nodes)
    uf = UnionFind(len(u.nodes))
    for a, b in zip(g.right, h.left):
        uf.union(a, b + off)
    return quotient(u.nodes, u.edges, g.left, tuple(v + off for v in h.right), uf)


def from_term(t: Term, frobenius: frozenset = frozenset()) -> OpenHypergraph:
    """Interpret a term; generators whose kind is in ``frobenius`` become single nodes."""
    if isinstance(t, Gen):
        if t.op.kind in frobenius:
            return frobenius_graph(t.op)
        return edge_graph(t.op)
    if isinstance(t, Id):
        return identity_graph(t.w)
    if isinstance(t, Sym):
        return OpenHypergraph((t.x, t.y), (), (0, 1), (1, 0))
    if isinstance(t, Empty):
        return EMPTY
    if isinstance(t, Seq):
        return seq_compose(from_term(t.left, frobenius), from_term(t.right, frobenius))
    if isinstance(t, Par):
        return par_compose(from_term(t.top, frobenius), from_term(t.bottom, frobenius))
    raise TypeError(f"not a term: {t!r}")


def from_term_frob(t: Term, kinds: Iterable[str] = FROBENIUS_KINDS) -> OpenHypergraph:
    return from_term(t, frozenset(kinds))


def collapse_frobenius(g: OpenHypergraph, is_frobenius: Callable[[OperationDecl], bool] | None = None) -> OpenHypergraph:
    """Contract every Frobenius hyperedge into a single node."""
    if is_frobenius is None:
        is_frobenius = lambda op: op.kind in FROBENIUS_KINDS
    uf = UnionFind(len(g.nodes))
    kept = []
    for e in g.edges:
        if is_frobenius(e.op):
            ends = e.sources + e.targets
            for v in ends[1:]:
                uf.union(ends[0], v)
        else:
            kept.append(e)
    return quotient(g.nodes, kept, g.left, g.right, uf)


# --- degrees and monogamy ---------------------------------------------------------


@dataclass(frozen=True)
class NodeDegree:
    in_degree: int
    out_degree: int
    left_multiplicity: int
    right_multiplicity: int


@dataclass(frozen=True)
class DegreeReport:
    nodes: tuple  # of NodeDegree, indexed by node

    def __getitem__(self, v):
        return self.nodes[v]


def degrees(g: OpenHypergraph) -> DegreeReport:
    ins = [0] * len(g.nodes)
    outs = [0] * len(g.nodes)
    lm = [0] * len(g.nodes)
    rm = [0] * len(g.nodes)
    for e in g.edges:
        for s in e.sources:
            outs[s] += 1
        for t in e.targets:
            ins[t] += 1
    for v in g.left:
        lm[v] += 1
    for v in g.right:
        rm[v] += 1
    return DegreeReport(tuple(NodeDegree(*d) for d in zip(ins, outs, lm, rm)))


@dataclass(frozen=True)
class MonogamyReport:
    ok: bool
    node: int | None = None
    reason: str | None = None  # left_not_injective, right_not_injective, in_degree, out_degree

    def __bool__(self):
        return self.ok


def is_monogamous(g: OpenHypergraph) -> MonogamyReport:
    deg = degrees(g)
    for v, d in enumerate(deg.nodes):
        if d.left_multiplicity > 1:
            return MonogamyReport(False, v, "left_not_injective")
        if d.right_multiplicity > 1:
            return MonogamyReport(False, v, "right_not_injective")
    for v, d in enumerate(deg.nodes):
        if d.in_degree != (0 if d.left_multiplicity else 1):
            return MonogamyReport(False, v, "in_degree")
        if d.out_degree != (0 if d.right_multiplicity else 1):
            return MonogamyReport(False, v, "out_degree")
    return MonogamyReport(True)


def topological_edges(g: OpenHypergraph, strict: bool = True) -> list:
    """Edge indices in dependency order, smallest index first among ready edges.

    With ``strict`` a directed cycle raises CyclicGraph; otherwise the smallest
    remaining edge is forced whenever no edge is ready.
    """
    producers = [[] for _ in g.nodes]
    for k, e in enumerate(g.edges):
        for t in e.targets:
            producers[t].append(k)
    waiting = []
    for e in g.edges:
        waiting.append({p for s in e.sources for p in producers[s]})
    done, order = set(), []
    remaining = set(range(len(g.edges)))
    while remaining:
        ready = [k for k in sorted(remaining) if waiting[k] <= done]
        if not ready:
            if strict:
                raise CyclicGraph("the graph has a directed cycle through hyperedges")
            ready = [min(remaining)]
        k = ready[0]
        order.append(k)
        done.add(k)
        remaining.discard(k)
    return order


def is_acyclic(g: OpenHypergraph) -> bool:
    try:
        topological_edges(g)
    except CyclicGraph:
        return False
    return True


def component_count(g: OpenHypergraph) -> int:
    uf = UnionFind(len(g.nodes))
    bare = 0
    for e in g.edges:
        ends = e.sources + e.targets
        if not ends:
            bare += 1
        for v in ends[1:]:
            uf.union(ends[0], v)
    return len({uf.find(v) for v in range(len(g.nodes))}) + bare


def components(g: OpenHypergraph) -> list:
    """Connected components as (nodes, edges) pairs of sorted index lists."""
    n = len(g.nodes)
    uf = UnionFind(n + len(g.edges))
    for k, e in enumerate(g.edges):
        for v in e.sources + e.targets:
            uf.union(n + k, v)
    groups = {}
    for x in range(n + len(g.edges)):
        groups.setdefault(uf.find(x), []).append(x)
    out = []
    for members in sorted(groups.values()):
        out.append(([x for x in members if x < n], [x - n for x in members if x >= n]))
    return out


# --- canonical form and isomorphism ------------------------------------------------


def _op_key(op: OperationDecl) -> tuple:
    return (op.name, op.arity, op.coarity)


def _rank(keys: list) -> list:
    table = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [table[k] for k in keys]


class _Canon:
    def __init__(self, sorts, edges, left, right, unordered_right, unordered):
        self.sorts = sorts
        self.edges = edges  # (op, sources, targets)
        self.left = left
        self.right = right
        self.free = [unordered(op) if unordered else (False, False) for op, _, _ in edges]
        inc = [[] for _ in sorts]
        for k, (op, src, tgt) in enumerate(edges):
            fs, ft = self.free[k]
            for i, s in enumerate(src):
                inc[s].append((k, 0, -1 if fs else i))
            for i, t in enumerate(tgt):
                inc[t].append((k, 1, -1 if ft else i))
        self.inc = inc
        lpos = [[] for _ in sorts]
        rpos = [[] for _ in sorts]
        for i, v in enumerate(left):
            lpos[v].append(i)
        for i, v in enumerate(right):
            rpos[v].append(i)
        keys = []
        for v, s in enumerate(sorts):
            r = len(rpos[v]) if unordered_right else tuple(rpos[v])
            keys.append((s, tuple(lpos[v]), r))
        self.node0 = _rank(keys)
        self.edge0 = _rank([_op_key(op) for op, _, _ in edges])
        self.unordered_right = unordered_right

    def refine(self, ncol):
        ecol = list(self.edge0)
        n_classes = -1
        while True:
            esig = []
            for k, (op, src, tgt) in enumerate(self.edges):
                fs, ft = self.free[k]
                s = [ncol[v] for v in src]
                t = [ncol[v] for v in tgt]
                esig.append((ecol[k], tuple(sorted(s)) if fs else tuple(s), tuple(sorted(t)) if ft else tuple(t)))
            nsig = [(ncol[v], tuple(sorted((ecol[k], r, i) for k, r, i in self.inc[v]))) for v in range(len(ncol))]
            ncol, ecol = _rank(nsig), _rank(esig)
            count = len(set(ncol)) + len(set(ecol))
            if count == n_classes:
                return ncol
            n_classes = count

    def certificate(self, ncol):
        order = sorted(range(len(ncol)), key=lambda v: ncol[v])
        pos = {v: i for i, v in enumerate(order)}
        edges = []
        for k, (op, src, tgt) in enumerate(self.edges):
            fs, ft = self.free[k]
            s = [pos[v] for v in src]
            t = [pos[v] for v in tgt]
            edges.append((_op_key(op), tuple(sorted(s)) if fs else tuple(s), tuple(sorted(t)) if ft else tuple(t)))
        right = [pos[v] for v in self.right]
        return (
            tuple(self.sorts[v] for v in order),
            tuple(sorted(edges)),
            tuple(pos[v] for v in self.left),
            tuple(sorted(right)) if self.unordered_right else tuple(right),
        )

    def search(self, ncol):
        ncol = self.refine(ncol)
        cells = {}
        for v, c in enumerate(ncol):
            cells.setdefault(c, []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = cells[c]
                break
        if target is None:
            return self.certificate(ncol)
        best = None
        for v in target:
            split = _rank([(c, 0 if u == v else 1) for u, c in enumerate(ncol)])
            cert = self.search(split)
            if best is None or cert < best:
                best = cert
        return best


def _canon_part(g, nodes, edges, unordered_right, unordered):
    m = {v: i for i, v in enumerate(nodes)}
    es = [(g.edges[k].op, tuple(m[s] for s in g.edges[k].sources), tuple(m[t] for t in g.edges[k].targets)) for k in edges]
    left = [m[v] for v in g.left if v in m]
    right = [m[v] for v in g.right if v in m]
    c = _Canon([g.nodes[v] for v in nodes], es, left, right, unordered_right, unordered)
    return c.search(list(c.node0))


def _walk(g: OpenHypergraph):
    """Certificate from a walk out of an ordered interface, or None when the walk is ambiguous.

    Nodes are numbered as the walk first meets them and edges are taken in
    (role, port, op) order at each node. Whether the walk is ambiguous, or
    misses part of the graph, depends only on the isomorphism class.
    """
    inc = [[] for _ in g.nodes]
    for k, e in enumerate(g.edges):
        key = _op_key(e.op)
        for i, v in enumerate(e.sources):
            inc[v].append((0, i, key, k))
        for i, v in enumerate(e.targets):
            inc[v].append((1, i, key, k))
    label = {}
    queue = []
    for v in g.left + g.right:
        if v not in label:
            label[v] = len(label)
            queue.append(v)
    edge_order = []
    seen_edges = set()
    for v in queue:
        occ = sorted(inc[v])
        for a, b in zip(occ, occ[1:]):
            if a[:3] == b[:3]:
                return None
        for _, _, _, k in occ:
            if k in seen_edges:
                continue
            seen_edges.add(k)
            edge_order.append(k)
            e = g.edges[k]
            for u in e.sources + e.targets:
                if u not in label:
                    label[u] = len(label)
                    queue.append(u)
    if len(label) != len(g.nodes) or len(edge_order) != len(g.edges):
        return None
    sorts = [None] * len(label)
    for v, i in label.items():
        sorts[i] = g.nodes[v]
    edges = tuple(
        (_op_key(g.edges[k].op), tuple(label[u] for u in g.edges[k].sources), tuple(label[u] for u in g.edges[k].targets))
        for k in edge_order
    )
    return ("walk", tuple(sorts), edges, tuple(label[v] for v in g.left), tuple(label[v] for v in g.right))


@functools.lru_cache(maxsize=200_000)
def _canonical(g: OpenHypergraph, unordered_right: bool, unordered) -> tuple:
    if not unordered_right and unordered is None:
        cert = _walk(g)
        if cert is not None:
            return cert
    boundary = set(g.left) | set(g.right)
    anchored_nodes, anchored_edges, floating = [], [], []
    for nodes, edges in components(g):
        if boundary.intersection(nodes):
            anchored_nodes += nodes
            anchored_edges += edges
        else:
            floating.append(_canon_part(g, nodes, edges, False, unordered))
    anchored = _canon_part(g, sorted(anchored_nodes), sorted(anchored_edges), unordered_right, unordered)
    return (anchored, tuple(sorted(floating)))


def canonical_form(g: OpenHypergraph, unordered_right: bool = False, unordered=None) -> tuple:
    """A hashable invariant with canonical_form(g) == canonical_form(h) iff g ≅ h.

    ``unordered(op)`` may return a pair of flags marking the source or target
    ports of an operation as commutative; ``unordered_right`` ignores the order
    of the right interface.
    """
    return _canonical(g, unordered_right, unordered)


def iso_check(g: OpenHypergraph, h: OpenHypergraph) -> bool:
    if len(g.nodes) != len(h.nodes) or len(g.edges) != len(h.edges) or g.dom != h.dom or g.cod != h.cod:
        return False
    return canonical_form(g) == canonical_form(h)


# --- graphs back to terms ------------------------------------------------------------


class _Circuit:
    """Builds a term layer by layer while tracking which node each wire carries."""

    def __init__(self, g: OpenHypergraph, nodes: Sequence[int]):
        self.g = g
        self.counter = itertools.count()
        self.wires = [(v, next(self.counter)) for v in nodes]
        self.dom = tuple(g.nodes[v] for v in nodes)
        self.layers = []

    def sorts(self, wires):
        return tuple(self.g.nodes[v] for v, _ in wires)

    def fresh(self, v):
        return (v, next(self.counter))

    def find(self, v, exclude=()):
        for w in self.wires:
            if w[0] == v and w not in exclude:
                return w
        return None

    def apply(self, inputs, term: Term, outputs):
        """Route the given wires to the top, in order, and apply term to them."""
        chosen = set(inputs)
        idx = [self.wires.index(w) for w in inputs]
        at = min(idx) if idx else 0
        before = [w for w in self.wires[:at] if w not in chosen]
        after = [w for w in self.wires[at:] if w not in chosen]
        self._permute(before + list(inputs) + after)
        self.layers.append(par_all([id_word(self.sorts(before)), term, id_word(self.sorts(after))]))
        self.wires = before + list(outputs) + after

    def _permute(self, new_order):
        where = {w: i for i, w in enumerate(new_order)}
        images = [where[w] for w in self.wires]
        if images != sorted(images):
            self.layers.append(permutation_term(images, self.sorts(self.wires)))
        self.wires = list(new_order)

    def finish(self, right: Sequence[int]) -> Term:
        pool = list(self.wires)
        order = []
        for v in right:
            w = next(w for w in pool if w[0] == v)
            pool.remove(w)
            order.append(w)
        if pool:
            raise AssertionError("dangling wires left over")
        self._permute(order)
        if not self.layers:
            return id_word(self.dom)
        return seq_all(self.layers)


def to_term(g: OpenHypergraph) -> Term:
    report = is_monogamous(g)
    if not report:
        raise NotMonogamous(f"node {report.node} violates monogamy ({report.reason})")
    order = topological_edges(g)
    c = _Circuit(g, g.left)
    for k in order:
        e = g.edges[k]
        inputs = [c.find(s) for s in e.sources]
        c.apply(inputs, Gen(e.op), [c.fresh(t) for t in e.targets])
    return c.finish(g.right)


def to_term_frob(g: OpenHypergraph) -> Term:
    """A term over Σ plus Frobenius generators whose Frobenius graph is g."""

    def op(kind, v):
        return Gen(structural_op(kind, g.nodes[v]))

    deg = degrees(g)
    uses = [d.out_degree for d in deg.nodes]
    pending = [d.in_degree for d in deg.nodes]
    c = _Circuit(g, g.left)

    def merge(v):
        while True:
            ws = [w for w in c.wires if w[0] == v]
            if len(ws) < 2:
                return
            c.apply(ws[:2], op("mult", v), [c.fresh(v)])

    def wire_for(v, exclude):
        w = c.find(v, exclude)
        if w is None:
            w = c.fresh(v)
            c.apply([], op("unit", v), [w])
        return w

    for v in dict.fromkeys(g.left):
        merge(v)
    for k in topological_edges(g, strict=False):
        e = g.edges[k]
        reserved = []
        for s in e.sources:
            uses[s] -= 1
            w = wire_for(s, reserved)
            if uses[s] + deg[s].right_multiplicity + pending[s] > 0:
                a, b = c.fresh(s), c.fresh(s)
                c.apply([w], op("comult", s), [a, b])
                w = a
            reserved.append(w)
        c.apply(reserved, Gen(e.op), [c.fresh(t) for t in e.targets])
        for t in e.targets:
            pending[t] -= 1
            merge(t)
    touched = set(g.left) | {v for e in g.edges for v in e.sources + e.targets}
    for v in range(len(g.nodes)):
        w = c.find(v)
        if w is None:
            if v in touched:
                continue
            w = wire_for(v, ())
        copies = deg[v].right_multiplicity
        if copies == 0:
            c.apply([w], op("counit", v), [])
        for _ in range(copies - 1):
            a, b = c.fresh(v), c.fresh(v)
            c.apply([w], op("comult", v), [a, b])
            w = b
    return c.finish(g.right)
