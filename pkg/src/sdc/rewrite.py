"""Double-pushout rewriting of open hypergraphs modulo a symmetric monoidal theory."""

from __future__ import annotations

import functools
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import BoundaryMismatch, MixedGenerators, NoSuchMatch, NoSuchRule, StaleMatch
from .hypergraph import (
    Hyperedge,
    OpenHypergraph,
    UnionFind,
    _trusted,
    canonical_form,
    collapse_frobenius,
    components,
    from_term,
    quotient,
    restrict,
)
from .syntax import FROBENIUS_KINDS, OperationDecl, Signature, Term, format_word

MONOGAMOUS = "monogamous"
FROBENIUS = "frobenius"

EQUAL = "equal"
NOT_EQUAL = "not_equal"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class RewriteRule:
    name: str
    lhs: OpenHypergraph
    rhs: OpenHypergraph
    oriented: bool = False

    def __post_init__(self):
        if self.lhs.dom != self.rhs.dom or self.lhs.cod != self.rhs.cod:
            raise BoundaryMismatch(
                f"rule {self.name}: {format_word(self.lhs.dom)} -> {format_word(self.lhs.cod)} vs "
                f"{format_word(self.rhs.dom)} -> {format_word(self.rhs.cod)}"
            )

    def reversed(self) -> "RewriteRule":
        name = self.name[1:] if self.name.startswith("~") else "~" + self.name
        return RewriteRule(name, self.rhs, self.lhs, False)


def rule_from_terms(name: str, lhs: Term, rhs: Term) -> RewriteRule:
    return RewriteRule(name, from_term(lhs), from_term(rhs))


@dataclass(frozen=True)
class Theory:
    name: str
    base_signature: Signature
    extra_generators: tuple = ()
    rules: tuple = ()
    mode: str = MONOGAMOUS
    # normalization: (rule name, "forward" | "backward"); names may refer to lemmas
    orientation: tuple = ()
    # derived equations, usable for normalization only
    lemmas: tuple = ()
    # (kind, sort) pairs: commutative monoids ("mult") or comonoids ("comult")
    # whose trees are compared modulo associativity, commutativity and units
    ac: tuple = ()
    # models that refute equations, by name (see semantics.oracles)
    countermodels: tuple = ()
    special: bool = False

    @property
    def signature(self) -> Signature:
        return self.base_signature.extend(self.extra_generators)

    def rule(self, name: str) -> RewriteRule:
        base = name[1:] if name.startswith("~") else name
        for r in self.rules + self.lemmas:
            if r.name == base:
                return r.reversed() if name.startswith("~") else r
        raise NoSuchRule(f"theory {self.name} has no rule {base}")

    def search_rules(self) -> list:
        """Rules in both directions, minus those the working representation already identifies."""
        if "_search" not in self.__dict__:
            object.__setattr__(self, "_search", self._search_rules())
        return list(self.__dict__["_search"])

    def _search_rules(self) -> list:
        out = []
        for r in self.rules:
            if self.mode == FROBENIUS:
                lhs, rhs = self.prepare(r.lhs), self.prepare(r.rhs)
                if canonical_form(lhs) == canonical_form(rhs):
                    continue
            out += [r, r.reversed()]
        return out

    def rule_names(self) -> list:
        return [r.name for r in self.rules]

    def oriented_rules(self) -> list:
        if "_oriented" not in self.__dict__:
            object.__setattr__(self, "_oriented", self._orient())
        return list(self.__dict__["_oriented"])

    def _orient(self) -> list:
        out = []
        for name, direction in self.orientation:
            r = self.rule(name)
            out.append(RewriteRule(r.name, r.lhs, r.rhs, True) if direction == "forward" else r.reversed())
        return out

    def is_frobenius(self, op: OperationDecl) -> bool:
        return self.mode == FROBENIUS and op.kind in FROBENIUS_KINDS

    def prepare(self, g: OpenHypergraph) -> OpenHypergraph:
        """Bring a graph into the theory's working representation."""
        if self.mode == FROBENIUS:
            return collapse_frobenius(g, self.is_frobenius)
        return g

    def with_rules(self, rules: Sequence[RewriteRule] = (), drop: Sequence[str] = (), name: str | None = None) -> "Theory":
        kept = tuple(r for r in self.rules if r.name not in drop) + tuple(rules)
        names = {r.name for r in kept} | {r.name for r in self.lemmas}
        orient = tuple((n, d) for n, d in self.orientation if n.lstrip("~") in names)
        return Theory(
            name or self.name,
            self.base_signature,
            self.extra_generators,
            kept,
            self.mode,
            orient,
            self.lemmas,
            self.ac,
            self.countermodels,
            self.special,
        )

    def with_orientation(self, orientation: Sequence[tuple]) -> "Theory":
        table = dict(self.orientation)
        for name, direction in orientation:
            self.rule(name)
            if direction == "off":
                table.pop(name, None)
            else:
                table[name] = direction
        return Theory(
            self.name,
            self.base_signature,
            self.extra_generators,
            self.rules,
            self.mode,
            tuple(table.items()),
            self.lemmas,
            self.ac,
            self.countermodels,
            self.special,
        )


# --- matching ---------------------------------------------------------------------


@dataclass(frozen=True)
class MatchSite:
    rule: str
    node_map: tuple  # pattern node -> host node
    edge_map: tuple  # pattern edge -> host edge
    host: OpenHypergraph = field(repr=False, compare=False)

    @property
    def boundary(self) -> tuple:
        return self.node_map


def _pattern(theory: Theory, rule: RewriteRule) -> tuple:
    if theory.mode == FROBENIUS:
        return theory.prepare(rule.lhs), theory.prepare(rule.rhs)
    return rule.lhs, rule.rhs


def _convex(host: OpenHypergraph, image_nodes: set, image_edges: set, out_edges: list) -> bool:
    """No directed path leaves the image through an outside edge and comes back."""
    seen = set()
    queue = deque()
    for v in image_nodes:
        for k in out_edges[v]:
            if k not in image_edges:
                queue.append(k)
    visited_edges = set()
    while queue:
        k = queue.popleft()
        if k in visited_edges:
            continue
        visited_edges.add(k)
        for t in host.edges[k].targets:
            if t in image_nodes:
                return False
            if t not in seen:
                seen.add(t)
                for k2 in out_edges[t]:
                    if k2 not in image_edges:
                        queue.append(k2)
    return True


def _pattern_index(rule: RewriteRule, mode: str) -> tuple:
    # kept on the rule itself: hashing rules for a shared cache costs more than the lookup saves
    cache = rule.__dict__.setdefault("_index", {})
    if mode not in cache:
        cache[mode] = _build_pattern_index(rule, mode)
    return cache[mode]


def _build_pattern_index(rule: RewriteRule, mode: str) -> tuple:
    lhs = collapse_frobenius(rule.lhs, lambda op: op.kind in FROBENIUS_KINDS) if mode == FROBENIUS else rule.lhs
    boundary = set(lhs.left) | set(lhs.right)
    internal = frozenset(u for u in range(len(lhs.nodes)) if u not in boundary)
    touched = {u for e in lhs.edges for u in e.sources + e.targets}
    loose = tuple(u for u in range(len(lhs.nodes)) if u not in touched)
    ops = tuple(Counter(e.op for e in lhs.edges).items())
    # visit pattern edges so that each one, when possible, shares a node with an earlier one;
    # that node's image then pins down the candidates
    order, plan, seen = [], [], set()
    left = list(range(len(lhs.edges)))
    while left:
        pick = next((k for k in left if seen.intersection(lhs.edges[k].sources + lhs.edges[k].targets)), left[0])
        left.remove(pick)
        ends = lhs.edges[pick].sources + lhs.edges[pick].targets
        anchor = next(((p, u) for p, u in enumerate(ends) if u in seen), None)
        order.append(pick)
        plan.append(anchor)
        seen.update(ends)
    return lhs, internal, _valence(lhs), loose, ops, _wiring(lhs), tuple(order), tuple(plan)


def _valence(g: OpenHypergraph) -> list:
    """Edge incidences at each node, counted with multiplicity."""
    out = [0] * len(g.nodes)
    for e in g.edges:
        for v in e.sources + e.targets:
            out[v] += 1
    return out


def _wiring(g: OpenHypergraph) -> frozenset:
    """(producer op, output port, consumer op, input port) for every edge feeding another.

    A match preserves ports, so a pattern's wiring must occur in its host.
    """
    made = [[] for _ in g.nodes]
    for e in g.edges:
        for p, v in enumerate(e.targets):
            made[v].append((e.op, p))
    return frozenset(a + (e.op, q) for e in g.edges for q, v in enumerate(e.sources) for a in made[v])


@functools.lru_cache(maxsize=256)
def _host_index(host: OpenHypergraph) -> tuple:
    out_edges = [[] for _ in host.nodes]
    ports = [[] for _ in host.nodes]
    by_op = {}
    for k, e in enumerate(host.edges):
        for s in e.sources:
            out_edges[s].append(k)
        for p, v in enumerate(e.sources + e.targets):
            ports[v].append((k, p))
        by_op.setdefault(e.op, []).append(k)
    return [len(p) for p in ports], frozenset(host.left) | frozenset(host.right), out_edges, by_op, ports, _wiring(host)


def iter_matches(theory: Theory, rule: RewriteRule, host: OpenHypergraph) -> Iterator[MatchSite]:
    frob = theory.mode == FROBENIUS
    lhs, internal_set, pdeg, loose, ops, wiring, order, plan = _pattern_index(rule, theory.mode)
    hdeg, host_iface, out_edges, by_op, ports, host_wiring = _host_index(host)
    if any(len(by_op.get(op, ())) < n for op, n in ops) or not wiring <= host_wiring:
        return

    def admissible(u, h, nmap, used):
        if lhs.nodes[u] != host.nodes[h]:
            return False
        if u in internal_set:
            if h in host_iface:
                return False
            if pdeg[u] != hdeg[h]:
                return False
            return h not in used
        if frob:
            return used.get(h, "b") == "b"
        return h not in used

    def bind(u, h, nmap, used):
        """Returns the list of newly bound pattern nodes, or None on conflict."""
        if u in nmap:
            return [] if nmap[u] == h else None
        if not admissible(u, h, nmap, used):
            return None
        nmap[u] = h
        if h not in used:
            used[h] = "i" if u in internal_set else "b"
            return [(u, h, True)]
        return [(u, h, False)]

    def unbind(bound, nmap, used):
        for u, h, fresh in bound:
            del nmap[u]
            if fresh:
                del used[h]

    pedges = lhs.edges
    emap = [None] * len(pedges)
    used_edges = set()

    def finish(nmap, used):
        yield from assign_loose(0, nmap, used)

    def assign_loose(i, nmap, used):
        if i == len(loose):
            image_nodes = set(nmap.values())
            if not frob and not _convex(host, image_nodes, set(emap), out_edges):
                return
            yield MatchSite(rule.name, tuple(nmap[u] for u in range(len(lhs.nodes))), tuple(emap), host)
            return
        u = loose[i]
        for h in range(len(host.nodes)):
            if u in internal_set:
                if hdeg[h]:
                    continue
            b = bind(u, h, nmap, used)
            if b is None:
                continue
            yield from assign_loose(i + 1, nmap, used)
            unbind(b, nmap, used)

    def extend(i, nmap, used):
        if i == len(pedges):
            yield from finish(nmap, used)
            return
        pe = pedges[order[i]]
        if plan[i] is None:
            cands = by_op.get(pe.op, ())
        else:
            p, u = plan[i]
            cands = [k for k, q in ports[nmap[u]] if q == p and host.edges[k].op == pe.op]
        for k in cands:
            if k in used_edges:
                continue
            he = host.edges[k]
            bound = []
            ok = True
            for u, h in zip(pe.sources + pe.targets, he.sources + he.targets):
                b = bind(u, h, nmap, used)
                if b is None:
                    ok = False
                    break
                bound += b
            if ok:
                used_edges.add(k)
                emap[order[i]] = k
                yield from extend(i + 1, nmap, used)
                emap[order[i]] = None
                used_edges.discard(k)
            unbind(bound, nmap, used)

    yield from extend(0, {}, {})


def find_matches(theory: Theory, rule: RewriteRule, host: OpenHypergraph) -> list:
    return sorted(iter_matches(theory, rule, host), key=lambda m: (m.edge_map, m.node_map))


def apply_rewrite(theory: Theory, site: MatchSite, rule: RewriteRule, host: OpenHypergraph) -> OpenHypergraph:
    if site.host is not host and site.host != host:
        raise StaleMatch("the host graph changed since the match was found")
    if site.rule != rule.name:
        raise StaleMatch(f"match was found for rule {site.rule}, not {rule.name}")
    lhs, rhs = _pattern(theory, rule)
    nm = site.node_map
    frob = theory.mode == FROBENIUS
    nodes = list(host.nodes)
    image_edges = set(site.edge_map)
    edges = [host.edges[k] for k in range(len(host.edges)) if k not in image_edges]
    left, right = list(host.left), list(host.right)
    boundary = set(lhs.left) | set(lhs.right)
    doomed = {nm[u] for u in range(len(lhs.nodes)) if u not in boundary}

    rimage = {}
    if not frob:
        for u in set(lhs.left) & set(lhs.right):
            h = nm[u]
            split = len(nodes)
            nodes.append(nodes[h])
            edges = [Hyperedge(e.op, tuple(split if s == h else s for s in e.sources), e.targets) for e in edges]
            right = [split if v == h else v for v in right]
            rimage[u] = split
    lmap = [nm[u] for u in lhs.left]
    rmap = [rimage.get(u, nm[u]) for u in lhs.right]

    off = len(nodes)
    nodes += list(rhs.nodes)
    edges += [Hyperedge(e.op, tuple(s + off for s in e.sources), tuple(t + off for t in e.targets)) for e in rhs.edges]
    uf = UnionFind(len(nodes))
    for v, h in zip(rhs.left, lmap):
        uf.union(v + off, h)
    for v, h in zip(rhs.right, rmap):
        uf.union(v + off, h)
    # deleted interior nodes are singleton classes, dropped while merging;
    # classes keep the order of their smallest member
    index = {}
    new_nodes = []
    for v in range(len(nodes)):
        if v in doomed:
            continue
        r = uf.find(v)
        if r not in index:
            index[r] = len(new_nodes)
            new_nodes.append(nodes[v])
    m = [index.get(uf.find(v)) for v in range(len(nodes))]
    return _trusted(
        tuple(new_nodes),
        tuple(Hyperedge(e.op, tuple(m[x] for x in e.sources), tuple(m[x] for x in e.targets)) for e in edges),
        tuple(m[v] for v in left),
        tuple(m[v] for v in right),
    )


def rewrite_once(theory: Theory, rule: RewriteRule, host: OpenHypergraph, index: int = 0) -> OpenHypergraph:
    matches = find_matches(theory, rule, host)
    if not 0 <= index < len(matches):
        raise NoSuchMatch(f"rule {rule.name} has {len(matches)} matches, index {index} requested")
    return apply_rewrite(theory, matches[index], rule, host)


def _first_rewrite(theory: Theory, rules: Sequence[RewriteRule], g: OpenHypergraph) -> OpenHypergraph | None:
    for r in rules:
        site = next(iter_matches(theory, r, g), None)
        if site is not None:
            return apply_rewrite(theory, site, r, g)
    return None


def normalize(theory: Theory, host: OpenHypergraph, step_cap: int = 1000) -> tuple:
    """Apply the first oriented match until none is left; returns (graph, steps, capped)."""
    g = theory.prepare(host)
    rules = theory.oriented_rules()
    steps = 0
    while True:
        h = _first_rewrite(theory, rules, g)
        if h is None:
            return g, steps, False
        if steps >= step_cap:
            return g, steps, True
        g = h
        steps += 1


def replay_derivation(theory: Theory, start: OpenHypergraph, script: Sequence) -> OpenHypergraph:
    """Run a scripted derivation of (rule name, match index) steps; `~name` uses a rule right to left."""
    g = theory.prepare(start)
    for step, (name, index) in enumerate(script):
        rule = theory.rule(name)
        matches = find_matches(theory, rule, g)
        if not 0 <= index < len(matches):
            raise NoSuchMatch(f"step {step}: rule {name} has {len(matches)} matches, index {index} requested")
        g = apply_rewrite(theory, matches[index], rule, g)
    return g


# --- commutative trees modulo associativity and units ------------------------------------


def _nary(kind: str, sort: str, n: int) -> OperationDecl:
    if kind == "mult":
        return OperationDecl(f"mult_{sort}*", (sort,) * n, (sort,), "mult*")
    return OperationDecl(f"comult_{sort}*", (sort,), (sort,) * n, "comult*")


def _unordered(op: OperationDecl) -> tuple:
    if op.kind == "mult*":
        return (True, False)
    if op.kind == "comult*":
        return (False, True)
    return (False, False)


def flatten_ac(g: OpenHypergraph, ac: Sequence[tuple]) -> OpenHypergraph:
    """Fuse commutative (co)monoid trees into n-ary edges with units absorbed."""
    families = {}
    for kind, sort in ac:
        unit = "unit" if kind == "mult" else "counit"
        families[(kind, sort)] = kind
        families[(unit, sort)] = kind
    edges = []
    for e in g.edges:
        fam = families.get((e.op.kind, e.op.sort)) if e.op.kind else None
        if fam == "mult":
            edges.append(Hyperedge(_nary("mult", e.op.sort, len(e.sources)), e.sources, e.targets))
        elif fam == "comult":
            edges.append(Hyperedge(_nary("comult", e.op.sort, len(e.targets)), e.sources, e.targets))
        else:
            edges.append(e)
    iface = set(g.left) | set(g.right)
    alive = [True] * len(edges)
    dropped = set()
    changed = True
    while changed:
        changed = False
        consumer, producer = {}, {}
        for k, e in enumerate(edges):
            if not alive[k]:
                continue
            for s in e.sources:
                consumer.setdefault(s, []).append(k)
            for t in e.targets:
                producer.setdefault(t, []).append(k)
        for k, e in enumerate(edges):
            if not alive[k]:
                continue
            if e.op.kind == "mult*":
                t = e.targets[0]
                cs = consumer.get(t, [])
                if t in iface or len(cs) != 1 or len(producer.get(t, [])) != 1:
                    continue
                j = cs[0]
                f = edges[j]
                if j == k or f.op.kind != "mult*" or f.op.sort != e.op.sort or f.sources.count(t) != 1:
                    continue
                i = f.sources.index(t)
                dropped.add(t)
                src = f.sources[:i] + e.sources + f.sources[i + 1 :]
                edges[j] = Hyperedge(_nary("mult", f.op.sort, len(src)), src, f.targets)
            elif e.op.kind == "comult*":
                s = e.sources[0]
                ps = producer.get(s, [])
                if s in iface or len(ps) != 1 or len(consumer.get(s, [])) != 1:
                    continue
                j = ps[0]
                f = edges[j]
                if j == k or f.op.kind != "comult*" or f.op.sort != e.op.sort or f.targets.count(s) != 1:
                    continue
                i = f.targets.index(s)
                dropped.add(s)
                tgt = f.targets[:i] + e.targets + f.targets[i + 1 :]
                edges[j] = Hyperedge(_nary("comult", f.op.sort, len(tgt)), f.sources, tgt)
            else:
                continue
            alive[k] = False
            changed = True
            break
    edges = [e for k, e in enumerate(edges) if alive[k]]
    kept, contract = [], []
    for e in edges:
        if e.op.kind in ("mult*", "comult*") and len(e.sources) == 1 and len(e.targets) == 1:
            contract.append((e.sources[0], e.targets[0]))
        else:
            kept.append(e)
    renumber = {v: i for i, v in enumerate(v for v in range(len(g.nodes)) if v not in dropped)}
    contract = [(renumber[a], renumber[b]) for a, b in contract]
    g = OpenHypergraph(g.nodes, tuple(kept), g.left, g.right)
    g = restrict(g, [v for v in range(len(g.nodes)) if v not in dropped], range(len(kept)))
    uf = UnionFind(len(g.nodes))
    for a, b in contract:
        uf.union(a, b)
    return quotient(g.nodes, g.edges, g.left, g.right, uf)


def graph_key(theory: Theory, g: OpenHypergraph) -> tuple:
    """Canonical key of a graph already in the theory's representation."""
    if theory.ac:
        return canonical_form(flatten_ac(g, theory.ac), unordered=_unordered)
    return canonical_form(g)


def normal_key(theory: Theory, g: OpenHypergraph, step_cap: int = 1000, memo: dict | None = None) -> tuple:
    """(graph key of a normal form of g, whether the step cap was hit).

    A memo dict shared between calls maps the key of every graph met on the
    way to the result. The answer is then a normal form of some graph
    isomorphic to an intermediate one, so it is still reachable from g; for
    confluent orientations it is the same key as without the memo.
    """
    if memo is None:
        n, _, capped = normalize(theory, g, step_cap)
        return graph_key(theory, n), capped
    g = theory.prepare(g)
    rules = theory.oriented_rules()
    path = []
    while True:
        key = graph_key(theory, g)
        if key in memo:
            result = memo[key]
            break
        path.append(key)
        h = _first_rewrite(theory, rules, g)
        if h is None:
            result = (key, False)
            break
        if len(path) > step_cap:
            result = (key, True)
            break
        g = h
    for key in path:
        memo[key] = result
    return result


# --- spiders ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Spider:
    sort: str
    left_legs: int
    right_legs: int
    loops: int = 0


def spider_normal_form(g: OpenHypergraph, special: bool = False) -> list:
    sorts = set()
    for e in g.edges:
        if e.op.kind not in FROBENIUS_KINDS:
            raise MixedGenerators(f"{e.op.name} is not a Frobenius generator")
        sorts.add(e.op.sort)
    sorts |= set(g.nodes)
    if len(sorts) > 1:
        raise MixedGenerators(f"more than one sort: {sorted(sorts)}")
    out = []
    for nodes, edges in components(g):
        ns = set(nodes)
        n = sum(1 for v in g.left if v in ns)
        m = sum(1 for v in g.right if v in ns)
        incidences = sum(len(g.edges[k].sources) + len(g.edges[k].targets) for k in edges)
        k = incidences - (len(nodes) + len(edges)) + 1
        out.append(Spider(g.nodes[nodes[0]], n, m, 0 if special else k))
    return out


# --- deciding equality -------------------------------------------------------------------


def _neighbours(theory: Theory, g: OpenHypergraph, rules: Sequence[RewriteRule]) -> Iterator[OpenHypergraph]:
    for r in rules:
        for site in iter_matches(theory, r, g):
            yield apply_rewrite(theory, site, r, g)


def search_equal(theory: Theory, a: OpenHypergraph, b: OpenHypergraph, budget: int) -> bool:
    """Bounded bidirectional breadth-first search over rule applications in both directions."""
    rules = theory.search_rules()
    seen = [{graph_key(theory, a): a}, {graph_key(theory, b): b}]
    if set(seen[0]) & set(seen[1]):
        return True
    queues = [deque([a]), deque([b])]
    expansions = 0
    side = 0
    while expansions < budget and (queues[0] or queues[1]):
        if not queues[side]:
            side = 1 - side
        g = queues[side].popleft()
        expansions += 1
        for h in _neighbours(theory, g, rules):
            key = graph_key(theory, h)
            if key in seen[1 - side]:
                return True
            if key not in seen[side]:
                seen[side][key] = h
                queues[side].append(h)
        side = 1 - side
    return False


def decide_eq(
    theory: Theory, a: OpenHypergraph, b: OpenHypergraph, budget: int = 200, step_cap: int = 1000, seed: int = 0
) -> str:
    if a.dom != b.dom or a.cod != b.cod:
        raise BoundaryMismatch(
            f"{format_word(a.dom)} -> {format_word(a.cod)} vs {format_word(b.dom)} -> {format_word(b.cod)}"
        )
    a, b = theory.prepare(a), theory.prepare(b)
    if not theory.search_rules():
        return EQUAL if canonical_form(a) == canonical_form(b) else NOT_EQUAL
    na, _, _ = normalize(theory, a, step_cap)
    nb, _, _ = normalize(theory, b, step_cap)
    if graph_key(theory, na) == graph_key(theory, nb):
        return EQUAL
    from .semantics.oracles import refutes

    # a countermodel satisfies every rule, so no search could succeed after it
    if refutes(theory, a, b, seed=seed):
        return NOT_EQUAL
    if budget > 0 and search_equal(theory, na, nb, budget):
        return EQUAL
    return UNKNOWN
