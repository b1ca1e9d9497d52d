"""Random and exhaustive sources of terms and graphs, for property tests."""

from __future__ import annotations

import itertools
import random
from typing import Callable, Iterator, Sequence

from .hypergraph import Hyperedge, OpenHypergraph, _trusted, canonical_form, from_term
from .syntax import (
    Empty,
    Gen,
    Id,
    OperationDecl,
    Par,
    Seq,
    Signature,
    Sym,
    Term,
    id_word,
    par_all,
    permutation_term,
    sym_words,
)


def _layer(word: tuple, at: int, t: Term, width: int) -> Term:
    return par_all([id_word(word[:at]), t, id_word(word[at + width :])])


def _placements(word: tuple, op: OperationDecl) -> list:
    n = len(op.arity)
    return [i for i in range(len(word) - n + 1) if word[i : i + n] == op.arity]


def random_term(
    sig: Signature,
    rng: random.Random,
    layers: int = 4,
    dom: Sequence[str] | None = None,
    max_width: int = 5,
    p_sym: float = 0.25,
    p_par: float = 0.2,
) -> Term:
    """A random well-typed term built from generator layers, crossings and parallel blocks."""
    if dom is None:
        dom = tuple(rng.choice(sig.objects) for _ in range(rng.randint(0, 3)))
    dom = tuple(dom)
    if layers > 1 and len(dom) >= 2 and rng.random() < p_par:
        cut = rng.randint(1, len(dom) - 1)
        k = rng.randint(1, layers - 1)
        top_w = max(cut, max_width - max_width // 2)
        bottom_w = max(len(dom) - cut, max_width // 2)
        top = random_term(sig, rng, k, dom[:cut], top_w, p_sym, p_par)
        bottom = random_term(sig, rng, layers - k, dom[cut:], bottom_w, p_sym, p_par)
        return Par(top, bottom)
    t = None
    cur = dom
    for _ in range(layers):
        if len(cur) >= 2 and rng.random() < p_sym:
            i = rng.randrange(len(cur) - 1)
            step = _layer(cur, i, Sym(cur[i], cur[i + 1]), 2)
        else:
            options = [
                (op, i)
                for op in sig.operations
                if len(cur) - len(op.arity) + len(op.coarity) <= max_width
                for i in _placements(cur, op)
            ]
            if not options:
                continue
            op, i = rng.choice(options)
            step = _layer(cur, i, Gen(op), len(op.arity))
        t = step if t is None else Seq(t, step)
        cur = step.cod
    return id_word(dom) if t is None else t


# --- the symmetric monoidal laws, as local perturbations ---------------------------------


def _subterms(t: Term, path=()) -> Iterator[tuple]:
    yield path, t
    if isinstance(t, Seq):
        yield from _subterms(t.left, path + ("left",))
        yield from _subterms(t.right, path + ("right",))
    elif isinstance(t, Par):
        yield from _subterms(t.top, path + ("top",))
        yield from _subterms(t.bottom, path + ("bottom",))


def _replace(t: Term, path: tuple, new: Term) -> Term:
    if not path:
        return new
    head, rest = path[0], path[1:]
    if isinstance(t, Seq):
        if head == "left":
            return Seq(_replace(t.left, rest, new), t.right)
        return Seq(t.left, _replace(t.right, rest, new))
    if head == "top":
        return Par(_replace(t.top, rest, new), t.bottom)
    return Par(t.top, _replace(t.bottom, rest, new))


def _laws(t: Term) -> list:
    """(law name, rewritten subterm) pairs for every law instance at the root of t."""
    out = [
        ("id_left", Seq(id_word(t.dom), t)),
        ("id_right", Seq(t, id_word(t.cod))),
        ("unit_left", Par(Empty(), t)),
        ("unit_right", Par(t, Empty())),
    ]
    if isinstance(t, Seq):
        a, b = t.left, t.right
        if isinstance(a, Seq):
            out.append(("seq_assoc", Seq(a.left, Seq(a.right, b))))
        if isinstance(b, Seq):
            out.append(("seq_assoc_rev", Seq(Seq(a, b.left), b.right)))
        if isinstance(a, (Id, Empty)) or (a.dom == a.cod and a == id_word(a.dom)):
            out.append(("id_drop_left", b))
        if isinstance(b, (Id, Empty)) or (b.dom == b.cod and b == id_word(b.dom)):
            out.append(("id_drop_right", a))
        if isinstance(a, Par) and isinstance(b, Par) and a.top.cod == b.top.dom:
            out.append(("interchange", Par(Seq(a.top, b.top), Seq(a.bottom, b.bottom))))
        if isinstance(a, Sym) and isinstance(b, Sym) and b.x == a.y and b.y == a.x:
            out.append(("sym_involution_rev", Id((a.x, a.y))))
    if isinstance(t, Par):
        a, b = t.top, t.bottom
        if isinstance(a, Par):
            out.append(("par_assoc", Par(a.top, Par(a.bottom, b))))
        if isinstance(b, Par):
            out.append(("par_assoc_rev", Par(Par(a, b.top), b.bottom)))
        if isinstance(a, Seq) and isinstance(b, Seq):
            out.append(("interchange_rev", Seq(Par(a.left, b.left), Par(a.right, b.right))))
        if isinstance(a, Id) and isinstance(b, Id):
            out.append(("id_merge", Id(a.w + b.w)))
        if isinstance(a, Empty):
            out.append(("unit_drop_left", b))
        if isinstance(b, Empty):
            out.append(("unit_drop_right", a))
        out.append(
            ("sym_natural", Seq(Seq(sym_words(a.dom, b.dom), Par(b, a)), sym_words(b.cod, a.cod)))
        )
    if isinstance(t, Id) and len(t.w) >= 1:
        if len(t.w) >= 2:
            out.append(("id_split", Par(Id(t.w[:1]), Id(t.w[1:]))))
            x, y = t.w[0], t.w[1]
            rest = t.w[2:]
            out.append(("sym_involution", par_all([Seq(Sym(x, y), Sym(y, x)), id_word(rest)])))
    return out


SMC_LAWS = (
    "id_left",
    "id_right",
    "unit_left",
    "unit_right",
    "seq_assoc",
    "seq_assoc_rev",
    "id_drop_left",
    "id_drop_right",
    "interchange",
    "interchange_rev",
    "par_assoc",
    "par_assoc_rev",
    "unit_drop_left",
    "unit_drop_right",
    "sym_natural",
    "id_split",
    "id_merge",
    "sym_involution",
    "sym_involution_rev",
)


def perturb(t: Term, rng: random.Random) -> tuple:
    """Apply one law instance somewhere in t; returns (law, new term).

    The law is drawn first and the site second, so rare laws are not
    drowned out by the identity and unit laws that apply everywhere.
    """
    sites = {}
    for path, s in _subterms(t):
        for law, new in _laws(s):
            sites.setdefault(law, []).append((path, new))
    law = rng.choice(sorted(sites))
    path, new = rng.choice(sites[law])
    return law, _replace(t, path, new)


# --- random open hypergraphs --------------------------------------------------------------


def random_hypergraph(
    ops: Sequence[OperationDecl], rng: random.Random, max_nodes: int = 8, max_edges: int = 5
) -> OpenHypergraph:
    """Any shape: cycles, shared nodes, repeated and missing interface legs are all allowed."""
    sorts = sorted({s for op in ops for s in op.arity + op.coarity})
    n = rng.randint(1, max_nodes)
    nodes = [rng.choice(sorts) for _ in range(n)]
    by_sort = {}
    for v, s in enumerate(nodes):
        by_sort.setdefault(s, []).append(v)
    edges = []
    for _ in range(rng.randint(0, max_edges)):
        usable = [op for op in ops if all(s in by_sort for s in op.arity + op.coarity)]
        if not usable:
            break
        op = rng.choice(usable)
        src = tuple(rng.choice(by_sort[s]) for s in op.arity)
        tgt = tuple(rng.choice(by_sort[s]) for s in op.coarity)
        edges.append(Hyperedge(op, src, tgt))
    left = tuple(rng.randrange(n) for _ in range(rng.randint(0, 3)))
    right = tuple(rng.randrange(n) for _ in range(rng.randint(0, 3)))
    return OpenHypergraph(tuple(nodes), tuple(edges), left, right)


# --- exhaustive enumeration ---------------------------------------------------------------


def _feed(word: tuple, chosen: Sequence[int], op: OperationDecl) -> Term:
    """Route the chosen wires, in order, to the bottom and apply op to them."""
    rest = [i for i in range(len(word)) if i not in chosen]
    images = [0] * len(word)
    for pos, i in enumerate(rest + list(chosen)):
        images[i] = pos
    keep = tuple(word[i] for i in rest)
    step = par_all([id_word(keep), Gen(op)])
    if images == list(range(len(word))):
        return step
    return Seq(permutation_term(images, word), step)


def _append(g: OpenHypergraph, labels: tuple, count: int, taken: Sequence[int], op: OperationDecl, at: int | None):
    """g followed by op on the right wires at positions taken, with updated component labels.

    Outputs replace the taken wires at position at, or go last when at is None.
    Returns (graph, labels, component count).
    """
    n = len(g.nodes)
    outs = tuple(range(n, n + len(op.coarity)))
    consumed = tuple(g.right[i] for i in taken)
    if at is None:
        keep = [v for i, v in enumerate(g.right) if i not in taken]
        right = tuple(keep) + outs
    else:
        right = g.right[:at] + outs + g.right[at + len(taken) :]
    h = _trusted(g.nodes + op.coarity, g.edges + (Hyperedge(op, consumed, outs),), g.left, right)
    merged = {labels[v] for v in consumed}
    new = min(merged) if merged else n
    labels = tuple(new if x in merged else x for x in labels) + (new,) * len(outs)
    if not consumed and not outs:
        return h, labels, count + 1
    return h, labels, count - len(merged) + 1


def _permute_right(g: OpenHypergraph, images: Sequence[int]) -> OpenHypergraph:
    right = [None] * len(g.right)
    for i, v in enumerate(g.right):
        right[images[i]] = v
    return _trusted(g.nodes, g.edges, g.left, tuple(right))


def enumerate_diagrams(
    ops: Sequence[OperationDecl],
    sort: str,
    max_gens: int,
    max_width: int = 4,
    planar: bool = False,
    max_boundary: int | None = None,
    connected: bool = False,
) -> list:
    """One (term, graph) pair per isomorphism class of diagrams over a single sort.

    Diagrams grow from identities one generator at a time. Off the planar
    setting the generator may take any of the open wires, and diagrams are
    identified up to the order of their right boundary while growing; every
    right order is restored at the end. Widths stay within max_width and
    boundaries (left plus right wires) within max_boundary. With connected,
    only diagrams whose hypergraph has a single component are returned.
    """
    max_boundary = 2 * max_width if max_boundary is None else max_boundary

    seen = {}
    frontier = []
    for n in range(min(max_width, max_boundary) + 1):
        t = id_word((sort,) * n)
        entry = (t, from_term(t), tuple(range(n)), n)
        seen[canonical_form(entry[1], unordered_right=not planar)] = entry
        frontier.append(entry)
    for step in range(max_gens):
        left = max_gens - step - 1
        nxt = []
        for t, g, labels, count in frontier:
            w = len(t.cod)
            for op in ops:
                k = len(op.arity)
                if k > w or w - k + len(op.coarity) > max_width:
                    continue
                # each generator narrows the diagram by at most one wire
                if len(t.dom) + w - k + len(op.coarity) - left > max_boundary:
                    continue
                if planar:
                    choices = [(tuple(range(at, at + k)), at) for at in range(w - k + 1)]
                else:
                    choices = [(c, None) for c in itertools.permutations(range(w), k)]
                for taken, at in choices:
                    h, hl, hc = _append(g, labels, count, taken, op, at)
                    # and joins at most two components
                    if connected and hc - left > 1:
                        continue
                    key = canonical_form(h, unordered_right=not planar)
                    if key not in seen:
                        layer = _layer(t.cod, at, Gen(op), k) if planar else _feed(t.cod, taken, op)
                        seen[key] = (Seq(t, layer), h, hl, hc)
                        nxt.append(seen[key])
        frontier = nxt
    out = {}
    for t, g, _, count in seen.values():
        if len(t.dom) + len(t.cod) > max_boundary:
            continue
        if connected and count != 1:
            continue
        if planar:
            out[canonical_form(g)] = (t, g)
            continue
        w = len(t.cod)
        for p in itertools.permutations(range(w)):
            if list(p) == list(range(w)):
                out.setdefault(canonical_form(g), (t, g))
                continue
            h = _permute_right(g, p)
            key = canonical_form(h)
            if key not in out:
                out[key] = (Seq(t, permutation_term(p, t.cod)), h)
    return list(out.values())


def enumerate_terms(ops: Sequence[OperationDecl], sort: str, max_gens: int, **caps) -> list:
    """One term per isomorphism class; see enumerate_diagrams for the caps."""
    return [t for t, _ in enumerate_diagrams(ops, sort, max_gens, **caps)]
