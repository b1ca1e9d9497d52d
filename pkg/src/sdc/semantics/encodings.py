"""Diagrams denoting given functions, relations, spans, cospans and corelations."""

from __future__ import annotations

from ..syntax import Gen, Id, Term, par_all, permutation_term, seq_all, structural_op
from .morphisms import Corelation, FinCospan, FinFunction, FinRelation, FinSpan


def merge_tree(k: int, sort: str = "x") -> Term:
    """k wires merged into one: unit for k = 0, a left-nested chain of mult otherwise."""
    if k == 0:
        return Gen(structural_op("unit", sort))
    t = Id((sort,))
    for _ in range(k - 1):
        m = Gen(structural_op("mult", sort))
        t = m if isinstance(t, Id) else seq_all([par_all([t, Id((sort,))]), m])
    return t


def copy_tree(k: int, sort: str = "x") -> Term:
    """One wire copied to k: counit for k = 0, a left-nested chain of comult otherwise."""
    if k == 0:
        return Gen(structural_op("counit", sort))
    t = Id((sort,))
    for _ in range(k - 1):
        c = Gen(structural_op("comult", sort))
        t = c if isinstance(t, Id) else seq_all([c, par_all([t, Id((sort,))])])
    return t


def _route(keys: list, sort: str) -> Term:
    """Permutation sorting wires stably by key."""
    order = sorted(range(len(keys)), key=lambda i: keys[i])
    images = [0] * len(keys)
    for pos, i in enumerate(order):
        images[i] = pos
    return permutation_term(images, (sort,) * len(keys))


def _layer(trees) -> Term:
    return par_all(list(trees))


def fn_to_diagram(f: FinFunction, sort: str = "x") -> Term:
    counts = [f.images.count(j) for j in range(f.cod_size)]
    return seq_all([_route(list(f.images), sort), _layer(merge_tree(k, sort) for k in counts)])


def _fan(dom_size: int, cod_size: int, legs: list, sort: str) -> Term:
    """Copy each left wire once per leg leaving it, then merge the legs arriving at each right wire."""
    legs = sorted(legs)
    out = [sum(1 for a, _ in legs if a == i) for i in range(dom_size)]
    into = [sum(1 for _, b in legs if b == j) for j in range(cod_size)]
    return seq_all(
        [
            _layer(copy_tree(k, sort) for k in out),
            _route([b for _, b in legs], sort),
            _layer(merge_tree(k, sort) for k in into),
        ]
    )


def rel_to_diagram(r: FinRelation, sort: str = "x") -> Term:
    return _fan(r.dom_size, r.cod_size, list(r.pairs), sort)


def span_to_diagram(s: FinSpan, sort: str = "x") -> Term:
    return _fan(s.dom_size, s.cod_size, list(s.legs), sort)


def cospan_to_diagram(c: FinCospan, sort: str = "x") -> Term:
    into = [c.f.count(a) for a in range(c.apex)]
    out = [c.g.count(a) for a in range(c.apex)]
    # right wires leave the apex grouped by apex element; put them back in order
    grouped = sorted(range(c.cod_size), key=lambda j: c.g[j])
    images = [0] * c.cod_size
    for pos, j in enumerate(grouped):
        images[pos] = j
    return seq_all(
        [
            _route(list(c.f), sort),
            _layer(seq_all([merge_tree(into[a], sort), copy_tree(out[a], sort)]) for a in range(c.apex)),
            permutation_term(images, (sort,) * c.cod_size),
        ]
    )


def corel_to_diagram(k: Corelation, sort: str = "x") -> Term:
    return cospan_to_diagram(k.cospan(), sort)
