import itertools
import random

import pytest

from sdc.errors import CyclicGraph, NotMonogamous
from sdc.generators import random_hypergraph, random_term
from sdc.graphio import dump_graph, load_graph, to_dot
from sdc.hypergraph import (
    Hyperedge,
    OpenHypergraph,
    canonical_form,
    components,
    from_term,
    from_term_frob,
    identity_graph,
    is_acyclic,
    is_monogamous,
    iso_check,
    par_compose,
    seq_compose,
    to_term,
    to_term_frob,
)
from sdc.syntax import Gen, Id, Par, Seq, Sym, declare_signature, structural_op


@pytest.fixture
def sig():
    return declare_signature(["x", "y"], [("c1", ["y"], ["x"]), ("c2", ["x"], ["x"]), ("d", ["x", "x"], ["y"])])


def test_sym_involution_is_identity():
    g = from_term(Seq(Sym("x", "y"), Sym("y", "x")))
    assert iso_check(g, identity_graph(("x", "y")))


def test_crossing_matters(sig):
    c1, c2, d = (Gen(sig.op(n)) for n in ("c1", "c2", "d"))
    plain = from_term(Seq(Par(c1, c2), d))
    crossed = from_term(Seq(Seq(Par(c1, c2), Sym("x", "x")), d))
    assert not iso_check(plain, crossed)
    assert iso_check(plain, from_term(Seq(Seq(Seq(Par(c1, c2), Sym("x", "x")), Sym("x", "x")), d)))


def test_composition_matches_terms(sig):
    rng = random.Random(0)
    for _ in range(50):
        a = random_term(sig, rng, 3)
        b = random_term(sig, rng, 3, dom=a.cod)
        c = random_term(sig, rng, 2)
        assert iso_check(from_term(Seq(a, b)), seq_compose(from_term(a), from_term(b)))
        assert iso_check(from_term(Par(a, c)), par_compose(from_term(a), from_term(c)))


def test_canonical_form_ignores_numbering(sig):
    f = sig.op("c2")
    g = OpenHypergraph(("x", "x", "x"), (Hyperedge(f, (0,), (1,)), Hyperedge(f, (1,), (2,))), (0,), (2,))
    h = OpenHypergraph(("x", "x", "x"), (Hyperedge(f, (2,), (0,)), Hyperedge(f, (1,), (2,))), (1,), (0,))
    assert canonical_form(g) == canonical_form(h)


def test_monogamy_witnesses(sig):
    f = sig.op("c2")
    shared = OpenHypergraph(("x",) * 3, (Hyperedge(f, (0,), (1,)), Hyperedge(f, (0,), (2,))), (0,), (1, 2))
    rep = is_monogamous(shared)
    assert not rep.ok and rep.reason == "out_degree" and rep.node == 0
    twice_right = OpenHypergraph(("x",), (), (0,), (0, 0))
    assert is_monogamous(twice_right).reason == "right_not_injective"


def test_to_term_rejects_non_monogamous(sig):
    f = sig.op("c2")
    g = OpenHypergraph(("x",) * 3, (Hyperedge(f, (0,), (1,)), Hyperedge(f, (0,), (2,))), (0,), (1, 2))
    with pytest.raises(NotMonogamous):
        to_term(g)


def test_to_term_rejects_cycles(sig):
    f = sig.op("c2")
    loop = OpenHypergraph(("x",), (Hyperedge(f, (0,), (0,)),), (), ())
    assert not is_acyclic(loop)
    with pytest.raises((CyclicGraph, NotMonogamous)):
        to_term(loop)
    assert iso_check(from_term_frob(to_term_frob(loop)), loop)


def test_frobenius_collapse_gives_spider():
    ops = {k: Gen(structural_op(k, "x")) for k in ("comult", "mult", "unit", "counit")}
    bubble = Seq(ops["comult"], ops["mult"])
    g = from_term_frob(bubble)
    assert len(g.edges) == 0 and len(g.nodes) == 1
    assert g.left == g.right == (0,)
    assert iso_check(from_term_frob(ops["unit"]), OpenHypergraph(("x",), (), (), (0,)))


def test_random_hypergraph_roundtrip(sig):
    rng = random.Random(4)
    for _ in range(40):
        g = random_hypergraph(sig.operations, rng)
        assert iso_check(from_term_frob(to_term_frob(g)), g)


def test_components(sig):
    g = from_term(Par(Gen(sig.op("c2")), Id(("y",))))
    assert len(components(g)) == 2


def test_graph_text_roundtrip(sig):
    g = from_term(Seq(Par(Gen(sig.op("c1")), Gen(sig.op("c2"))), Gen(sig.op("d"))))
    assert iso_check(load_graph(dump_graph(g), sig), g)
    assert to_dot(g).startswith("digraph")


def relabel(g, rng):
    perm = list(range(len(g.nodes)))
    rng.shuffle(perm)
    nodes = [None] * len(perm)
    for v, p in enumerate(perm):
        nodes[p] = g.nodes[v]
    edges = [Hyperedge(e.op, tuple(perm[s] for s in e.sources), tuple(perm[t] for t in e.targets)) for e in g.edges]
    rng.shuffle(edges)
    return OpenHypergraph(tuple(nodes), tuple(edges), tuple(perm[v] for v in g.left), tuple(perm[v] for v in g.right))


def test_canonical_form_is_label_free(sig):
    rng = random.Random(8)
    for _ in range(100):
        t = random_term(sig, rng, rng.randint(1, 6))
        g = from_term(t)
        assert canonical_form(relabel(g, rng)) == canonical_form(g)
        h = random_hypergraph(sig.operations, rng)
        assert canonical_form(relabel(h, rng)) == canonical_form(h)


def test_canonical_form_separates_random_graphs(sig):
    rng = random.Random(9)
    graphs = [random_hypergraph(sig.operations, rng, max_nodes=4, max_edges=3) for _ in range(150)]
    for g, h in itertools.combinations(graphs, 2):
        if canonical_form(g) == canonical_form(h):
            assert any(canonical_form(relabel(g, rng)) == canonical_form(h) for _ in range(3))
            assert (sorted(g.nodes), len(g.edges), g.dom, g.cod) == (sorted(h.nodes), len(h.edges), h.dom, h.cod)
