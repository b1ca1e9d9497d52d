import random
from fractions import Fraction

import pytest

from sdc.errors import UnassignedGenerator
from sdc.semantics.encodings import cospan_to_diagram, fn_to_diagram, rel_to_diagram, span_to_diagram
from sdc.semantics.laws import functor_check, trace_via_compact
from sdc.semantics.models import MODELS, model_by_name, model_finrel_product, model_matrix
from sdc.semantics.morphisms import Corelation, FinCospan, FinFunction, FinRelation, FinSpan, Matrix
from sdc.syntax import Gen, Id, OperationDecl, Par, Seq, Sym, structural_op

X = ("x",)


def op(kind):
    return Gen(structural_op(kind, "x"))


def test_function_algebra():
    f = FinFunction(3, 2, (1, 1, 0))
    assert f.then(FinFunction(2, 1, (0, 0))).images == (0, 0, 0)
    assert f.plus(FinFunction.identity(1)).images == (1, 1, 0, 2)
    with pytest.raises(ValueError):
        FinFunction(1, 1, (1,))


def test_relation_composition_and_converse():
    r = FinRelation(2, 2, frozenset({(0, 1), (1, 1)}))
    s = FinRelation(2, 1, frozenset({(1, 0)}))
    assert r.then(s).pairs == frozenset({(0, 0), (1, 0)})
    assert r.converse().converse() == r
    assert r.is_function() and not r.converse().is_function()
    assert FinFunction(2, 2, (1, 1)).graph().is_function()


def test_span_pullback_counts_paths():
    s = FinSpan.from_legs(1, 1, (0, 0), (0, 0))
    assert s.matrix() == Matrix(1, 1, ((2,),), "nat")
    assert s.then(s).apex == 4


def test_cospan_and_corelation():
    c = FinCospan.identity(2)
    assert c.then(c) == c
    assert c.corelation() == Corelation.identity(2)


def test_matrix_semirings():
    m = Matrix(2, 2, ((1, 1), (0, 1)), "bool")
    assert m.then(m) == m.then(m).then(Matrix.identity(2, "bool"))
    q = Matrix(1, 1, ((Fraction(1, 2),),), "rational")
    assert q.then(q) == Matrix(1, 1, ((Fraction(1, 4),),), "rational")
    assert Matrix.identity(2).times(Matrix.identity(3)) == Matrix.identity(6)


@pytest.mark.parametrize("name", sorted(MODELS))
def test_identity_and_symmetry(name):
    m = model_by_name(name, {"x": 2})
    swap = m.eval(Seq(Sym("x", "x"), Sym("x", "x")))
    assert swap == m.eval(Id(("x", "x")))


def test_unassigned_generator():
    f = Gen(OperationDecl("f", X, X))
    with pytest.raises(UnassignedGenerator):
        model_by_name("finrel-sum").eval(f)


def test_encodings_denote_their_source():
    rng = random.Random(2)
    fs, rel, span, cospan = (model_by_name(n) for n in ("finset-sum", "finrel-sum", "span-sum", "cospan"))
    for _ in range(30):
        m, n = rng.randint(0, 3), rng.randint(1, 3)
        f = FinFunction(m, n, tuple(rng.randrange(n) for _ in range(m)))
        assert fs.eval(fn_to_diagram(f)) == f
        r = FinRelation(m, n, frozenset(p for p in ((i, j) for i in range(m) for j in range(n)) if rng.random() < 0.4))
        assert rel.eval(rel_to_diagram(r)) == r
        apex = rng.randint(0, 3) if m else 0
        s = FinSpan.from_legs(m, n, [rng.randrange(m) for _ in range(apex)], [rng.randrange(n) for _ in range(apex)])
        assert span.eval(span_to_diagram(s)) == s
        k = rng.randint(1, 3)
        c = FinCospan(m, n, k, tuple(rng.randrange(k) for _ in range(m)), tuple(rng.randrange(k) for _ in range(n)))
        assert cospan.eval(cospan_to_diagram(c)) == c


def test_trace_of_symmetry_is_identity():
    m = model_finrel_product({"x": 3})
    assert m.eval(trace_via_compact(Sym("x", "x"), "x")) == m.eval(Id(X))


def test_no_cloning_in_kronecker_matrices():
    v = OperationDecl("v", (), X)
    m = model_matrix("rational", "kronecker", {"x": 2}, {"v": Matrix(2, 1, ((1,), (1,)), "rational")})
    assert m.eval(Seq(Gen(v), op("comult"))) != m.eval(Par(Gen(v), Gen(v)))


@pytest.mark.parametrize("name", ["finset-sum", "cospan", "matrix-nat"])
def test_functor_check_small(name):
    assert functor_check(model_by_name(name), samples=20).ok
