import pytest

from sdc.errors import DuplicateName, NotPermutationTerm, TypeMismatch, UnknownSort
from sdc.syntax import (
    Empty,
    Gen,
    Id,
    Par,
    Permutation,
    Seq,
    Sym,
    check_term,
    declare_signature,
    format_term,
    id_word,
    perm_to_term,
    permutation_term,
    structural_op,
    sym_words,
    term_to_perm,
)


@pytest.fixture
def sig():
    return declare_signature(["x", "y"], [("c1", ["y"], ["x"]), ("c2", ["x"], ["x"]), ("d", ["x", "x"], ["y"])])


def test_types_compose(sig):
    c1, c2, d = (Gen(sig.op(n)) for n in ("c1", "c2", "d"))
    t = Seq(Par(c1, c2), d)
    assert (t.dom, t.cod) == (("y", "x"), ("y",))
    assert Par(Empty(), c2).dom == ("x",)


def test_ill_typed_seq_raises(sig):
    with pytest.raises(TypeMismatch):
        Seq(Gen(sig.op("c2")), Gen(sig.op("d")))


def test_signature_validation():
    with pytest.raises(DuplicateName):
        declare_signature(["x", "x"])
    with pytest.raises(UnknownSort):
        declare_signature(["x"], [("f", ["z"], ["x"])])
    with pytest.raises(DuplicateName):
        declare_signature(["x"], [("f", ["x"], ["x"]), ("f", [], ["x"])])


def test_check_term_rejects_foreign_ops(sig):
    other = declare_signature(["x"], [("c2", ["x"], ["x", "x"])])
    with pytest.raises(UnknownSort):
        check_term(sig, Gen(other.op("c2")))
    check_term(sig, Seq(Gen(sig.op("c1")), Gen(sig.op("c2"))))


def test_structural_op_shapes():
    assert structural_op("comult", "x").coarity == ("x", "x")
    assert structural_op("unit", "x").arity == ()
    assert structural_op("mult", "y").sort == "y"


def test_id_word_and_sym_words():
    assert id_word(()) == Empty()
    assert id_word(("x",)) == Id(("x",))
    s = sym_words(("x", "y"), ("y",))
    assert (s.dom, s.cod) == (("x", "y", "y"), ("y", "x", "y"))


@pytest.mark.parametrize("images", [(0,), (1, 0), (2, 0, 1), (3, 1, 0, 2)])
def test_permutation_roundtrip(images):
    p = Permutation(images)
    assert term_to_perm(perm_to_term(p, "x")) == p
    assert p.then(p.inverse()) == Permutation.identity(len(images))


def test_permutation_term_keeps_sorts():
    t = permutation_term((1, 0), ("x", "y"))
    assert t == Sym("x", "y")


def test_not_a_permutation(sig):
    with pytest.raises(NotPermutationTerm):
        term_to_perm(Gen(sig.op("c2")))
    with pytest.raises(ValueError):
        Permutation((0, 0))


def test_format_term(sig):
    t = Seq(Par(Gen(sig.op("c1")), Gen(sig.op("c2"))), Gen(sig.op("d")))
    assert format_term(t) == "c1 | c2 ; d"
    assert format_term(Par(Id(("x",)), Sym("x", "y"))) == "id(x) | sym(x,y)"
