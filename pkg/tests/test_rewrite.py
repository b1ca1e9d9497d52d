import pytest

from sdc.errors import BoundaryMismatch, NoSuchMatch, NoSuchRule
from sdc.generators import enumerate_diagrams
from sdc.hypergraph import from_term, iso_check
from sdc.rewrite import (
    EQUAL,
    NOT_EQUAL,
    RewriteRule,
    apply_rewrite,
    decide_eq,
    find_matches,
    normal_key,
    normalize,
    replay_derivation,
    rewrite_once,
    rule_from_terms,
    spider_normal_form,
)
from sdc.syntax import Gen, Id, Par, Seq, Sym, declare_signature, structural_op
from sdc.theories import builtin_theory

X = ("x",)
mult, unit = Gen(structural_op("mult", "x")), Gen(structural_op("unit", "x"))
comult, counit = Gen(structural_op("comult", "x")), Gen(structural_op("counit", "x"))


def theory(name):
    return builtin_theory(name, declare_signature(["x"]))


def test_rule_boundaries_must_agree():
    with pytest.raises(BoundaryMismatch):
        rule_from_terms("bad", mult, Id(X))


def test_find_and_apply_unit_law():
    th = theory("monoid")
    host = from_term(Seq(Par(unit, Id(X)), mult))
    rule = th.rule("unl")
    sites = find_matches(th, rule, host)
    assert len(sites) == 1
    assert iso_check(apply_rewrite(th, sites[0], rule, host), from_term(Id(X)))


def test_no_such_match_and_rule():
    th = theory("monoid")
    with pytest.raises(NoSuchMatch):
        rewrite_once(th, th.rule("unl"), from_term(Id(X)))
    with pytest.raises(NoSuchRule):
        th.rule("nope")


def test_reversed_rule_name():
    r = rule_from_terms("r", Seq(Par(unit, Id(X)), mult), Id(X))
    assert r.reversed().name == "~r"
    assert r.reversed().reversed().name == "r"


def test_match_respects_interface():
    # the inner node of unit;mult is on the boundary here, so unl must not fire
    th = theory("monoid")
    host = from_term(Par(unit, Id(X)))
    assert find_matches(th, th.rule("unl"), host) == []


def test_normalize_associativity():
    th = theory("monoid")
    left = Seq(Par(mult, Id(X)), mult)
    right = Seq(Par(Id(X), mult), mult)
    a, _, capped_a = normalize(th, from_term(left))
    b, _, capped_b = normalize(th, from_term(right))
    assert not capped_a and not capped_b
    assert iso_check(a, b)


def test_commutativity_separates_theories():
    swapped = from_term(Seq(Sym("x", "x"), mult))
    assert decide_eq(theory("comm_monoid"), swapped, from_term(mult)) == EQUAL
    assert decide_eq(theory("monoid"), swapped, from_term(mult)) == NOT_EQUAL


def test_decide_eq_boundary_mismatch():
    with pytest.raises(BoundaryMismatch):
        decide_eq(theory("monoid"), from_term(mult), from_term(Id(X)))


def test_replay_with_reversed_steps():
    th = theory("comm_monoid")
    start = from_term(Seq(Par(unit, Id(X)), mult))
    end = replay_derivation(th, start, [("~com", 0), ("unr", 0)])
    assert iso_check(end, from_term(Id(X)))


def test_spider_normal_form_counts_loops():
    loop = from_term(Seq(comult, mult))
    (sp,) = spider_normal_form(loop)
    assert (sp.left_legs, sp.right_legs, sp.loops) == (1, 1, 1)
    (special,) = spider_normal_form(loop, special=True)
    assert special.loops == 0


def test_special_frobenius_removes_loops():
    th = theory("special_frobenius")
    assert decide_eq(th, from_term(Seq(comult, mult)), from_term(Id(X))) == EQUAL
    assert decide_eq(theory("frobenius"), from_term(Seq(comult, mult)), from_term(Id(X))) == NOT_EQUAL


def test_user_rule_via_with_rules():
    sig = declare_signature(["x"], [("f", ["x"], ["x"])])
    f = Gen(sig.op("f"))
    th = builtin_theory("structural", sig).with_rules([RewriteRule("idem", from_term(Seq(f, f)), from_term(f))])
    assert decide_eq(th, from_term(Seq(Seq(f, f), f)), from_term(f)) == EQUAL


def test_normal_key_memo_matches_plain():
    th = theory("special_frobenius")
    ops = [structural_op(k, "x") for k in ("comult", "counit", "mult", "unit")]
    memo = {}
    for _, g in enumerate_diagrams(ops, "x", 4, max_width=3, planar=True, connected=True):
        assert normal_key(th, g, memo=memo) == normal_key(th, g)
    assert memo
