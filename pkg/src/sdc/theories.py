"""Built-in symmetric monoidal theories."""

from __future__ import annotations

from typing import Sequence

from .errors import UnknownTheory
from .hypergraph import from_term
from .rewrite import FROBENIUS, MONOGAMOUS, RewriteRule, Theory
from .syntax import (
    Empty,
    Gen,
    Id,
    OperationDecl,
    Signature,
    Sym,
    Term,
    declare_signature,
    id_word,
    par_all,
    seq_all,
    structural_op,
    sym_words,
)

DEFAULT_SORT = "x"


class _Sort:
    """Shorthand for the structural generators on one sort."""

    def __init__(self, x: str):
        self.x = x
        self.i = Id((x,))
        self.s = Sym(x, x)
        for kind in ("mult", "unit", "comult", "counit", "cup", "cap"):
            setattr(self, kind, Gen(structural_op(kind, x)))


def S(*ts):
    return seq_all(ts)


def P(*ts):
    return par_all(ts)


def comult_word(w: Sequence[str]) -> Term:
    """Copying a whole word: w -> w·w."""
    w = tuple(w)
    if not w:
        return Empty()
    x, v = w[0], w[1:]
    head = Gen(structural_op("comult", x))
    if not v:
        return head
    return S(P(head, comult_word(v)), P(Id((x,)), sym_words((x,), v), id_word(v)))


def counit_word(w: Sequence[str]) -> Term:
    return P(*[Gen(structural_op("counit", x)) for x in w])


def mult_word(w: Sequence[str]) -> Term:
    """Merging a whole word: w·w -> w."""
    w = tuple(w)
    if not w:
        return Empty()
    x, v = w[0], w[1:]
    head = Gen(structural_op("mult", x))
    if not v:
        return head
    return S(P(Id((x,)), sym_words(v, (x,)), id_word(v)), P(head, mult_word(v)))


def unit_word(w: Sequence[str]) -> Term:
    return P(*[Gen(structural_op("unit", x)) for x in w])


def _eq(name, lhs, rhs):
    return RewriteRule(name, from_term(lhs), from_term(rhs))


def _suffix(name, x, sorts):
    return name if len(sorts) == 1 else f"{name}_{x}"


def monoid_rules(x, sorts, commutative=False):
    o = _Sort(x)
    rules = [
        _eq(_suffix("as", x, sorts), S(P(o.mult, o.i), o.mult), S(P(o.i, o.mult), o.mult)),
        _eq(_suffix("unl", x, sorts), S(P(o.unit, o.i), o.mult), o.i),
        _eq(_suffix("unr", x, sorts), S(P(o.i, o.unit), o.mult), o.i),
    ]
    if commutative:
        rules.append(_eq(_suffix("com", x, sorts), S(o.s, o.mult), o.mult))
    return rules


def comonoid_rules(x, sorts, commutative=False):
    o = _Sort(x)
    rules = [
        _eq(_suffix("coas", x, sorts), S(o.comult, P(o.comult, o.i)), S(o.comult, P(o.i, o.comult))),
        _eq(_suffix("counl", x, sorts), S(o.comult, P(o.counit, o.i)), o.i),
        _eq(_suffix("counr", x, sorts), S(o.comult, P(o.i, o.counit)), o.i),
    ]
    if commutative:
        rules.append(_eq(_suffix("cocom", x, sorts), S(o.comult, o.s), o.comult))
    return rules


def bimonoid_rules(x, sorts):
    o = _Sort(x)
    return [
        _eq(
            _suffix("bialg", x, sorts),
            S(o.mult, o.comult),
            S(P(o.comult, o.comult), P(o.i, o.s, o.i), P(o.mult, o.mult)),
        ),
        _eq(_suffix("unit_copy", x, sorts), S(o.unit, o.comult), P(o.unit, o.unit)),
        _eq(_suffix("mult_del", x, sorts), S(o.mult, o.counit), P(o.counit, o.counit)),
        _eq(_suffix("unit_del", x, sorts), S(o.unit, o.counit), Empty()),
    ]


def _frob_left(o):
    return S(P(o.i, o.comult), P(o.mult, o.i))


def _frob_right(o):
    return S(P(o.comult, o.i), P(o.i, o.mult))


def frobenius_rules(x, sorts, middle=False):
    o = _Sort(x)
    rules = [_eq(_suffix("frob", x, sorts), _frob_left(o), _frob_right(o))]
    if middle:
        rules.append(_eq(_suffix("frob_m", x, sorts), S(o.mult, o.comult), _frob_left(o)))
    return rules


def frobenius_lemmas(x, sorts):
    """Derived equations used to orient normalization.

    Both sliding forms equal the middle form, and a loop (comult;mult) slides
    through the legs of mult and comult because it is a map of bimodules. All
    of them follow from frob, (co)associativity and (co)unitality.
    """
    o = _Sort(x)
    middle = S(o.mult, o.comult)
    loop = S(o.comult, o.mult)
    return [
        _eq(_suffix("frob_ml", x, sorts), _frob_left(o), middle),
        _eq(_suffix("frob_mr", x, sorts), _frob_right(o), middle),
        _eq(_suffix("loop_ml", x, sorts), S(P(loop, o.i), o.mult), S(o.mult, loop)),
        _eq(_suffix("loop_mr", x, sorts), S(P(o.i, loop), o.mult), S(o.mult, loop)),
        _eq(_suffix("loop_cl", x, sorts), S(o.comult, P(loop, o.i)), S(loop, o.comult)),
        _eq(_suffix("loop_cr", x, sorts), S(o.comult, P(o.i, loop)), S(loop, o.comult)),
    ]


def special_rule(x, sorts):
    o = _Sort(x)
    return [_eq(_suffix("special", x, sorts), S(o.comult, o.mult), o.i)]


def bone_rule(x, sorts):
    o = _Sort(x)
    return [_eq(_suffix("bone", x, sorts), S(o.unit, o.counit), Empty())]


def self_dual_rules(x, sorts):
    o = _Sort(x)
    return [
        _eq(_suffix("yank_s", x, sorts), S(P(o.i, o.cup), P(o.cap, o.i)), o.i),
        _eq(_suffix("yank_z", x, sorts), S(P(o.cup, o.i), P(o.i, o.cap)), o.i),
    ]


def dual_sort(x: str) -> str:
    return f"{x}_star"


def compact_generators(x: str) -> list:
    xs = dual_sort(x)
    return [
        OperationDecl(f"dcup_{x}", (), (xs, x), "dcup"),
        OperationDecl(f"dcap_{x}", (x, xs), (), "dcap"),
    ]


def compact_rules(x, sorts):
    xs = dual_sort(x)
    cup, cap = (Gen(o) for o in compact_generators(x))
    ix, ixs = Id((x,)), Id((xs,))
    return [
        _eq(_suffix("yank_s", x, sorts), S(P(ix, cup), P(cap, ix)), ix),
        _eq(_suffix("yank_z", x, sorts), S(P(cup, ixs), P(ixs, cap)), ixs),
    ]


def _scheme_name(op: OperationDecl, sorts) -> str:
    return op.kind if op.kind and len(sorts) == 1 else op.name


def dup_del_rules(op: OperationDecl, sorts=()):
    d = Gen(op)
    n = _scheme_name(op, sorts)
    return [
        _eq(f"dup_{n}", S(d, comult_word(op.coarity)), S(comult_word(op.arity), P(d, d))),
        _eq(f"del_{n}", S(d, counit_word(op.coarity)), counit_word(op.arity)),
    ]


def codup_codel_rules(op: OperationDecl, sorts=()):
    d = Gen(op)
    n = _scheme_name(op, sorts)
    return [
        _eq(f"codup_{n}", S(P(d, d), mult_word(op.coarity)), S(mult_word(op.arity), d)),
        _eq(f"codel_{n}", S(unit_word(op.arity), d), unit_word(op.coarity)),
    ]


def _frob_ops(sorts):
    return [structural_op(k, x) for x in sorts for k in ("comult", "counit", "mult", "unit")]


def _monoid_ops(sorts):
    return [structural_op(k, x) for x in sorts for k in ("mult", "unit")]


def _comonoid_ops(sorts):
    return [structural_op(k, x) for x in sorts for k in ("comult", "counit")]


FORWARD = "forward"
BACKWARD = "backward"

THEORY_NAMES = (
    "structural",
    "monoid",
    "comm_monoid",
    "comonoid",
    "cocomm_comonoid",
    "bimonoid",
    "idempotent_bimonoid",
    "frobenius",
    "special_frobenius",
    "scFrob",
    "extra_special_frobenius",
    "compact_closed",
    "self_dual_compact",
    "cd",
    "cartesian",
    "cocartesian",
    "biproduct",
    "hypergraph_cat",
)

ALIASES = {"extra_special": "extra_special_frobenius", "scfrob": "scFrob"}


def _orient(rules, direction=FORWARD, skip=()):
    return [(r.name, direction) for r in rules if not any(r.name.startswith(s) for s in skip)]


class _Parts:
    def __init__(self):
        self.extra = []
        self.rules = []
        self.lemmas = []
        self.orientation = []
        self.ac = []
        self.countermodels = []
        self.mode = MONOGAMOUS
        self.special = False
        self.dup = False
        self.codup = False
        self.objects = []

    def add(self, rules, direction=FORWARD, skip=()):
        self.rules += rules
        if direction:
            self.orientation += _orient(rules, direction, skip)


def _build(name: str, sig: Signature, parts: _Parts):
    sorts = list(sig.objects)
    if name == "structural":
        return
    if name in ("monoid", "comm_monoid"):
        comm = name == "comm_monoid"
        parts.extra += _monoid_ops(sorts)
        for x in sorts:
            parts.add(monoid_rules(x, sorts, comm), skip=("com",))
            if comm:
                parts.ac.append(("mult", x))
        parts.countermodels.append("finset_sum" if comm else "word_monoid")
    elif name in ("comonoid", "cocomm_comonoid"):
        comm = name == "cocomm_comonoid"
        parts.extra += _comonoid_ops(sorts)
        for x in sorts:
            parts.add(comonoid_rules(x, sorts, comm), skip=("cocom",))
            if comm:
                parts.ac.append(("comult", x))
        parts.countermodels.append("finrel_sum_comonoid" if comm else "word_comonoid")
    elif name in ("bimonoid", "idempotent_bimonoid"):
        parts.extra += _frob_ops(sorts)
        for x in sorts:
            parts.add(monoid_rules(x, sorts))
            parts.add(comonoid_rules(x, sorts))
            parts.add(bimonoid_rules(x, sorts))
            if name == "idempotent_bimonoid":
                o = _Sort(x)
                parts.add([_eq(_suffix("idem", x, sorts), S(o.comult, o.mult), o.i)])
        parts.countermodels.append("span_sum" if name == "bimonoid" else "finrel_sum")
    elif name in ("frobenius", "special_frobenius"):
        parts.extra += _frob_ops(sorts)
        for x in sorts:
            parts.add(monoid_rules(x, sorts))
            parts.add(comonoid_rules(x, sorts))
            parts.add(frobenius_rules(x, sorts), direction=None)
            lemmas = frobenius_lemmas(x, sorts)
            parts.lemmas += lemmas
            parts.orientation += _orient(lemmas)
            if name == "special_frobenius":
                parts.add(special_rule(x, sorts))
        parts.special = name == "special_frobenius"
        parts.countermodels.append("scaled_frobenius" if name == "frobenius" else "finrel_product")
    elif name in ("scFrob", "hypergraph_cat", "extra_special_frobenius"):
        parts.extra += _frob_ops(sorts)
        parts.mode = FROBENIUS
        parts.special = True
        for x in sorts:
            parts.add(comonoid_rules(x, sorts, True), direction=None)
            parts.add(monoid_rules(x, sorts, True), direction=None)
            parts.add(frobenius_rules(x, sorts, middle=True), direction=None)
            parts.add(special_rule(x, sorts), direction=None)
            if name == "extra_special_frobenius":
                parts.add(bone_rule(x, sorts))
        parts.countermodels.append("corelation" if name == "extra_special_frobenius" else "cospan")
    elif name == "compact_closed":
        for x in sorts:
            parts.objects.append(dual_sort(x))
            parts.extra += compact_generators(x)
            parts.add(compact_rules(x, sorts))
        parts.countermodels.append("finrel_product")
    elif name == "self_dual_compact":
        for x in sorts:
            parts.extra += [structural_op("cup", x), structural_op("cap", x)]
            parts.add(self_dual_rules(x, sorts))
        parts.countermodels.append("finrel_product")
    elif name in ("cd", "cartesian", "biproduct"):
        parts.extra += _comonoid_ops(sorts)
        for x in sorts:
            parts.add(comonoid_rules(x, sorts, True), skip=("cocom",))
            parts.ac.append(("comult", x))
        if name != "cd":
            parts.dup = True
        parts.countermodels.append("finrel_product" if name != "biproduct" else "span_sum")
        if name == "biproduct":
            _build("cocartesian", sig, parts)
    elif name == "cocartesian":
        parts.extra += _monoid_ops(sorts)
        for x in sorts:
            parts.add(monoid_rules(x, sorts, True), skip=("com",))
            parts.ac.append(("mult", x))
        parts.codup = True
        parts.countermodels.append("finset_sum")
    else:
        raise UnknownTheory(f"unknown theory {name!r}")


def builtin_theory(name: str, signature: Signature | None = None) -> Theory:
    """A named builtin theory, or a sum of them written `a + b`."""
    names = [ALIASES.get(n.strip(), n.strip()) for n in name.split("+")]
    sig = signature or declare_signature([DEFAULT_SORT])
    parts = _Parts()
    for n in names:
        if n not in THEORY_NAMES:
            raise UnknownTheory(f"unknown theory {n!r}")
        _build(n, sig, parts)
    extra = []
    for o in parts.extra:
        if o not in extra and not sig.has_op(o.name):
            extra.append(o)
    base = sig.extend((), parts.objects)
    ambient = base.extend(extra)
    # schemes are instantiated over every generator other than the scheme's own structure
    if parts.dup:
        own = {o.name for o in _comonoid_ops(sig.objects)}
        for op in ambient.operations:
            if op.name not in own:
                rules = dup_del_rules(op, sig.objects)
                parts.rules += rules
                structural_monoid = op.kind in ("mult", "unit")
                parts.orientation += [
                    (rules[0].name, FORWARD if structural_monoid else BACKWARD),
                    (rules[1].name, FORWARD),
                ]
    if parts.codup:
        own = {o.name for o in _monoid_ops(sig.objects)}
        for op in ambient.operations:
            if op.name not in own:
                rules = codup_codel_rules(op, sig.objects)
                parts.rules += rules
                structural_comonoid = op.kind in ("comult", "counit")
                parts.orientation += [
                    (rules[0].name, BACKWARD if structural_comonoid else FORWARD),
                    (rules[1].name, FORWARD),
                ]
    seen, rules = set(), []
    for r in parts.rules:
        if r.name not in seen:
            seen.add(r.name)
            rules.append(r)
    orientation = list(dict.fromkeys(parts.orientation))
    if not parts.countermodels:
        # user rules added later can still be refuted by relations
        parts.countermodels.append("finrel_sum")
    return Theory(
        "+".join(names),
        base,
        tuple(extra),
        tuple(rules),
        parts.mode,
        tuple(orientation),
        tuple(parts.lemmas),
        tuple(dict.fromkeys(parts.ac)),
        tuple(dict.fromkeys(parts.countermodels)),
        parts.special,
    )
