"""Acceptance criteria 1-11, each printed as one PASS/FAIL line.

Run standalone with `python3 tests/test_acceptance.py`, or through pytest.
"""

from __future__ import annotations

import collections
import itertools
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from golden_cases import CASES, WORKED, check_case, run_cli  # noqa: E402

from sdc.generators import SMC_LAWS, enumerate_diagrams, perturb, random_hypergraph, random_term  # noqa: E402
from sdc.hypergraph import (  # noqa: E402
    Hyperedge,
    OpenHypergraph,
    canonical_form,
    from_term,
    from_term_frob,
    is_acyclic,
    is_monogamous,
    iso_check,
    to_term,
    to_term_frob,
)
from sdc.rewrite import EQUAL, NOT_EQUAL, decide_eq, normal_key, spider_normal_form  # noqa: E402
from sdc.semantics.laws import functor_check, trace_via_compact  # noqa: E402
from sdc.semantics.models import MODELS, model_by_name, model_finrel_product, model_matrix  # noqa: E402
from sdc.semantics.morphisms import FinRelation, Matrix  # noqa: E402
from sdc.syntax import (  # noqa: E402
    Gen,
    Id,
    OperationDecl,
    Par,
    Seq,
    Sym,
    declare_signature,
    id_word,
    structural_op,
)
from sdc.theories import builtin_theory  # noqa: E402

FROB = ("comult", "counit", "mult", "unit")


@dataclass
class Outcome:
    ok: bool = True
    notes: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.ok = False
        if len(self.failures) < 5:
            self.failures.append(msg)


def paper_signature():
    # c1 : y -> x, c2 : x -> x, d : x x -> y, with a state and an effect added
    return declare_signature(
        ["x", "y"],
        [
            ("c1", ["y"], ["x"]),
            ("c2", ["x"], ["x"]),
            ("d", ["x", "x"], ["y"]),
            ("e", ["x"], ["x", "y"]),
            ("s", [], ["x"]),
            ("k", ["y"], []),
        ],
    )


def random_terms(n: int, seed: int):
    sig = paper_signature()
    rng = random.Random(seed)
    return [random_term(sig, rng, layers=rng.randint(1, 7), max_width=5) for _ in range(n)]


# --- criteria ------------------------------------------------------------------------------


def criterion_1() -> Outcome:
    """Structural absorption: a random SMC law instance never changes the hypergraph."""
    out = Outcome()
    rng = random.Random(1)
    used = collections.Counter()
    terms = random_terms(500, seed=11)
    for t in terms:
        # a few earlier law steps create the shapes the inverse laws need
        for _ in range(rng.randint(0, 2)):
            t = perturb(t, rng)[1]
        law, p = perturb(t, rng)
        used[law] += 1
        if (p.dom, p.cod) != (t.dom, t.cod):
            out.fail(f"{law} changed the type")
        elif not iso_check(from_term(t), from_term(p)):
            out.fail(f"{law} changed the graph")
    missing = set(SMC_LAWS) - set(used)
    if missing:
        out.fail(f"laws never exercised: {sorted(missing)}")
    out.notes.append(f"{len(terms)} pairs, {len(used)}/{len(SMC_LAWS)} laws exercised")
    return out


def monogamy_counterexamples() -> dict:
    f = OperationDecl("f", ("x",), ("x",))
    x3 = ("x", "x", "x")
    shared_output = OpenHypergraph(x3 + ("x",), (Hyperedge(f, (0,), (1,)), Hyperedge(f, (1,), (2,)), Hyperedge(f, (1,), (3,))), (0,), (2, 3))
    no_input = OpenHypergraph(("x", "x"), (Hyperedge(f, (0,), (1,)),), (), (1,))
    twice_left = OpenHypergraph(("x", "x"), (Hyperedge(f, (0,), (1,)),), (0, 0), (1,))
    return {
        "out_degree": (shared_output, 1),
        "in_degree": (no_input, 0),
        "left_not_injective": (twice_left, 0),
    }


def criterion_2() -> Outcome:
    """Every term image is monogamous; the three non-monogamous shapes fail for the right reason."""
    out = Outcome()
    terms = random_terms(500, seed=12)
    for t in terms:
        if not is_monogamous(from_term(t)):
            out.fail("a term image is not monogamous")
    for reason, (g, node) in monogamy_counterexamples().items():
        rep = is_monogamous(g)
        if rep.ok or rep.reason != reason or rep.node != node:
            out.fail(f"expected {reason} at node {node}, got {rep}")
    out.notes.append(f"{len(terms)} images, 3 counterexamples")
    return out


def criterion_3() -> Outcome:
    """Round trips through terms: monogamous graphs via to_term, any graph via to_term_frob."""
    out = Outcome()
    for t in random_terms(500, seed=13):
        g = from_term(t)
        if not iso_check(from_term(to_term(g)), g):
            out.fail("to_term round trip")
    rng = random.Random(3)
    sig = paper_signature()
    cyclic = odd = 0
    for _ in range(200):
        g = random_hypergraph(sig.operations, rng, max_nodes=8)
        cyclic += not is_acyclic(g)
        odd += not is_monogamous(g)
        if not iso_check(from_term_frob(to_term_frob(g)), g):
            out.fail("to_term_frob round trip")
    if not cyclic or not odd:
        out.fail("random graphs missed cyclic or non-monogamous shapes")
    out.notes.append(f"500 terms, 200 graphs ({cyclic} cyclic, {odd} non-monogamous)")
    return out


def _frob_ops():
    return [structural_op(k, "x") for k in FROB]


def criterion_4() -> Outcome:
    """scFrob equality agrees with iso of from_term_frob images, exhaustively."""
    out = Outcome()
    th = builtin_theory("scFrob", declare_signature(["x"]))
    diagrams = enumerate_diagrams(_frob_ops(), "x", 5, max_width=4, max_boundary=4)
    classes = collections.defaultdict(lambda: collections.defaultdict(list))
    for t, g in diagrams:
        classes[(t.dom, t.cod)][canonical_form(from_term_frob(t))].append((t, g))
    pairs = 0
    for boundary, by_graph in classes.items():
        reps = []
        for members in by_graph.values():
            (t0, g0), rest = members[0], members[1:]
            reps.append((t0, g0))
            for t, g in rest:
                pairs += 1
                same = iso_check(from_term_frob(t0), from_term_frob(t))
                if not same or decide_eq(th, g0, g) != EQUAL:
                    out.fail(f"within a class at {boundary}")
        for (ta, ga), (tb, gb) in itertools.combinations(reps, 2):
            pairs += 1
            if iso_check(from_term_frob(ta), from_term_frob(tb)) or decide_eq(th, ga, gb) != NOT_EQUAL:
                out.fail(f"across classes at {boundary}")
    out.notes.append(f"{len(diagrams)} diagrams (<=5 generators, <=4 wires), {pairs} pairs")
    return out


def criterion_5() -> Outcome:
    """Spider theorem on connected planar Frobenius composites."""
    out = Outcome()
    diagrams = enumerate_diagrams(_frob_ops(), "x", 6, max_width=4, planar=True, connected=True)
    notes = []
    for name in ("special_frobenius", "frobenius"):
        th = builtin_theory(name, declare_signature(["x"]))
        classes = collections.defaultdict(dict)
        memo = {}
        for _, g in diagrams:
            sp = spider_normal_form(g, special=th.special)[0]
            key = normal_key(th, g, memo=memo)
            classes[(sp.left_legs, sp.right_legs, sp.loops)].setdefault(key, g)
        for spider, by_key in classes.items():
            graphs = list(by_key.values())
            # distinct normal forms within a spider class must still be provably equal
            for g in graphs[1:]:
                if decide_eq(th, graphs[0], g) != EQUAL:
                    out.fail(f"{name}: {spider} not identified")
        reps = {s: next(iter(v.values())) for s, v in classes.items()}
        for a, b in itertools.combinations(reps, 2):
            if a[:2] == b[:2] and decide_eq(th, reps[a], reps[b]) != NOT_EQUAL:
                out.fail(f"{name}: {a} and {b} not separated")
        notes.append(f"{name} {len(classes)} spiders")
    out.notes.append(f"{len(diagrams)} diagrams (<=6 generators); " + ", ".join(notes))
    return out


def completeness_oracle(theory: str, model: str, kinds, gens: int, width: int, boundary: int, out: Outcome):
    """Normal forms and model values must induce the same partition of the enumerated diagrams.

    A value class with several normal forms falls back to decide_eq. Pairs
    from different value classes all go through decide_eq, or a seeded
    sample of CROSS_SAMPLE of them when there are more than CROSS_LIMIT.
    """
    th = builtin_theory(theory, declare_signature(["x"]))
    m = model_by_name(model)
    ops = [structural_op(k, "x") for k in kinds]
    diagrams = enumerate_diagrams(ops, "x", gens, max_width=width, max_boundary=boundary)
    value_of, rep_of, memo = {}, {}, {}
    for t, g in diagrams:
        value = (t.dom, t.cod, m.eval(t))
        key, capped = normal_key(th, g, memo=memo)
        if capped:
            out.fail(f"{theory}: normalization capped")
        if key in value_of and value_of[key] != value:
            out.fail(f"{theory}: one normal form, two values")
        value_of[key] = value
        if value not in rep_of:
            rep_of[value] = (g, key)
        elif rep_of[value][1] != key and decide_eq(th, rep_of[value][0], g) != EQUAL:
            out.fail(f"{theory}: equal values, not proved equal")
    by_boundary = collections.defaultdict(list)
    for value, (g, _) in rep_of.items():
        by_boundary[value[:2]].append(g)
    cross = [p for gs in by_boundary.values() for p in itertools.combinations(gs, 2)]
    if len(cross) > CROSS_LIMIT:
        cross = random.Random(6).sample(cross, CROSS_SAMPLE)
        checked = f"{len(cross)} sampled cross pairs"
    else:
        checked = f"all {len(cross)} cross pairs"
    for a, b in cross:
        if decide_eq(th, a, b) != NOT_EQUAL:
            out.fail(f"{theory}: distinct values not refuted")
    out.notes.append(f"{theory}: {len(diagrams)} diagrams, {len(rep_of)} values, {checked}")


CROSS_LIMIT = 40_000
CROSS_SAMPLE = 20_000


def criterion_6() -> Outcome:
    out = Outcome()
    completeness_oracle("comm_monoid", "finset-sum", ("mult", "unit"), 6, 4, 8, out)
    completeness_oracle("biproduct", "span-sum", FROB, 4, 3, 6, out)
    completeness_oracle("scFrob", "cospan", FROB, 5, 4, 4, out)
    return out


def criterion_7() -> Outcome:
    out = Outcome()
    for name, argv, code in CASES:
        if name in WORKED:
            for problem in check_case(name, argv, code):
                out.fail(problem)
    out.notes.append(f"{len(WORKED)} golden files")
    return out


REPLAYS = [
    ("monoid_unit.sdc", "lhs", "wire"),
    ("frobenius_middle.sdc", "middle", "sliding"),
    ("yanking.sdc", "snake", "wire"),
    ("cartesian_compact.sdc", "cup_only", "cup_split"),
    ("cartesian_compact.sdc", "wire", "cut"),
]


def criterion_8() -> Outcome:
    out = Outcome()
    slowest = 0.0
    for path, script, target in REPLAYS:
        start = time.perf_counter()
        code, text, err = run_cli(["replay", path, "--script", script, "--target", target])
        took = time.perf_counter() - start
        slowest = max(slowest, took)
        if code != 0 or not text.endswith(f"reached {target}\n"):
            out.fail(f"{path}:{script} -> {target}: exit {code} {err.strip()}")
        if took >= 1.0:
            out.fail(f"{path}:{script} took {took:.2f}s")
    # left unitality from commutativity and right unitality alone, found by search
    th = builtin_theory("comm_monoid", declare_signature(["x"])).with_rules(drop=["unl"])
    lhs = Seq(Par(Gen(structural_op("unit", "x")), Id(("x",))), Gen(structural_op("mult", "x")))
    if decide_eq(th, from_term(lhs), from_term(Id(("x",))), budget=10) != EQUAL:
        out.fail("derived left unitality not found within budget 10")
    out.notes.append(f"{len(REPLAYS)} replays, slowest {slowest:.2f}s")
    return out


def _random_relation(rng, m: int, n: int) -> FinRelation:
    return FinRelation(m, n, frozenset(p for p in itertools.product(range(m), range(n)) if rng.random() < 0.5))


TRACE_OPS = {
    "f": (("x", "a"), ("x", "b")),
    "f2": (("x", "y", "a"), ("x", "y", "b")),
    "g": (("c",), ("d",)),
    "h": (("c",), ("a",)),
    "k": (("b",), ("d",)),
    "fs": (("y", "a"), ("x", "b")),
    "gs": (("x",), ("y",)),
}


def _op(name):
    return OperationDecl(name, *TRACE_OPS[name])


def traced_axioms() -> dict:
    f, f2, g, h, k, fs, gs = (Gen(_op(n)) for n in TRACE_OPS)
    tr = trace_via_compact
    ix = Id(("x",))
    swap_in = Par(Sym("y", "x"), Id(("a",)))
    swap_out = Par(Sym("x", "y"), Id(("b",)))
    return {
        "vanishing_unit": (tr(f, ()), f),
        "vanishing_tensor": (tr(f2, ("x", "y")), tr(tr(Seq(Seq(swap_in, f2), swap_out), "y"), "x")),
        "superposing": (Par(tr(f, "x"), g), tr(Par(f, g), "x")),
        "yanking": (tr(Sym("x", "x"), "x"), ix),
        "tightening_left": (tr(Seq(Par(ix, h), f), "x"), Seq(h, tr(f, "x"))),
        "tightening_right": (tr(Seq(f, Par(ix, k)), "x"), Seq(tr(f, "x"), k)),
        "sliding": (tr(Seq(fs, Par(gs, Id(("b",)))), "y"), tr(Seq(Par(gs, Id(("a",))), fs), "x")),
    }


def criterion_9() -> Outcome:
    out = Outcome()
    rng = random.Random(9)
    axioms = traced_axioms()
    for name, (lhs, rhs) in axioms.items():
        for _ in range(200):
            sizes = {s: rng.randint(1, 3) for s in "xyabcd"}
            model = model_finrel_product(sizes)
            assign = {}
            for op in TRACE_OPS:
                dom, cod = TRACE_OPS[op]
                assign[op] = _random_relation(rng, model.word_size(dom), model.word_size(cod))
            model = model.with_assignment(assign)
            if model.eval(lhs) != model.eval(rhs):
                out.fail(f"{name} fails at sizes {sizes}")
                break
    out.notes.append(f"{len(axioms)} axiom forms x 200 assignments")
    return out


def criterion_10() -> Outcome:
    out = Outcome()
    v = OperationDecl("v", (), ("x",))
    comult = Gen(structural_op("comult", "x"))
    model = model_matrix("rational", "kronecker", {"x": 2}, {"v": Matrix(2, 1, ((1,), (1,)), "rational")})
    copied = model.eval(Seq(Gen(v), comult))
    pair = model.eval(Par(Gen(v), Gen(v)))
    # e0 (x) e0 + e1 (x) e1 against (e0 + e1) (x) (e0 + e1)
    if copied != Matrix(4, 1, ((1,), (0,), (0,), (1,)), "rational"):
        out.fail(f"v;comult = {copied}")
    if pair != Matrix(4, 1, ((1,), (1,), (1,), (1,)), "rational"):
        out.fail(f"v|v = {pair}")
    if copied == pair:
        out.fail("the sum of two basis states was copied")
    for basis in (((1,), (0,)), ((0,), (1,))):
        m = model.with_assignment({"v": Matrix(2, 1, basis, "rational")})
        if m.eval(Seq(Gen(v), comult)) != m.eval(Par(Gen(v), Gen(v))):
            out.fail("a basis state is not copied")
    out.notes.append("v;comult != v|v for v = e0 + e1")
    return out


def criterion_11() -> Outcome:
    out = Outcome()
    for name in MODELS:
        report = functor_check(model_by_name(name), samples=200, seed=11)
        if not report.ok:
            out.fail(f"{name}: {report.failures[0][0]}")
    out.notes.append(f"{len(MODELS)} models x 200 samples")
    return out


CRITERIA = {
    1: ("structural absorption", criterion_1, 10),
    2: ("monogamy", criterion_2, 1),
    3: ("round trips", criterion_3, 30),
    4: ("scFrob correspondence", criterion_4, 60),
    5: ("spider theorem", criterion_5, 60),
    6: ("completeness oracles", criterion_6, 300),
    7: ("worked examples", criterion_7, 5),
    8: ("derivation replays", criterion_8, 5),
    9: ("traced axioms", criterion_9, 30),
    10: ("no-cloning", criterion_10, 1),
    11: ("functor laws", criterion_11, 60),
}


def run_criterion(n: int) -> tuple:
    title, fn, limit = CRITERIA[n]
    start = time.perf_counter()
    outcome = fn()
    took = time.perf_counter() - start
    if took >= limit:
        outcome.fail(f"took {took:.1f}s, limit {limit}s")
    status = "PASS" if outcome.ok else "FAIL"
    line = f"criterion {n:>2} {title}: {status} ({'; '.join(outcome.notes)}; {took:.1f}s < {limit}s)"
    for msg in outcome.failures:
        line += f"\n    {msg}"
    return outcome.ok, line


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, capsys):
    ok, line = run_criterion(n)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(n) for n in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
