"""Functor-law checks for models, and the trace built from cups and caps."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..errors import MissingCompactStructure
from ..hypergraph import from_term, to_term
from ..syntax import (
    Gen,
    Id,
    Par,
    Seq,
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
from .models import SemanticModel


def _bend(w: tuple, kind: str) -> Term:
    """Nested cups (or caps) on w: cup_w : I -> reversed(w)·w, cap_w : reversed(w)·w -> I."""
    t = None
    for x in w:
        inner = Gen(structural_op(kind, x))
        if t is None:
            t = inner
            continue
        outside = t.cod if kind == "cup" else t.dom
        half = len(outside) // 2
        middle = par_all([id_word(outside[:half]), inner, id_word(outside[half:])])
        t = Seq(t, middle) if kind == "cup" else Seq(middle, t)
    return t


def trace_via_compact(t: Term, traced, signature: Signature | None = None) -> Term:
    """Feed the leading output wires of t back into its leading inputs through cups and caps.

    `traced` is a sort or a word of sorts; the empty word returns t unchanged.
    """
    w = (traced,) if isinstance(traced, str) else tuple(traced)
    k = len(w)
    if tuple(t.dom[:k]) != w or tuple(t.cod[:k]) != w:
        raise MissingCompactStructure(f"term does not carry {'·'.join(w) or 'I'} first on both boundaries")
    if not w:
        return t
    for x in set(w):
        cup, cap = structural_op("cup", x), structural_op("cap", x)
        if signature is not None and not (signature.has_op(cup.name) and signature.has_op(cap.name)):
            raise MissingCompactStructure(f"no cup/cap for sort {x}")
    # the nesting puts w's last wire innermost, so the loops pair up in reverse
    back = tuple(reversed(w))
    a, b = t.dom[k:], t.cod[k:]
    return seq_all(
        [
            par_all([_bend(back, "cup"), id_word(a)]),
            par_all([id_word(back), t]),
            par_all([_bend(back, "cap"), id_word(b)]),
        ]
    )


@dataclass
class FunctorReport:
    checked: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, law: str, lhs, rhs, witness) -> None:
        self.checked[law] = self.checked.get(law, 0) + 1
        if lhs != rhs:
            self.failures.append((law, witness, str(lhs), str(rhs)))

    def __str__(self):
        lines = [f"{law}: {n} checked" for law, n in sorted(self.checked.items())]
        lines += [f"FAIL {law}: {w}" for law, w, _, _ in self.failures]
        return "\n".join(lines)


def _dom(sig, rng, width):
    return tuple(rng.choice(sig.objects) for _ in range(rng.randint(0, min(3, width))))


def default_signature(model: SemanticModel, sort: str = "x") -> Signature:
    kinds = [k for k in ("comult", "counit", "mult", "unit", "cup", "cap") if k in model.kinds]
    return declare_signature([sort], [structural_op(k, sort) for k in kinds])


def functor_check(
    model: SemanticModel, samples: int = 200, seed: int = 0, signature: Signature | None = None, layers: int = 4
) -> FunctorReport:
    """Compare evaluations of terms that any symmetric monoidal functor must identify."""
    from ..generators import random_term as _random_term

    sig = signature or default_signature(model)
    rng = random.Random(seed)
    # product carriers grow exponentially with the number of wires
    width = 3 if model.product else 5

    def random_term(sig, rng, layers, dom=None):
        return _random_term(sig, rng, layers, dom, max_width=width)

    report = FunctorReport()
    ev = model.eval
    for i in range(samples):
        a = random_term(sig, rng, layers, dom=_dom(sig, rng, width))
        b = random_term(sig, rng, layers, dom=a.cod)
        c = random_term(sig, rng, layers, dom=b.cod)
        d = random_term(sig, rng, layers, dom=_dom(sig, rng, width))
        e = random_term(sig, rng, layers, dom=d.cod)
        report.record("seq", ev(Seq(a, b)), model.compose(ev(a), ev(b)), i)
        report.record("par", ev(Par(a, d)), model.tensor(ev(a), ev(d)), i)
        report.record("seq_assoc", ev(Seq(Seq(a, b), c)), ev(Seq(a, Seq(b, c))), i)
        report.record("par_assoc", ev(Par(Par(a, b), d)), ev(Par(a, Par(b, d))), i)
        report.record("identity", ev(Seq(id_word(a.dom), Seq(a, id_word(a.cod)))), ev(a), i)
        report.record("interchange", ev(Seq(Par(a, d), Par(b, e))), ev(Par(Seq(a, b), Seq(d, e))), i)
        report.record(
            "naturality",
            ev(Seq(Par(a, d), sym_words(a.cod, d.cod))),
            ev(Seq(sym_words(a.dom, d.dom), Par(d, a))),
            i,
        )
        w = a.dom
        if len(w) >= 2:
            x, y = w[0], w[1]
            report.record("sym_involution", ev(Seq(Sym(x, y), Sym(y, x))), ev(id_word((x, y))), i)
        report.record("graph_roundtrip", ev(to_term(from_term(Seq(a, b)))), ev(Seq(a, b)), i)
    return report
