"""Countermodels: semantic witnesses that two diagrams are not equal in a theory."""

from __future__ import annotations

import random
from typing import Iterator

from ..errors import DiagramError
from ..hypergraph import OpenHypergraph, to_term, to_term_frob
from ..syntax import Term
from .models import (
    CorelationSum,
    CospanSum,
    FinRelProduct,
    FinRelSum,
    FinSetSum,
    MatrixModel,
    SemanticModel,
    SpanSum,
)
from .morphisms import Corelation, FinCospan, FinFunction, FinRelation, FinSpan, Matrix


def word_monoid(alphabet: int = 2, max_len: int = 2) -> tuple:
    """Words up to max_len under concatenation truncated to max_len: (size, mult, unit)."""
    words = [()]
    for n in range(1, max_len + 1):
        words += [w for w in _words(alphabet, n)]
    index = {w: i for i, w in enumerate(words)}
    k = len(words)
    images = tuple(index[(u + v)[:max_len]] for u in words for v in words)
    return k, FinFunction(k * k, k, images), FinFunction(1, k, (index[()],))


def _words(alphabet, n):
    if n == 0:
        yield ()
        return
    for w in _words(alphabet, n - 1):
        for a in range(alphabet):
            yield w + (a,)


def _random_function(rng, m, n):
    if n == 0 and m > 0:
        return None
    return FinFunction(m, n, tuple(rng.randrange(n) for _ in range(m)))


def _random_relation(rng, m, n, density=0.5):
    return FinRelation(m, n, frozenset((a, b) for a in range(m) for b in range(n) if rng.random() < density))


def _random_span(rng, m, n):
    if not m or not n:
        return FinSpan(m, n, ())
    return FinSpan(m, n, tuple((rng.randrange(m), rng.randrange(n)) for _ in range(rng.randint(0, 3))))


def _random_cospan(rng, m, n):
    apex = rng.randint(1, 3)
    return FinCospan(m, n, apex, tuple(rng.randrange(apex) for _ in range(m)), tuple(rng.randrange(apex) for _ in range(n)))


def _random_matrix(rng, m, n):
    return Matrix(n, m, [[rng.randint(0, 2) for _ in range(m)] for _ in range(n)], "rational")


def _user_ops(theory, model: SemanticModel):
    return [op for op in theory.signature.operations if op.kind is None or op.kind not in model.kinds]


def _assign(theory, model: SemanticModel, rng, make) -> SemanticModel | None:
    if not _user_ops(theory, model):
        return model
    assign = {}
    for op in _user_ops(theory, model):
        m, n = model.word_size(op.arity), model.word_size(op.coarity)
        f = make(rng, m, n)
        if f is None:
            return None
        assign[op.name] = f
    return model.with_assignment(assign)


def _instances(name: str, theory, rng: random.Random, trials: int) -> Iterator[SemanticModel]:
    sorts = list(theory.signature.objects)
    if name in ("word_monoid", "word_comonoid"):
        k, mult, unit = word_monoid()
        structure = {}
        for x in sorts:
            if name == "word_monoid":
                structure[f"mult_{x}"] = mult.graph()
                structure[f"unit_{x}"] = unit.graph()
            else:
                structure[f"comult_{x}"] = mult.graph().converse()
                structure[f"counit_{x}"] = unit.graph().converse()
        base = FinRelProduct({x: k for x in sorts}, structure)
        for _ in range(trials):
            model = _assign(theory, base, rng, _random_relation)
            if model is not None:
                yield model
        return
    table = {
        "finset_sum": (lambda s: FinSetSum(s), _random_function, (1, 2)),
        "finrel_sum": (lambda s: FinRelSum(s), _random_relation, (1, 2)),
        "finrel_sum_comonoid": (lambda s: FinRelSum(s), _random_relation, (1, 2)),
        "span_sum": (lambda s: SpanSum(s), _random_span, (1, 2)),
        "cospan": (lambda s: CospanSum(s), _random_cospan, (1, 2)),
        "corelation": (lambda s: CorelationSum(s), lambda r, m, n: _random_cospan(r, m, n).corelation(), (1, 2)),
        "scaled_frobenius": (lambda s: MatrixModel("rational", "kronecker", s, frobenius_scale=2), _random_matrix, (2,)),
        "finrel_product": (lambda s: FinRelProduct(s), _random_relation, (2, 3)),
    }
    make_model, make, sizes = table[name]
    if name == "finrel_product" and any(r.name.startswith("dup_") for r in theory.rules):
        make = _random_function
    for size in sizes:
        sz = {x: size for x in sorts}
        for x in sorts:
            sz[f"{x}_star"] = size
        base = make_model(sz)
        for _ in range(trials if _user_ops(theory, base) else 1):
            model = _assign(theory, base, rng, make)
            if model is not None:
                yield model


def graph_term(theory, g: OpenHypergraph) -> Term:
    from ..rewrite import FROBENIUS

    return to_term_frob(g) if theory.mode == FROBENIUS else to_term(g)


def satisfies(model: SemanticModel, theory) -> bool:
    """Every rule of the theory holds in the model."""
    for r in theory.rules:
        try:
            if model.eval(to_term(r.lhs)) != model.eval(to_term(r.rhs)):
                return False
        except DiagramError:
            return False
    return True


def countermodel(theory, a: OpenHypergraph, b: OpenHypergraph, trials: int = 6, seed: int = 0):
    """A model of the theory separating a and b, or None."""
    try:
        ta, tb = graph_term(theory, a), graph_term(theory, b)
    except DiagramError:
        return None
    rng = random.Random(seed)
    for name in theory.countermodels:
        for model in _instances(name, theory, rng, trials):
            try:
                if model.eval(ta) == model.eval(tb):
                    continue
            except DiagramError:
                break
            if satisfies(model, theory):
                return model
    return None


def refutes(theory, a: OpenHypergraph, b: OpenHypergraph, trials: int = 6, seed: int = 0) -> bool:
    return countermodel(theory, a, b, trials, seed) is not None
