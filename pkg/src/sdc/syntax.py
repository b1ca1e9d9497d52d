"""Signatures, terms and permutations."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DuplicateName, NotPermutationTerm, TypeMismatch, UnknownSort

Word = tuple  # tuple[str, ...]

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

# Structural generator kinds and their types over a single sort x.
STRUCTURAL_KINDS = {
    "comult": (1, 2),
    "counit": (1, 0),
    "mult": (2, 1),
    "unit": (0, 1),
    "cup": (0, 2),
    "cap": (2, 0),
}
FROBENIUS_KINDS = frozenset({"comult", "counit", "mult", "unit"})


def word(*sorts) -> Word:
    if len(sorts) == 1 and not isinstance(sorts[0], str):
        return tuple(sorts[0])
    return tuple(sorts)


def format_word(w: Sequence[str]) -> str:
    return "·".join(w) if w else "ε"


@dataclass(frozen=True)
class OperationDecl:
    name: str
    arity: Word
    coarity: Word
    kind: str | None = None  # set for structural generators (comult, cup, ...)

    def __post_init__(self):
        object.__setattr__(self, "arity", tuple(self.arity))
        object.__setattr__(self, "coarity", tuple(self.coarity))

    def __hash__(self):
        # operations key every matching index, so the hash is computed once
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash((self.name, self.arity, self.coarity, self.kind))
            self.__dict__["_hash"] = h
            return h

    @property
    def sort(self) -> str | None:
        """The sort a structural generator is built on."""
        if self.kind is None:
            return None
        return (self.arity + self.coarity)[0]

    def __str__(self):
        return f"{self.name} : {format_word(self.arity)} -> {format_word(self.coarity)}"


def structural_op(kind: str, sort: str, name: str | None = None) -> OperationDecl:
    n_in, n_out = STRUCTURAL_KINDS[kind]
    return OperationDecl(name or f"{kind}_{sort}", (sort,) * n_in, (sort,) * n_out, kind)


@dataclass(frozen=True)
class Signature:
    objects: tuple
    operations: tuple  # of OperationDecl, declaration order

    def op(self, name: str) -> OperationDecl:
        for o in self.operations:
            if o.name == name:
                return o
        raise KeyError(name)

    def has_op(self, name: str) -> bool:
        return any(o.name == name for o in self.operations)

    def extend(self, operations: Iterable[OperationDecl] = (), objects: Iterable[str] = ()) -> "Signature":
        objs = list(self.objects)
        for x in objects:
            if x not in objs:
                objs.append(x)
        ops = list(self.operations)
        names = {o.name for o in ops}
        for o in operations:
            if o.name in names:
                continue
            ops.append(o)
            names.add(o.name)
        return _validated(tuple(objs), tuple(ops))


def _validated(objects: tuple, operations: tuple) -> Signature:
    seen = set()
    for x in objects:
        if not isinstance(x, str) or not IDENT.match(x):
            raise UnknownSort(f"invalid sort name {x!r}")
        if x in seen:
            raise DuplicateName(f"duplicate sort {x}")
        seen.add(x)
    names = set()
    for o in operations:
        if o.name in names:
            raise DuplicateName(f"duplicate operation {o.name}")
        names.add(o.name)
        for s in o.arity + o.coarity:
            if s not in seen:
                raise UnknownSort(f"operation {o.name} uses undeclared sort {s}")
    return Signature(objects, operations)


def declare_signature(objects: Sequence[str], operations: Sequence = ()) -> Signature:
    """Build a validated signature.

    ``operations`` holds ``(name, arity, coarity)`` triples, or ready-made
    OperationDecl values.
    """
    ops = []
    for o in operations:
        if isinstance(o, OperationDecl):
            ops.append(o)
        else:
            name, arity, coarity = o
            if not IDENT.match(name):
                raise DuplicateName(f"invalid operation name {name!r}")
            ops.append(OperationDecl(name, tuple(arity), tuple(coarity)))
    return _validated(tuple(objects), tuple(ops))


# --- terms -------------------------------------------------------------------


class Term:
    dom: Word
    cod: Word

    def __str__(self):
        return format_term(self)


def _set_type(t, dom, cod):
    object.__setattr__(t, "dom", tuple(dom))
    object.__setattr__(t, "cod", tuple(cod))


@dataclass(frozen=True, eq=True)
class Gen(Term):
    op: OperationDecl
    dom: Word = field(init=False, repr=False, compare=False)
    cod: Word = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _set_type(self, self.op.arity, self.op.coarity)


@dataclass(frozen=True, eq=True)
class Id(Term):
    w: Word
    dom: Word = field(init=False, repr=False, compare=False)
    cod: Word = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        w = (self.w,) if isinstance(self.w, str) else tuple(self.w)
        object.__setattr__(self, "w", w)
        _set_type(self, w, w)


@dataclass(frozen=True, eq=True)
class Sym(Term):
    x: str
    y: str
    dom: Word = field(init=False, repr=False, compare=False)
    cod: Word = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _set_type(self, (self.x, self.y), (self.y, self.x))


@dataclass(frozen=True, eq=True)
class Empty(Term):
    dom: Word = field(init=False, repr=False, compare=False)
    cod: Word = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _set_type(self, (), ())


@dataclass(frozen=True, eq=True)
class Seq(Term):
    left: Term
    right: Term
    dom: Word = field(init=False, repr=False, compare=False)
    cod: Word = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.left.cod != self.right.dom:
            raise TypeMismatch(
                f"cannot compose: coarity {format_word(self.left.cod)} "
                f"vs arity {format_word(self.right.dom)}",
                expected=self.right.dom,
                actual=self.left.cod,
            )
        _set_type(self, self.left.dom, self.right.cod)


@dataclass(frozen=True, eq=True)
class Par(Term):
    top: Term
    bottom: Term
    dom: Word = field(init=False, repr=False, compare=False)
    cod: Word = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _set_type(self, self.top.dom + self.bottom.dom, self.top.cod + self.bottom.cod)


def type_of(t: Term) -> tuple:
    return t.dom, t.cod


def seq(l: Term, r: Term) -> Term:
    return Seq(l, r)


def par(t: Term, b: Term) -> Term:
    return Par(t, b)


def seq_all(terms: Iterable[Term]) -> Term:
    terms = list(terms)
    if not terms:
        raise ValueError("seq_all needs at least one term")
    out = terms[0]
    for t in terms[1:]:
        out = Seq(out, t)
    return out


def par_all(terms: Iterable[Term]) -> Term:
    """Right-nested parallel composite, dropping Empty factors."""
    terms = [t for t in terms if not isinstance(t, Empty)]
    if not terms:
        return Empty()
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = Par(t, out)
    return out


def id_word(w: Sequence[str]) -> Term:
    w = tuple(w)
    if not w:
        return Empty()
    if len(w) == 1:
        return Id(w)
    return Par(Id(w[:1]), id_word(w[1:]))


def _sym_sort_word(x: str, w: Word) -> Term:
    # x·w -> w·x
    if not w:
        return Id((x,))
    if len(w) == 1:
        return Sym(x, w[0])
    return Seq(Par(Sym(x, w[0]), id_word(w[1:])), Par(Id(w[:1]), _sym_sort_word(x, w[1:])))


def sym_words(v: Sequence[str], w: Sequence[str]) -> Term:
    """The symmetry v·w -> w·v, by induction on v."""
    v, w = tuple(v), tuple(w)
    if not v:
        return id_word(w)
    if not w:
        return id_word(v)
    if len(v) == 1:
        return _sym_sort_word(v[0], w)
    return Seq(Par(Id(v[:1]), sym_words(v[1:], w)), Par(_sym_sort_word(v[0], w), id_word(v[1:])))


def generators(t: Term) -> list:
    """Operations occurring in t, left to right, with repetition."""
    out, stack = [], [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Gen):
            out.append(s.op)
        elif isinstance(s, Seq):
            stack += [s.right, s.left]
        elif isinstance(s, Par):
            stack += [s.bottom, s.top]
    return out


def term_size(t: Term) -> int:
    if isinstance(t, (Seq, Par)):
        a, b = (t.left, t.right) if isinstance(t, Seq) else (t.top, t.bottom)
        return 1 + term_size(a) + term_size(b)
    return 1


def check_term(sig: Signature, t: Term) -> None:
    """Raise if t mentions sorts or operations foreign to sig."""
    sorts = set(sig.objects)
    ops = {o.name: o for o in sig.operations}
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Gen):
            if ops.get(s.op.name) != s.op:
                raise UnknownSort(f"operation {s.op.name} is not in the signature")
        elif isinstance(s, Seq):
            stack += [s.left, s.right]
        elif isinstance(s, Par):
            stack += [s.top, s.bottom]
        for x in s.dom + s.cod:
            if x not in sorts:
                raise UnknownSort(f"sort {x} is not declared")


def format_term(t: Term) -> str:
    """Concrete syntax with `;` loosest, `|` tighter, both left-associative."""
    if isinstance(t, Gen):
        return t.op.name
    if isinstance(t, Id):
        return f"id({' '.join(t.w)})"
    if isinstance(t, Sym):
        return f"sym({t.x},{t.y})"
    if isinstance(t, Empty):
        return "empty"
    if isinstance(t, Seq):
        right = format_term(t.right)
        if isinstance(t.right, Seq):
            right = f"({right})"
        return f"{format_term(t.left)} ; {right}"
    if isinstance(t, Par):
        top, bottom = format_term(t.top), format_term(t.bottom)
        if isinstance(t.top, Seq):
            top = f"({top})"
        if isinstance(t.bottom, (Seq, Par)):
            bottom = f"({bottom})"
        return f"{top} | {bottom}"
    raise TypeError(t)


# --- permutations --------------------------------------------------------------


@dataclass(frozen=True)
class Permutation:
    images: tuple  # images[i] = right position receiving left wire i

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")

    @property
    def size(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    def then(self, other: "Permutation") -> "Permutation":
        """Diagrammatic composite: first self, then other."""
        return Permutation(tuple(other.images[i] for i in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.size
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))


def permutation_term(images: Sequence[int], sorts: Sequence[str]) -> Term:
    """Crossings-only term sending left wire i to right position images[i]."""
    cur = list(images)
    cur_sorts = list(sorts)
    n = len(cur)
    layers = []
    changed = True
    while changed:
        changed = False
        for j in range(n - 1):
            if cur[j] > cur[j + 1]:
                layers.append(
                    par_all([id_word(cur_sorts[:j]), Sym(cur_sorts[j], cur_sorts[j + 1]), id_word(cur_sorts[j + 2 :])])
                )
                cur[j], cur[j + 1] = cur[j + 1], cur[j]
                cur_sorts[j], cur_sorts[j + 1] = cur_sorts[j + 1], cur_sorts[j]
                changed = True
    if not layers:
        return id_word(sorts)
    return seq_all(layers)


def perm_to_term(p: Permutation, sort: str) -> Term:
    return permutation_term(p.images, (sort,) * p.size)


def term_to_perm(t: Term) -> Permutation:
    return Permutation(tuple(_trace(t)))


def _trace(t: Term) -> list:
    if isinstance(t, Id):
        return list(range(len(t.w)))
    if isinstance(t, Empty):
        return []
    if isinstance(t, Sym):
        return [1, 0]
    if isinstance(t, Seq):
        a, b = _trace(t.left), _trace(t.right)
        return [b[i] for i in a]
    if isinstance(t, Par):
        a, b = _trace(t.top), _trace(t.bottom)
        return a + [len(a) + j for j in b]
    raise NotPermutationTerm(f"term contains generator {t.op.name}")
