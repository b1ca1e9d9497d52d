"""Finite morphisms: functions, relations, spans, cospans, corelations and matrices.

Carriers are ordinals. Sums place the second summand after the first; products
encode tuples in mixed radix with the first component most significant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..hypergraph import UnionFind


def _check_map(images: Sequence[int], size: int, what: str) -> tuple:
    images = tuple(images)
    for v in images:
        if not 0 <= v < size:
            raise ValueError(f"{what}: image {v} outside 0..{size - 1}")
    return images


def _list(xs) -> str:
    return "[" + ",".join(map(str, xs)) + "]"


@dataclass(frozen=True)
class FinFunction:
    dom_size: int
    cod_size: int
    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", _check_map(self.images, self.cod_size, "function"))
        if len(self.images) != self.dom_size:
            raise ValueError(f"function on {self.dom_size} elements given {len(self.images)} images")

    @classmethod
    def identity(cls, n: int) -> "FinFunction":
        return cls(n, n, tuple(range(n)))

    def __call__(self, i: int) -> int:
        return self.images[i]

    def then(self, other: "FinFunction") -> "FinFunction":
        return FinFunction(self.dom_size, other.cod_size, tuple(other.images[i] for i in self.images))

    def plus(self, other: "FinFunction") -> "FinFunction":
        return FinFunction(
            self.dom_size + other.dom_size,
            self.cod_size + other.cod_size,
            self.images + tuple(self.cod_size + j for j in other.images),
        )

    def times(self, other: "FinFunction") -> "FinFunction":
        q = other.cod_size
        images = tuple(a * q + b for a in self.images for b in other.images)
        return FinFunction(self.dom_size * other.dom_size, self.cod_size * q, images)

    def graph(self) -> "FinRelation":
        return FinRelation(self.dom_size, self.cod_size, frozenset(enumerate(self.images)))

    def __str__(self):
        return _list(self.images)


@dataclass(frozen=True)
class FinRelation:
    dom_size: int
    cod_size: int
    pairs: frozenset

    def __post_init__(self):
        pairs = frozenset((int(a), int(b)) for a, b in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        for a, b in pairs:
            if not (0 <= a < self.dom_size and 0 <= b < self.cod_size):
                raise ValueError(f"pair {(a, b)} outside {self.dom_size} x {self.cod_size}")

    @classmethod
    def identity(cls, n: int) -> "FinRelation":
        return cls(n, n, frozenset((i, i) for i in range(n)))

    def then(self, other: "FinRelation") -> "FinRelation":
        after = {}
        for b, c in other.pairs:
            after.setdefault(b, []).append(c)
        pairs = frozenset((a, c) for a, b in self.pairs for c in after.get(b, ()))
        return FinRelation(self.dom_size, other.cod_size, pairs)

    def plus(self, other: "FinRelation") -> "FinRelation":
        m, n = self.dom_size, self.cod_size
        pairs = self.pairs | {(a + m, b + n) for a, b in other.pairs}
        return FinRelation(m + other.dom_size, n + other.cod_size, frozenset(pairs))

    def times(self, other: "FinRelation") -> "FinRelation":
        p, q = other.dom_size, other.cod_size
        pairs = frozenset((a * p + c, b * q + d) for a, b in self.pairs for c, d in other.pairs)
        return FinRelation(self.dom_size * p, self.cod_size * q, pairs)

    def converse(self) -> "FinRelation":
        return FinRelation(self.cod_size, self.dom_size, frozenset((b, a) for a, b in self.pairs))

    def is_function(self) -> bool:
        return all(sum(1 for a, _ in self.pairs if a == i) == 1 for i in range(self.dom_size))

    def __str__(self):
        return "{" + ",".join(f"({a},{b})" for a, b in sorted(self.pairs)) + "}"


@dataclass(frozen=True)
class FinSpan:
    """dom <-f- apex -g-> cod, kept as the sorted list of leg pairs (f(a), g(a))."""

    dom_size: int
    cod_size: int
    legs: tuple

    def __post_init__(self):
        legs = tuple(sorted((int(a), int(b)) for a, b in self.legs))
        object.__setattr__(self, "legs", legs)
        for a, b in legs:
            if not (0 <= a < self.dom_size and 0 <= b < self.cod_size):
                raise ValueError(f"span leg pair {(a, b)} outside {self.dom_size} x {self.cod_size}")

    @classmethod
    def from_legs(cls, dom_size: int, cod_size: int, f: Sequence[int], g: Sequence[int]) -> "FinSpan":
        if len(f) != len(g):
            raise ValueError("span legs must share an apex")
        return cls(dom_size, cod_size, tuple(zip(f, g)))

    @classmethod
    def identity(cls, n: int) -> "FinSpan":
        return cls(n, n, tuple((i, i) for i in range(n)))

    @property
    def apex(self) -> int:
        return len(self.legs)

    @property
    def f(self) -> tuple:
        return tuple(a for a, _ in self.legs)

    @property
    def g(self) -> tuple:
        return tuple(b for _, b in self.legs)

    def then(self, other: "FinSpan") -> "FinSpan":
        # pullback: pairs of apex elements agreeing in the middle
        legs = [(a, c) for a, b in self.legs for b2, c in other.legs if b == b2]
        return FinSpan(self.dom_size, other.cod_size, tuple(legs))

    def plus(self, other: "FinSpan") -> "FinSpan":
        m, n = self.dom_size, self.cod_size
        legs = self.legs + tuple((a + m, b + n) for a, b in other.legs)
        return FinSpan(m + other.dom_size, n + other.cod_size, legs)

    def matrix(self) -> "Matrix":
        rows = [[0] * self.dom_size for _ in range(self.cod_size)]
        for a, b in self.legs:
            rows[b][a] += 1
        return Matrix(self.cod_size, self.dom_size, rows, "nat")

    def relation(self) -> FinRelation:
        return FinRelation(self.dom_size, self.cod_size, frozenset(self.legs))

    def __str__(self):
        return f"apex {self.apex} f={_list(self.f)} g={_list(self.g)}"


def _canonical_apex(apex: int, f: Sequence[int], g: Sequence[int]) -> tuple:
    order = {}
    for v in list(f) + list(g):
        if v not in order:
            order[v] = len(order)
    isolated = apex - len(order)
    return tuple(order[v] for v in f), tuple(order[v] for v in g), isolated


@dataclass(frozen=True)
class FinCospan:
    """dom -f-> apex <-g- cod, with the apex numbered by first appearance along f then g."""

    dom_size: int
    cod_size: int
    apex: int
    f: tuple
    g: tuple

    def __post_init__(self):
        f = _check_map(self.f, self.apex, "cospan left leg")
        g = _check_map(self.g, self.apex, "cospan right leg")
        if len(f) != self.dom_size or len(g) != self.cod_size:
            raise ValueError("cospan legs do not match the boundary sizes")
        f, g, _ = _canonical_apex(self.apex, f, g)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)

    @classmethod
    def identity(cls, n: int) -> "FinCospan":
        return cls(n, n, n, tuple(range(n)), tuple(range(n)))

    @property
    def isolated(self) -> int:
        return self.apex - len(set(self.f) | set(self.g))

    def then(self, other: "FinCospan") -> "FinCospan":
        # pushout: glue self's apex and other's apex along the shared middle boundary
        a = self.apex
        uf = UnionFind(a + other.apex)
        for y in range(self.cod_size):
            uf.union(self.g[y], a + other.f[y])
        roots = {}
        for v in range(a + other.apex):
            roots.setdefault(uf.find(v), len(roots))
        f = tuple(roots[uf.find(v)] for v in self.f)
        g = tuple(roots[uf.find(a + v)] for v in other.g)
        return FinCospan(self.dom_size, other.cod_size, len(roots), f, g)

    def plus(self, other: "FinCospan") -> "FinCospan":
        a = self.apex
        return FinCospan(
            self.dom_size + other.dom_size,
            self.cod_size + other.cod_size,
            a + other.apex,
            self.f + tuple(a + v for v in other.f),
            self.g + tuple(a + v for v in other.g),
        )

    def corelation(self) -> "Corelation":
        blocks = {}
        for i, v in enumerate(self.f):
            blocks.setdefault(v, set()).add(i)
        for j, v in enumerate(self.g):
            blocks.setdefault(v, set()).add(self.dom_size + j)
        return Corelation(self.dom_size, self.cod_size, frozenset(frozenset(b) for b in blocks.values()))

    def __str__(self):
        return f"apex {self.apex} f={_list(self.f)} g={_list(self.g)}"


@dataclass(frozen=True)
class Corelation:
    """A partition of dom + cod; element i < dom_size is L{i}, the rest R{i - dom_size}."""

    dom_size: int
    cod_size: int
    blocks: frozenset

    def __post_init__(self):
        blocks = frozenset(frozenset(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        seen = [v for b in blocks for v in b]
        if any(not b for b in blocks):
            raise ValueError("corelation blocks must be nonempty")
        if sorted(seen) != list(range(self.dom_size + self.cod_size)):
            raise ValueError("corelation blocks must partition the boundary")

    @classmethod
    def from_blocks(cls, dom_size: int, cod_size: int, blocks: Iterable[Iterable[str]]) -> "Corelation":
        """Blocks given with labels such as "L0" and "R1"."""

        def index(label):
            side, i = label[0], int(label[1:])
            return i if side == "L" else dom_size + i

        return cls(dom_size, cod_size, frozenset(frozenset(index(x) for x in b) for b in blocks))

    @classmethod
    def identity(cls, n: int) -> "Corelation":
        return cls(n, n, frozenset(frozenset({i, n + i}) for i in range(n)))

    def cospan(self) -> FinCospan:
        order = sorted(self.blocks, key=min)
        where = {v: k for k, b in enumerate(order) for v in b}
        n = self.dom_size
        return FinCospan(
            n,
            self.cod_size,
            len(order),
            tuple(where[i] for i in range(n)),
            tuple(where[n + j] for j in range(self.cod_size)),
        )

    def then(self, other: "Corelation") -> "Corelation":
        return self.cospan().then(other.cospan()).corelation()

    def plus(self, other: "Corelation") -> "Corelation":
        return self.cospan().plus(other.cospan()).corelation()

    def _label(self, v: int) -> str:
        return f"L{v}" if v < self.dom_size else f"R{v - self.dom_size}"

    def __str__(self):
        blocks = sorted((sorted(b) for b in self.blocks), key=lambda b: b[0])
        return "{" + ",".join("{" + ",".join(self._label(v) for v in b) + "}" for b in blocks) + "}"


SEMIRINGS = ("bool", "nat", "rational")


def _coerce(v, semiring):
    if semiring == "bool":
        return 1 if v else 0
    if semiring == "nat":
        v = int(v)
        if v < 0:
            raise ValueError("natural-number matrices cannot hold negative entries")
        return v
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else v


def _fmt(v) -> str:
    if isinstance(v, Fraction) and v.denominator != 1:
        return f"{v.numerator}/{v.denominator}"
    return str(int(v))


@dataclass(frozen=True)
class Matrix:
    """rows = codomain size, cols = domain size; composition is matrix product in reverse."""

    rows: int
    cols: int
    entries: tuple
    semiring: str = "nat"

    def __post_init__(self):
        if self.semiring not in SEMIRINGS:
            raise ValueError(f"unknown semiring {self.semiring!r}")
        entries = tuple(tuple(_coerce(v, self.semiring) for v in row) for row in self.entries)
        if len(entries) != self.rows or any(len(r) != self.cols for r in entries):
            raise ValueError(f"matrix entries do not have shape {self.rows}x{self.cols}")
        object.__setattr__(self, "entries", entries)

    @property
    def dom_size(self) -> int:
        return self.cols

    @property
    def cod_size(self) -> int:
        return self.rows

    @classmethod
    def identity(cls, n: int, semiring: str = "nat") -> "Matrix":
        return cls(n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)], semiring)

    @classmethod
    def zeros(cls, rows: int, cols: int, semiring: str = "nat") -> "Matrix":
        return cls(rows, cols, [[0] * cols for _ in range(rows)], semiring)

    @classmethod
    def from_relation(cls, r: FinRelation, semiring: str = "bool") -> "Matrix":
        rows = [[0] * r.dom_size for _ in range(r.cod_size)]
        for a, b in r.pairs:
            rows[b][a] = 1
        return cls(r.cod_size, r.dom_size, rows, semiring)

    def then(self, other: "Matrix") -> "Matrix":
        if other.cols != self.rows:
            raise ValueError(f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}")
        cols = list(zip(*self.entries)) if self.rows else [()] * self.cols
        rows = [[sum(a * b for a, b in zip(row, col) if a and b) for col in cols] for row in other.entries]
        return Matrix(other.rows, self.cols, rows, self.semiring)

    def plus(self, other: "Matrix") -> "Matrix":
        rows = [list(r) + [0] * other.cols for r in self.entries]
        rows += [[0] * self.cols + list(r) for r in other.entries]
        return Matrix(self.rows + other.rows, self.cols + other.cols, rows, self.semiring)

    def times(self, other: "Matrix") -> "Matrix":
        rows = []
        for r1 in self.entries:
            for r2 in other.entries:
                rows.append([a * b for a in r1 for b in r2])
        return Matrix(self.rows * other.rows, self.cols * other.cols, rows, self.semiring)

    def scale(self, c) -> "Matrix":
        return Matrix(self.rows, self.cols, [[c * v for v in r] for r in self.entries], self.semiring)

    def transpose(self) -> "Matrix":
        rows = [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)]
        return Matrix(self.cols, self.rows, rows, self.semiring)

    def __str__(self):
        return "[" + ",".join("[" + ",".join(_fmt(v) for v in r) + "]" for r in self.entries) + "]"
