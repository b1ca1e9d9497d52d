"""Semantic models and the compositional evaluator."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from ..errors import UnassignedGenerator, UnsupportedStructure
from ..syntax import Empty, Gen, Id, OperationDecl, Par, Seq, Sym, Term
from .morphisms import Corelation, FinCospan, FinFunction, FinRelation, FinSpan, Matrix


class SemanticModel:
    """Carriers per sort, a morphism per generator, and the monoidal structure.

    Subclasses fix the morphism type and how words, tensors and symmetries are built.
    """

    name = "model"
    product = False  # tensor multiplies carrier sizes instead of adding them
    kinds = frozenset()  # structural generators the model interprets itself

    def __init__(self, sizes: Mapping[str, int] | None = None, assign: Mapping[str, object] | None = None):
        self.sizes = dict(sizes or {})
        self.assign = {k: self.lift(v) for k, v in (assign or {}).items()}

    def with_assignment(self, assign: Mapping[str, object]) -> "SemanticModel":
        out = object.__new__(type(self))
        out.__dict__.update(self.__dict__)
        out.assign = dict(self.assign)
        out.assign.update({k: self.lift(v) for k, v in assign.items()})
        return out

    def with_sizes(self, sizes: Mapping[str, int]) -> "SemanticModel":
        out = object.__new__(type(self))
        out.__dict__.update(self.__dict__)
        out.sizes = dict(self.sizes)
        out.sizes.update(sizes)
        return out

    # carriers
    def size(self, sort: str) -> int:
        return self.sizes.get(sort, self.default_size)

    default_size = 1

    def word_size(self, w: Sequence[str]) -> int:
        n = 1 if self.product else 0
        for s in w:
            n = n * self.size(s) if self.product else n + self.size(s)
        return n

    # structure, overridden per model
    def identity(self, n: int):
        raise NotImplementedError

    def compose(self, f, g):
        return f.then(g)

    def tensor(self, f, g):
        return f.times(g) if self.product else f.plus(g)

    def symmetry(self, m: int, n: int):
        raise NotImplementedError

    def structure(self, op: OperationDecl):
        raise UnsupportedStructure(f"model {self.name} does not interpret {op.kind}")

    def lift(self, value):
        return value

    def require(self, feature: str) -> None:
        """Raises UnsupportedStructure if the model cannot host `feature`."""

    # evaluation
    def generator(self, op: OperationDecl):
        if op.name in self.assign:
            f = self.assign[op.name]
            m, n = self.word_size(op.arity), self.word_size(op.coarity)
            if (f.dom_size, f.cod_size) != (m, n):
                raise UnassignedGenerator(
                    f"{op.name} is assigned a morphism {f.dom_size} -> {f.cod_size}, expected {m} -> {n}"
                )
            return f
        if op.kind in self.kinds:
            return self.structure(op)
        raise UnassignedGenerator(f"model {self.name} has no interpretation for {op.name}")

    def eval(self, t: Term):
        if isinstance(t, Gen):
            return self.generator(t.op)
        if isinstance(t, Id):
            return self.identity(self.word_size(t.w))
        if isinstance(t, Empty):
            return self.identity(self.word_size(()))
        if isinstance(t, Sym):
            return self.symmetry(self.size(t.x), self.size(t.y))
        if isinstance(t, Seq):
            return self.compose(self.eval(t.left), self.eval(t.right))
        if isinstance(t, Par):
            return self.tensor(self.eval(t.top), self.eval(t.bottom))
        raise TypeError(f"not a term: {t!r}")

    def __repr__(self):
        return f"{type(self).__name__}(sizes={self.sizes})"


def evaluate(model: SemanticModel, t: Term):
    return model.eval(t)


def _swap_images(m: int, n: int, product: bool) -> tuple:
    if product:
        return tuple(b * m + a for a in range(m) for b in range(n))
    return tuple(n + i for i in range(m)) + tuple(range(n))


def _as_function(value) -> FinFunction:
    if isinstance(value, FinFunction):
        return value
    if isinstance(value, FinRelation) and value.is_function():
        return FinFunction(value.dom_size, value.cod_size, tuple(b for _, b in sorted(value.pairs)))
    raise TypeError(f"cannot read {value!r} as a function")


def _as_relation(value) -> FinRelation:
    if isinstance(value, FinRelation):
        return value
    if isinstance(value, FinFunction):
        return value.graph()
    if isinstance(value, FinSpan):
        return value.relation()
    raise TypeError(f"cannot read {value!r} as a relation")


class FinSetSum(SemanticModel):
    """Functions with disjoint union; each sort is a single point unless bound otherwise."""

    name = "finset-sum"
    kinds = frozenset({"mult", "unit"})

    def identity(self, n):
        return FinFunction.identity(n)

    def symmetry(self, m, n):
        return FinFunction(m + n, m + n, _swap_images(m, n, False))

    def structure(self, op):
        n = self.size(op.sort)
        if op.kind == "mult":
            return FinFunction(2 * n, n, tuple(range(n)) * 2)
        return FinFunction(0, n, ())

    def lift(self, value):
        return _as_function(value)


class FinRelSum(SemanticModel):
    name = "finrel-sum"
    kinds = frozenset({"comult", "counit", "mult", "unit"})

    def identity(self, n):
        return FinRelation.identity(n)

    def symmetry(self, m, n):
        return FinFunction(m + n, m + n, _swap_images(m, n, False)).graph()

    def structure(self, op):
        n = self.size(op.sort)
        fold = FinFunction(2 * n, n, tuple(range(n)) * 2).graph()
        if op.kind == "mult":
            return fold
        if op.kind == "comult":
            return fold.converse()
        if op.kind == "unit":
            return FinRelation(0, n, frozenset())
        return FinRelation(n, 0, frozenset())

    def lift(self, value):
        return _as_relation(value)


class FinRelProduct(SemanticModel):
    """Relations with the cartesian product as tensor; sorts must be bound to sizes."""

    name = "finrel-product"
    product = True
    default_size = 2
    kinds = frozenset({"comult", "counit", "mult", "unit", "cup", "cap", "dcup", "dcap"})

    def identity(self, n):
        return FinRelation.identity(n)

    def symmetry(self, m, n):
        return FinFunction(m * n, m * n, _swap_images(m, n, True)).graph()

    def structure(self, op):
        if op.kind in ("dcup", "dcap"):
            w = op.coarity if op.kind == "dcup" else op.arity
            n = self.size(w[0])
            if self.size(w[1]) != n:
                raise UnsupportedStructure(f"{op.name}: a sort and its dual must have equal sizes")
            kind = "cup" if op.kind == "dcup" else "cap"
        else:
            n, kind = self.size(op.sort), op.kind
        diag = FinRelation(n, n * n, frozenset((a, a * n + a) for a in range(n)))
        bang = FinRelation(n, 1, frozenset((a, 0) for a in range(n)))
        if kind == "comult":
            return diag
        if kind == "mult":
            return diag.converse()
        if kind == "counit":
            return bang
        if kind == "unit":
            return bang.converse()
        cup = FinRelation(1, n * n, frozenset((0, a * n + a) for a in range(n)))
        return cup if kind == "cup" else cup.converse()

    def lift(self, value):
        return _as_relation(value)


class SpanSum(SemanticModel):
    name = "span-sum"
    kinds = frozenset({"comult", "counit", "mult", "unit"})

    def identity(self, n):
        return FinSpan.identity(n)

    def symmetry(self, m, n):
        images = _swap_images(m, n, False)
        return FinSpan(m + n, m + n, tuple(enumerate(images)))

    def structure(self, op):
        n = self.size(op.sort)
        if op.kind == "comult":
            return FinSpan(n, 2 * n, tuple((i % n, i) for i in range(2 * n)))
        if op.kind == "mult":
            return FinSpan(2 * n, n, tuple((i, i % n) for i in range(2 * n)))
        if op.kind == "unit":
            return FinSpan(0, n, ())
        return FinSpan(n, 0, ())

    def lift(self, value):
        if isinstance(value, FinSpan):
            return value
        if isinstance(value, FinFunction):
            return FinSpan(value.dom_size, value.cod_size, tuple(enumerate(value.images)))
        if isinstance(value, FinRelation):
            return FinSpan(value.dom_size, value.cod_size, tuple(value.pairs))
        raise TypeError(f"cannot read {value!r} as a span")


class CospanSum(SemanticModel):
    name = "cospan"
    kinds = frozenset({"comult", "counit", "mult", "unit", "cup", "cap"})

    def identity(self, n):
        return FinCospan.identity(n)

    def symmetry(self, m, n):
        images = _swap_images(m, n, False)
        return FinCospan(m + n, m + n, m + n, tuple(range(m + n)), tuple(images.index(i) for i in range(m + n)))

    def structure(self, op):
        n = self.size(op.sort)
        ids, fold = tuple(range(n)), tuple(range(n)) * 2
        if op.kind == "comult":
            return FinCospan(n, 2 * n, n, ids, fold)
        if op.kind == "mult":
            return FinCospan(2 * n, n, n, fold, ids)
        if op.kind == "counit":
            return FinCospan(n, 0, n, ids, ())
        if op.kind == "unit":
            return FinCospan(0, n, n, (), ids)
        if op.kind == "cup":
            return FinCospan(0, 2 * n, n, (), fold)
        return FinCospan(2 * n, 0, n, fold, ())

    def lift(self, value):
        if isinstance(value, FinCospan):
            return value
        if isinstance(value, FinFunction):
            return FinCospan(value.dom_size, value.cod_size, value.cod_size, value.images, tuple(range(value.cod_size)))
        raise TypeError(f"cannot read {value!r} as a cospan")


class CorelationSum(CospanSum):
    name = "corelation"

    def identity(self, n):
        return Corelation.identity(n)

    def symmetry(self, m, n):
        return super().symmetry(m, n).corelation()

    def structure(self, op):
        return super().structure(op).corelation()

    def lift(self, value):
        if isinstance(value, Corelation):
            return value
        return super().lift(value).corelation()


class MatrixModel(SemanticModel):
    """Matrices over bool, nat or the rationals; direct-sum or Kronecker tensor.

    In Kronecker mode comult copies basis vectors and mult is scaled by
    `frobenius_scale` (unit by its inverse), so comult;mult is that scalar.
    """

    kinds = frozenset({"comult", "counit", "mult", "unit", "cup", "cap"})

    def __init__(self, semiring="nat", tensor="sum", sizes=None, assign=None, frobenius_scale=1):
        self.semiring = semiring
        self.product = tensor == "kronecker"
        if tensor not in ("sum", "kronecker"):
            raise ValueError(f"unknown tensor convention {tensor!r}")
        if self.product and semiring != "rational":
            raise ValueError("the Kronecker convention is provided over the rationals")
        self.scale = Fraction(frobenius_scale)
        self.name = f"matrix-{semiring}" + ("-kron" if self.product else "")
        self.default_size = 2 if self.product else 1
        if not self.product:
            self.kinds = frozenset({"comult", "counit", "mult", "unit"})
        super().__init__(sizes, assign)

    def require(self, feature):
        if self.product and feature in ("cartesian", "copy", "dup"):
            raise UnsupportedStructure("no linear map copies every vector: the Kronecker model is not cartesian")

    def identity(self, n):
        return Matrix.identity(n, self.semiring)

    def compose(self, f, g):
        return f.then(g)

    def symmetry(self, m, n):
        images = _swap_images(m, n, self.product)
        return self.lift(FinFunction(m * n if self.product else m + n, m * n if self.product else m + n, images))

    def structure(self, op):
        n = self.size(op.sort)
        if not self.product:
            if op.kind in ("cup", "cap"):
                raise UnsupportedStructure(f"{op.kind} needs the Kronecker convention")
            r = FinRelSum(self.sizes).structure(op)
            return Matrix.from_relation(r, self.semiring)
        r = FinRelProduct({op.sort: n}).structure(op)
        m = Matrix.from_relation(r, self.semiring)
        if op.kind == "mult":
            m = m.scale(self.scale)
        elif op.kind == "unit":
            m = m.scale(1 / self.scale)
        return m

    def lift(self, value):
        if isinstance(value, Matrix):
            return Matrix(value.rows, value.cols, value.entries, self.semiring)
        if isinstance(value, FinSpan):
            return Matrix(value.cod_size, value.dom_size, value.matrix().entries, self.semiring)
        return Matrix.from_relation(_as_relation(value), self.semiring)


def model_finset_sum(sizes=None, assign=None) -> FinSetSum:
    return FinSetSum(sizes, assign)


def model_finrel_sum(sizes=None, assign=None) -> FinRelSum:
    return FinRelSum(sizes, assign)


def model_finrel_product(sizes=None, assign=None) -> FinRelProduct:
    return FinRelProduct(sizes, assign)


def model_span_sum(sizes=None, assign=None) -> SpanSum:
    return SpanSum(sizes, assign)


def model_cospan(sizes=None, assign=None) -> CospanSum:
    return CospanSum(sizes, assign)


def model_corelation(sizes=None, assign=None) -> CorelationSum:
    return CorelationSum(sizes, assign)


def model_matrix(semiring="nat", tensor="sum", sizes=None, assign=None, frobenius_scale=1) -> MatrixModel:
    return MatrixModel(semiring, tensor, sizes, assign, frobenius_scale)


MODELS = {
    "finset-sum": model_finset_sum,
    "finrel-sum": model_finrel_sum,
    "finrel-product": model_finrel_product,
    "span-sum": model_span_sum,
    "cospan": model_cospan,
    "corelation": model_corelation,
    "matrix-bool": lambda sizes=None, assign=None: model_matrix("bool", "sum", sizes, assign),
    "matrix-nat": lambda sizes=None, assign=None: model_matrix("nat", "sum", sizes, assign),
    "matrix-rational": lambda sizes=None, assign=None: model_matrix("rational", "kronecker", sizes, assign),
}


def model_by_name(name: str, sizes=None, assign=None) -> SemanticModel:
    try:
        factory = MODELS[name]
    except KeyError:
        raise ValueError(f"unknown model {name!r}; choose from {', '.join(MODELS)}") from None
    return factory(sizes, assign)
