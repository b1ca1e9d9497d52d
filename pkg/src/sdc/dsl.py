"""The text format: signatures, terms, theory selection, scripts and model bindings.

    sig S { ob x y; op d : x x -> y; }
    theory comm_monoid;
    term t = (c1 | c2) ; d;
    rule r : d ; e = f;
    orient as backward;
    script proof = [~counl@0, frob@1];
    bind x = 3;
    assign d = [0, 1, 1];

`|` binds tighter than `;`; both associate to the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import DiagramError, DuplicateName, TypeMismatch, UnknownTheory
from .hypergraph import from_term
from .rewrite import RewriteRule, Theory
from .syntax import (
    IDENT,
    STRUCTURAL_KINDS,
    Empty,
    Gen,
    Id,
    OperationDecl,
    Par,
    Seq,
    Signature,
    Sym,
    Term,
    declare_signature,
    format_term,
    format_word,
)
from .theories import DEFAULT_SORT, builtin_theory

RESERVED = {"id", "sym", "empty"}


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    line: int
    column: int
    message: str
    expected: tuple | None = None
    actual: tuple | None = None

    def format(self, filename: str = "<input>") -> str:
        out = f"{filename}:{self.line}:{self.column}: {self.severity}: {self.message}"
        if self.expected is not None:
            out += f" (expected {format_word(self.expected)}, got {format_word(self.actual)})"
        return out


class DslError(DiagramError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(d.format() for d in self.diagnostics))


@dataclass
class SourceFile:
    signature: Signature
    theory: Theory
    terms: dict = field(default_factory=dict)
    scripts: dict = field(default_factory=dict)
    sizes: dict = field(default_factory=dict)
    assignments: dict = field(default_factory=dict)
    rules: list = field(default_factory=list)
    theory_name: str = "structural"
    sig_name: str | None = None

    def term(self, name: str) -> Term:
        try:
            return self.terms[name]
        except KeyError:
            raise DslError([Diagnostic("error", 0, 0, f"no term named {name!r}")]) from None

    def script(self, name: str) -> list:
        try:
            return self.scripts[name]
        except KeyError:
            raise DslError([Diagnostic("error", 0, 0, f"no script named {name!r}")]) from None


# --- lexing -----------------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>(\#|//)[^\n]*)
  | (?P<arrow>->)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<eps>ε)
  | (?P<punct>[{}()\[\];:|=,@~+])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(source: str) -> list:
    tokens, line, start, pos = [], 1, 0, 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if not m:
            raise DslError([Diagnostic("error", line, pos - start + 1, f"unexpected character {source[pos]!r}")])
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            text = m.group()
            tokens.append(Token("punct" if kind in ("arrow", "punct") else kind, text, line, pos - start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - start + 1))
    return tokens


# --- parsing to a syntax tree --------------------------------------------------------------


@dataclass(frozen=True)
class Node:
    kind: str  # name | id | sym | empty | seq | par
    at: Token
    args: tuple = ()


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, message, tok=None):
        tok = tok or self.tok
        return DslError([Diagnostic("error", tok.line, tok.column, message)])

    def next(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def accept(self, text) -> Token | None:
        if self.tok.text == text and self.tok.kind in ("punct", "ident", "eps"):
            return self.next()
        return None

    def expect(self, text) -> Token:
        t = self.accept(text)
        if t is None:
            found = self.tok.text or "end of file"
            raise self.error(f"expected {text!r}, found {found!r}")
        return t

    def ident(self) -> Token:
        if self.tok.kind != "ident":
            raise self.error(f"expected a name, found {self.tok.text or 'end of file'!r}")
        return self.next()

    def integer(self) -> int:
        if self.tok.kind != "int":
            raise self.error(f"expected a number, found {self.tok.text or 'end of file'!r}")
        return int(self.next().text)

    def word(self, stop) -> tuple:
        out = []
        if self.accept("ε"):
            return ()
        while self.tok.kind == "ident" and self.tok.text not in stop:
            out.append(self.next())
        return tuple(out)

    # expressions
    def expr(self) -> Node:
        node = self.par()
        while True:
            t = self.accept(";")
            if t is None:
                return node
            # `;` also ends statements: only continue if an expression follows
            if self.tok.kind == "eof" or self.tok.text in ("]", "}", "=") or self._statement_start():
                self.i -= 1
                return node
            node = Node("seq", t, (node, self.par()))

    def _statement_start(self) -> bool:
        # a keyword followed by something that cannot continue an expression
        nxt = self.toks[self.i + 1] if self.i + 1 < len(self.toks) else None
        if self.tok.text not in _KEYWORDS or nxt is None:
            return False
        return nxt.kind == "ident" or nxt.text == "{"

    def par(self) -> Node:
        node = self.atom()
        while True:
            t = self.accept("|")
            if t is None:
                return node
            node = Node("par", t, (node, self.atom()))

    def atom(self) -> Node:
        t = self.tok
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        if t.kind != "ident":
            raise self.error(f"expected a term, found {t.text or 'end of file'!r}")
        self.next()
        if t.text == "id":
            self.expect("(")
            w = self.word(())
            self.expect(")")
            return Node("id", t, tuple(x.text for x in w))
        if t.text == "sym":
            self.expect("(")
            a = self.ident()
            self.accept(",")
            b = self.ident()
            self.expect(")")
            return Node("sym", t, (a.text, b.text))
        if t.text == "empty":
            return Node("empty", t)
        return Node("name", t, (t.text,))


_KEYWORDS = {"sig", "term", "theory", "rule", "orient", "script", "bind", "assign"}


@dataclass
class _Raw:
    sig: tuple | None = None  # (name token, objects, ops)
    theory: list = field(default_factory=list)
    terms: list = field(default_factory=list)
    rules: list = field(default_factory=list)
    orient: list = field(default_factory=list)
    scripts: list = field(default_factory=list)
    binds: list = field(default_factory=list)
    assigns: list = field(default_factory=list)


def _parse_statements(tokens) -> _Raw:
    p = _Parser(tokens)
    raw = _Raw()
    while p.tok.kind != "eof":
        kw = p.tok
        if kw.text not in _KEYWORDS:
            raise p.error(f"expected a declaration ({', '.join(sorted(_KEYWORDS))}), found {kw.text!r}")
        p.next()
        if kw.text == "sig":
            if raw.sig is not None:
                raise p.error("only one signature block is allowed", kw)
            name = p.ident()
            p.expect("{")
            objects, ops = [], []
            while not p.accept("}"):
                if p.accept("ob"):
                    objects.append(p.ident())
                    while p.accept(",") or p.tok.kind == "ident":
                        objects.append(p.ident())
                    p.expect(";")
                elif p.accept("op"):
                    n = p.ident()
                    p.expect(":")
                    arity = p.word(())
                    p.expect("->")
                    coarity = p.word(())
                    p.expect(";")
                    ops.append((n, arity, coarity))
                else:
                    raise p.error(f"expected 'ob' or 'op', found {p.tok.text or 'end of file'!r}")
            raw.sig = (name, objects, ops)
            p.accept(";")
            continue
        elif kw.text == "theory":
            names = [p.ident()]
            while p.accept("+"):
                names.append(p.ident())
            raw.theory.append(names)
        elif kw.text == "term":
            name = p.ident()
            p.expect("=")
            raw.terms.append((name, p.expr()))
        elif kw.text == "rule":
            name = p.ident()
            p.expect(":")
            lhs = p.expr()
            p.expect("=")
            raw.rules.append((name, lhs, p.expr()))
        elif kw.text == "orient":
            tilde = p.accept("~")
            name = p.ident()
            d = p.ident()
            if d.text not in ("forward", "backward", "off"):
                raise p.error("orientation must be forward, backward or off", d)
            raw.orient.append((name, d, bool(tilde)))
        elif kw.text == "script":
            name = p.ident()
            p.expect("=")
            p.expect("[")
            steps = []
            while not p.accept("]"):
                tilde = "~" if p.accept("~") else ""
                r = p.ident()
                p.expect("@")
                steps.append((tilde + r.text, p.integer(), r))
                if not p.accept(","):
                    p.expect("]")
                    break
            raw.scripts.append((name, steps))
        elif kw.text == "bind":
            x = p.ident()
            p.expect("=")
            raw.binds.append((x, p.integer()))
        elif kw.text == "assign":
            name = p.ident()
            p.expect("=")
            raw.assigns.append((name, _value(p)))
        p.expect(";")
    return raw


def _value(p: _Parser):
    """`[1, 0, 2]` is a function by its images; `{(0,1), (2,0)}` is a relation by its pairs."""
    if p.accept("["):
        out = []
        while not p.accept("]"):
            out.append(p.integer())
            if not p.accept(","):
                p.expect("]")
                break
        return ("function", tuple(out))
    p.expect("{")
    pairs = []
    while not p.accept("}"):
        p.expect("(")
        a = p.integer()
        p.expect(",")
        b = p.integer()
        p.expect(")")
        pairs.append((a, b))
        if not p.accept(","):
            p.expect("}")
            break
    return ("relation", tuple(pairs))


# --- elaboration ----------------------------------------------------------------------


class _Scope:
    def __init__(self, sig: Signature, terms: dict):
        self.sig = sig
        self.terms = terms
        self.aliases = {}
        if len(sig.objects) == 1:
            x = sig.objects[0]
            for op in sig.operations:
                if op.kind and op.name == f"{op.kind}_{x}" and not sig.has_op(op.kind):
                    self.aliases[op.kind] = op

    def resolve(self, node: Node) -> Term:
        k = node.kind
        if k == "name":
            name = node.args[0]
            if self.sig.has_op(name):
                return Gen(self.sig.op(name))
            if name in self.aliases:
                return Gen(self.aliases[name])
            if name in self.terms:
                return self.terms[name]
            raise _diag(node.at, f"unknown name {name!r}")
        if k == "id":
            for x in node.args:
                self._sort(x, node.at)
            return Id(node.args) if node.args else Empty()
        if k == "sym":
            for x in node.args:
                self._sort(x, node.at)
            return Sym(*node.args)
        if k == "empty":
            return Empty()
        a, b = (self.resolve(n) for n in node.args)
        if k == "par":
            return Par(a, b)
        try:
            return Seq(a, b)
        except TypeMismatch as e:
            raise DslError(
                [
                    Diagnostic(
                        "error",
                        node.at.line,
                        node.at.column,
                        f"type mismatch in sequential composite: {format_word(a.cod)} vs {format_word(b.dom)}",
                        a.cod,
                        b.dom,
                    )
                ]
            ) from e

    def _sort(self, x, at):
        if x not in self.sig.objects:
            raise _diag(at, f"unknown sort {x!r}")


def _diag(tok: Token, message: str) -> DslError:
    return DslError([Diagnostic("error", tok.line, tok.column, message)])


def parse(source: str) -> SourceFile:
    raw = _parse_statements(tokenize(source))
    sig_name = None
    if raw.sig is not None:
        name, objects, ops = raw.sig
        sig_name = name.text
        seen = set()
        for o in objects:
            if not IDENT.match(o.text) or o.text in seen:
                raise _diag(o, f"duplicate object {o.text!r}")
            seen.add(o.text)
        decls = []
        names = set()
        for n, arity, coarity in ops:
            if n.text in names or n.text in RESERVED:
                raise _diag(n, f"duplicate or reserved operation name {n.text!r}")
            names.add(n.text)
            for x in arity + coarity:
                if x.text not in seen:
                    raise _diag(x, f"unknown sort {x.text!r}")
            decls.append(OperationDecl(n.text, tuple(x.text for x in arity), tuple(x.text for x in coarity)))
        try:
            sig = declare_signature([o.text for o in objects], decls)
        except DiagramError as e:
            raise _diag(name, str(e)) from e
    else:
        sig = declare_signature([DEFAULT_SORT])
    theory_name = "+".join(n.text for names in raw.theory for n in names) or "structural"
    try:
        theory = builtin_theory(theory_name, sig)
    except UnknownTheory as e:
        raise _diag(raw.theory[0][0] if raw.theory else Token("eof", "", 0, 0), str(e)) from e
    ambient = theory.signature
    terms = {}
    scope = _Scope(ambient, terms)
    for name, node in raw.terms:
        if name.text in terms or ambient.has_op(name.text) or name.text in RESERVED:
            raise _diag(name, f"duplicate name {name.text!r}")
        terms[name.text] = scope.resolve(node)
    rules = []
    for name, lhs, rhs in raw.rules:
        if any(r.name == name.text for r in theory.rules + tuple(rules)):
            raise _diag(name, f"duplicate rule {name.text!r}")
        a, b = scope.resolve(lhs), scope.resolve(rhs)
        if (a.dom, a.cod) != (b.dom, b.cod):
            raise DslError(
                [
                    Diagnostic(
                        "error",
                        name.line,
                        name.column,
                        f"rule {name.text}: sides have different boundaries",
                        a.dom + ("->",) + a.cod,
                        b.dom + ("->",) + b.cod,
                    )
                ]
            )
        rules.append(RewriteRule(name.text, from_term(a), from_term(b)))
    if rules:
        theory = theory.with_rules(rules)
    if raw.orient:
        orient = []
        for name, d, tilde in raw.orient:
            direction = d.text
            if tilde and direction != "off":
                direction = "backward" if direction == "forward" else "forward"
            orient.append((name.text, direction))
        try:
            theory = theory.with_orientation(orient)
        except DiagramError as e:
            raise _diag(raw.orient[0][0], str(e)) from e
    scripts = {}
    for name, steps in raw.scripts:
        for rule_name, _, tok in steps:
            try:
                theory.rule(rule_name)
            except DiagramError as e:
                raise _diag(tok, str(e)) from e
        scripts[name.text] = [(r, i) for r, i, _ in steps]
    sizes = {}
    for x, n in raw.binds:
        if x.text not in ambient.objects:
            raise _diag(x, f"unknown sort {x.text!r}")
        sizes[x.text] = n
    assignments = {}
    for name, value in raw.assigns:
        if not ambient.has_op(name.text):
            raise _diag(name, f"unknown operation {name.text!r}")
        assignments[name.text] = (value, ambient.op(name.text))
    return SourceFile(ambient, theory, terms, scripts, sizes, assignments, rules, theory_name, sig_name)


def parse_term(source: str, sig: Signature) -> Term:
    """Parse a single expression against a signature."""
    p = _Parser(tokenize(source))
    node = p.expr()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r} after the term")
    return _Scope(sig, {}).resolve(node)


def print_term(t: Term) -> str:
    return format_term(t)


def print_signature(sig: Signature, name: str = "S") -> str:
    lines = [f"sig {name} {{", f"  ob {', '.join(sig.objects)};"]
    for op in sig.operations:
        if op.kind is None:
            lines.append(f"  op {op.name} : {' '.join(op.arity)} -> {' '.join(op.coarity)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
