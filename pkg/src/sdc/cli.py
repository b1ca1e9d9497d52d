"""The `sdc` command: check, graph, eq, normalize, eval and replay over .sdc files."""

from __future__ import annotations

import argparse
import sys

from .dsl import DslError, SourceFile, parse
from .errors import DiagramError
from .graphio import dump_graph, to_dot
from .hypergraph import from_term, iso_check, to_term, to_term_frob
from .rewrite import EQUAL, FROBENIUS, NOT_EQUAL, decide_eq, normalize, replay_derivation
from .semantics.models import MODELS, model_by_name
from .semantics.morphisms import FinFunction, FinRelation
from .syntax import format_term, format_word
from .theories import builtin_theory

EXIT_OK, EXIT_NOT_EQUAL, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _load(path: str) -> SourceFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e
    return parse(text)


def _theory(src: SourceFile, name: str | None):
    if not name:
        return src.theory
    th = builtin_theory(name, src.signature.extend((), ()))
    if src.rules:
        th = th.with_rules(src.rules)
    return th


def _term(src: SourceFile, name: str | None, what: str = "--term"):
    if not name:
        raise UsageError(f"{what} is required")
    if name not in src.terms:
        raise UsageError(f"no term named {name!r}")
    return src.terms[name]


def _graph_text(theory, g) -> str:
    t = to_term_frob(g) if theory.mode == FROBENIUS else to_term(g)
    return format_term(t)


def cmd_check(args, out) -> int:
    src = _load(args.file)
    out.write(f"signature {src.sig_name or '-'}: {len(src.signature.objects)} objects, ")
    out.write(f"{sum(1 for o in src.signature.operations if o.kind is None)} operations\n")
    out.write(f"theory {src.theory.name}: {len(src.theory.rules)} rules\n")
    for name, t in src.terms.items():
        out.write(f"term {name} : {format_word(t.dom)} -> {format_word(t.cod)}\n")
    for name, steps in src.scripts.items():
        out.write(f"script {name}: {len(steps)} steps\n")
    return EXIT_OK


def cmd_graph(args, out) -> int:
    src = _load(args.file)
    th = _theory(src, args.theory)
    g = th.prepare(from_term(_term(src, args.term)))
    fmt = args.format or "dot"
    if fmt == "dot":
        out.write(to_dot(g, args.term))
    elif fmt == "graph":
        out.write(dump_graph(g))
    else:
        out.write(_graph_text(th, g) + "\n")
    return EXIT_OK


def cmd_eq(args, out) -> int:
    src = _load(args.file)
    th = _theory(src, args.theory)
    a, b = _term(src, args.lhs, "--lhs"), _term(src, args.rhs, "--rhs")
    if (a.dom, a.cod) != (b.dom, b.cod):
        raise UsageError(
            f"boundaries differ: {format_word(a.dom)} -> {format_word(a.cod)} vs {format_word(b.dom)} -> {format_word(b.cod)}"
        )
    verdict = decide_eq(th, from_term(a), from_term(b), budget=args.budget, seed=args.seed)
    out.write(verdict.replace("_", "-") + "\n")
    return {EQUAL: EXIT_OK, NOT_EQUAL: EXIT_NOT_EQUAL}.get(verdict, EXIT_UNKNOWN)


def cmd_normalize(args, out) -> int:
    src = _load(args.file)
    th = _theory(src, args.theory)
    g, steps, capped = normalize(th, from_term(_term(src, args.term)), step_cap=args.cap)
    fmt = args.format or "text"
    if fmt == "dot":
        out.write(to_dot(g, args.term))
    elif fmt == "graph":
        out.write(dump_graph(g))
    else:
        out.write(_graph_text(th, g) + "\n")
    out.write(f"# steps {steps}{' (capped)' if capped else ''}\n")
    return EXIT_UNKNOWN if capped else EXIT_OK


def _model(src: SourceFile, name: str):
    if name not in MODELS:
        raise UsageError(f"unknown model {name!r}; choose from {', '.join(MODELS)}")
    model = model_by_name(name, src.sizes)
    assign = {}
    for op_name, ((kind, data), op) in src.assignments.items():
        m, n = model.word_size(op.arity), model.word_size(op.coarity)
        try:
            assign[op_name] = FinFunction(m, n, data) if kind == "function" else FinRelation(m, n, frozenset(data))
        except ValueError as e:
            raise UsageError(f"assignment for {op_name}: {e}") from e
    try:
        return model.with_assignment(assign)
    except TypeError as e:
        raise UsageError(f"model {name} cannot use these assignments: {e}") from e


def cmd_eval(args, out) -> int:
    src = _load(args.file)
    if not args.model:
        raise UsageError("--model is required")
    model = _model(src, args.model)
    out.write(str(model.eval(_term(src, args.term))) + "\n")
    return EXIT_OK


def cmd_replay(args, out) -> int:
    src = _load(args.file)
    th = _theory(src, args.theory)
    name = args.script
    if not name:
        if len(src.scripts) != 1:
            raise UsageError("--script is required when the file has several scripts")
        name = next(iter(src.scripts))
    if name not in src.scripts:
        raise UsageError(f"no script named {name!r}")
    start = _term(src, args.term or name)
    script = src.scripts[name]
    g = th.prepare(from_term(start))
    out.write(f"start {format_term(start)}\n")
    for k, step in enumerate(script):
        g = replay_derivation(th, g, [step])
        out.write(f"{k + 1}. {step[0]}@{step[1]} : {_graph_text(th, g)}\n")
    if args.target:
        target = th.prepare(from_term(_term(src, args.target, "--target")))
        ok = iso_check(g, target)
        out.write(("reached " if ok else "did not reach ") + args.target + "\n")
        return EXIT_OK if ok else EXIT_NOT_EQUAL
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "graph": cmd_graph,
    "eq": cmd_eq,
    "normalize": cmd_normalize,
    "eval": cmd_eval,
    "replay": cmd_replay,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sdc", description="String diagrams as open hypergraphs.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("file")
    p.add_argument("--term")
    p.add_argument("--lhs")
    p.add_argument("--rhs")
    p.add_argument("--theory")
    p.add_argument("--budget", type=int, default=200)
    p.add_argument("--cap", type=int, default=1000)
    p.add_argument("--model")
    p.add_argument("--format", choices=("dot", "graph", "text"))
    p.add_argument("--script")
    p.add_argument("--target")
    p.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out)
    except DslError as e:
        for d in e.diagnostics:
            err.write(d.format(args.file) + "\n")
        return EXIT_USAGE
    except UsageError as e:
        err.write(f"sdc: {e}\n")
        return EXIT_USAGE
    except DiagramError as e:
        err.write(f"sdc: {type(e).__name__}: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
