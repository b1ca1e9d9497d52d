"""CLI invocations over tests/golden/*.sdc with their expected output files."""

from __future__ import annotations

import io
from pathlib import Path

from sdc.cli import main

GOLDEN = Path(__file__).parent / "golden"

# (expected file, argv after the command's file, expected exit code)
CASES = [
    ("relation.finrel-sum.out", ["eval", "relation.sdc", "--term", "rel", "--model", "finrel-sum"], 0),
    ("relation.matrix-bool.out", ["eval", "relation.sdc", "--term", "rel", "--model", "matrix-bool"], 0),
    ("functions.f.out", ["eval", "functions.sdc", "--term", "f", "--model", "finset-sum"], 0),
    ("functions.g.out", ["eval", "functions.sdc", "--term", "g", "--model", "finset-sum"], 0),
    ("functions.into_two.out", ["eval", "functions.sdc", "--term", "into_two", "--model", "finset-sum"], 0),
    ("span.span-sum.out", ["eval", "span.sdc", "--term", "span", "--model", "span-sum"], 0),
    ("span.matrix-nat.out", ["eval", "span.sdc", "--term", "span", "--model", "matrix-nat"], 0),
    ("cospan.cospan.out", ["eval", "cospan.sdc", "--term", "cospan", "--model", "cospan"], 0),
    ("corelation.with_dot.out", ["eval", "corelation.sdc", "--term", "with_dot", "--model", "corelation"], 0),
    ("corelation.without_dot.out", ["eval", "corelation.sdc", "--term", "without_dot", "--model", "corelation"], 0),
    ("corelation.eq.out", ["eq", "corelation.sdc", "--lhs", "with_dot", "--rhs", "without_dot"], 0),
    (
        "corelation.eq-scfrob.out",
        ["eq", "corelation.sdc", "--lhs", "with_dot", "--rhs", "without_dot", "--theory", "scFrob"],
        1,
    ),
    ("diagram_equivalence.eq.out", ["eq", "diagram_equivalence.sdc", "--lhs", "first", "--rhs", "second"], 0),
    ("signature.eq.out", ["eq", "signature.sdc", "--lhs", "t", "--rhs", "crossed"], 1),
]

# semantic values stated in the worked examples
WORKED = [name for name, _, _ in CASES if name.split(".")[0] in ("relation", "functions", "span", "cospan", "corelation")]


def run_cli(argv: list) -> tuple:
    """Run `sdc` on a golden file; returns (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    args = list(argv)
    args[1] = str(GOLDEN / args[1])
    code = main(args, out, err)
    return code, out.getvalue(), err.getvalue().replace(str(GOLDEN) + "/", "")


def expected(name: str) -> str:
    return (GOLDEN / name).read_text(encoding="utf-8")


def check_case(name: str, argv: list, code: int) -> list:
    """Mismatches between a run and its golden file, as readable strings."""
    got_code, out, _ = run_cli(argv)
    problems = []
    if got_code != code:
        problems.append(f"{name}: exit {got_code}, expected {code}")
    if out != expected(name):
        problems.append(f"{name}: got {out!r}, expected {expected(name)!r}")
    return problems
