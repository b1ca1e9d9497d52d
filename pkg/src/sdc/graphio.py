"""Text and DOT serialization of open hypergraphs."""

from __future__ import annotations

from .hypergraph import Hyperedge, OpenHypergraph
from .syntax import OperationDecl, Signature


def dump_graph(g: OpenHypergraph) -> str:
    """Line-based format: one `node`, `edge`, `left`, `right` record per line."""
    lines = [f"nodes {len(g.nodes)}"]
    for i, s in enumerate(g.nodes):
        lines.append(f"node {i} {s}")
    for e in g.edges:
        src = " ".join(map(str, e.sources))
        tgt = " ".join(map(str, e.targets))
        lines.append(f"edge {e.op.name} : {src} -> {tgt}".replace(":  ->", ": ->").rstrip())
    lines.append(("left " + " ".join(map(str, g.left))).rstrip())
    lines.append(("right " + " ".join(map(str, g.right))).rstrip())
    return "\n".join(lines) + "\n"


def load_graph(text: str, sig: Signature | None = None) -> OpenHypergraph:
    nodes, edges, left, right = {}, [], (), ()
    pending = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "nodes":
            continue
        if head == "node":
            i, s = rest.split()
            nodes[int(i)] = s
        elif head == "edge":
            name, _, ends = rest.partition(":")
            src, _, tgt = ends.partition("->")
            pending.append((name.strip(), tuple(map(int, src.split())), tuple(map(int, tgt.split()))))
        elif head == "left":
            left = tuple(map(int, rest.split()))
        elif head == "right":
            right = tuple(map(int, rest.split()))
        else:
            raise ValueError(f"unknown record {head!r}")
    if sorted(nodes) != list(range(len(nodes))):
        raise ValueError("node ids must be 0..n-1")
    sorts = tuple(nodes[i] for i in range(len(nodes)))
    for name, src, tgt in pending:
        if sig is not None and sig.has_op(name):
            op = sig.op(name)
        else:
            op = OperationDecl(name, tuple(sorts[i] for i in src), tuple(sorts[i] for i in tgt))
        edges.append(Hyperedge(op, src, tgt))
    return OpenHypergraph(sorts, tuple(edges), left, right)


def to_dot(g: OpenHypergraph, name: str = "diagram") -> str:
    out = [f"digraph {name} {{", "  rankdir=LR;", "  node [fontname=\"Helvetica\"];"]
    for i, s in enumerate(g.nodes):
        out.append(f'  n{i} [shape=point, width=0.12, tooltip="{s}"];')
    for k, e in enumerate(g.edges):
        out.append(f'  e{k} [shape=box, label="{e.op.name}"];')
        for p, s in enumerate(e.sources):
            out.append(f'  n{s} -> e{k} [headlabel="{p}", arrowhead=none];')
        for p, t in enumerate(e.targets):
            out.append(f'  e{k} -> n{t} [taillabel="{p}", arrowhead=none];')
    for i, v in enumerate(g.left):
        out.append(f'  L{i} [shape=plaintext, fontcolor=blue, label="L{i}"];')
        out.append(f"  L{i} -> n{v} [color=blue, style=dashed, arrowhead=none];")
    for i, v in enumerate(g.right):
        out.append(f'  R{i} [shape=plaintext, fontcolor=red, label="R{i}"];')
        out.append(f"  n{v} -> R{i} [color=red, style=dashed, arrowhead=none];")
    out.append("}")
    return "\n".join(out) + "\n"
