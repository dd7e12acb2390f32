"""DOT rendering for tree grammars and resolved interaction nets.

Grammar goals become ellipse nodes labeled with the type text, productions
become box nodes labeled with the combinator, with edges goal -> production ->
argument goals.  Nets use round place nodes and rectangular transition nodes;
nested nets render as cluster subgraphs.
"""
from __future__ import annotations

from .gui import GuifLeaf, ResolvedNet
from .inhabitation import TreeGrammar
from .syntax import render_type


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(obj: "TreeGrammar | ResolvedNet") -> str:
    if isinstance(obj, TreeGrammar):
        return _grammar_dot(obj)
    if isinstance(obj, ResolvedNet):
        return _net_dot(obj)
    raise TypeError(f"cannot render {type(obj).__name__} as DOT")


def _grammar_dot(g: TreeGrammar) -> str:
    goals = g.goals()
    ids = {goal: f"g{i}" for i, goal in enumerate(goals)}
    lines = ["digraph grammar {", "  rankdir=TB;"]
    for goal in goals:
        shape = "doublecircle" if goal == g.start else "ellipse"
        lines.append(f"  {ids[goal]} [shape={shape}, label={_quote(render_type(goal.ty))}];")
    counter = 0
    for goal in goals:
        for prod in g.productions[goal]:
            pid = f"p{counter}"
            counter += 1
            lines.append(f"  {pid} [shape=box, label={_quote(prod.comb)}];")
            lines.append(f"  {ids[goal]} -> {pid};")
            for i, arg in enumerate(prod.arg_goals):
                lines.append(f"  {pid} -> {ids[arg]} [label={_quote(str(i + 1))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _net_dot(resolved: ResolvedNet) -> str:
    lines = ["digraph guif_ain {", "  rankdir=LR;"]
    counter = [0]
    _net_body(resolved, lines, counter, indent="  ")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _net_body(resolved: ResolvedNet, lines: list[str], counter: list[int], indent: str) -> dict:
    """Emit nodes and arcs of one net; returns node-name -> DOT id."""
    tag = counter[0]
    counter[0] += 1
    ids: dict[str, str] = {}
    realization = dict(resolved.realization)
    for place in sorted(resolved.net.places):
        ids[place] = f"n{tag}_{len(ids)}"
        lines.append(f"{indent}{ids[place]} [shape=circle, label={_quote(place)}];")
    for t in resolved.net.transitions:
        realized = realization[t.id]
        ids[t.id] = f"n{tag}_{len(ids)}"
        if isinstance(realized, GuifLeaf):
            label = f"{t.label} [{realized.name}]"
            lines.append(f"{indent}{ids[t.id]} [shape=box, label={_quote(label)}];")
        else:
            # nested net: a cluster standing in for the transition
            lines.append(f"{indent}subgraph cluster_{ids[t.id]} {{")
            lines.append(f"{indent}  label={_quote(t.label + ' / ' + realized.net.name)};")
            inner = _net_body(realized, lines, counter, indent + "  ")
            lines.append(f"{indent}}}")
            anchor = next(iter(sorted(inner.values())), None)
            if anchor is None:
                anchor = f"n{tag}_{len(ids)}"
                lines.append(f"{indent}{anchor} [shape=box, label={_quote(t.label)}];")
            ids[t.id] = anchor
    for src, dst in sorted(resolved.net.arcs):
        lines.append(f"{indent}{ids[src]} -> {ids[dst]};")
    return ids
