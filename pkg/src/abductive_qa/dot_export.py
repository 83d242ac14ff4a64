"""Graphviz DOT rendering of interpretation configurations.

Grounded generators are filled white, ungrounded cues filled red; edges are
labeled `relation (phi)` and negative assertions are dashed. Node order
follows the configuration's generator list, so output is deterministic.
"""

from __future__ import annotations

from abductive_qa.pattern import Configuration, Grounding


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(config: Configuration, name: str = "interpretation") -> str:
    lines = [f"digraph {_quote(name)} {{", "  rankdir=LR;"]
    for i, g in enumerate(config.generators):
        color = "white" if g.grounding is Grounding.GROUNDED else "red"
        label = g.uri.split("/", 1)[-1]
        lines.append(
            f"  g{i} [label={_quote(label)}, style=filled, fillcolor={color}, "
            f"level={_quote(g.level.value)}];"
        )
    for b in config.bonds:
        attrs = [f"label={_quote(f'{b.relation} ({b.phi:g})')}"]
        if b.phi < 0:
            attrs.append("style=dashed")
        lines.append(f"  g{b.from_idx} -> g{b.to_idx} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
