"""DOT export: styling, determinism, and structural validity."""

from __future__ import annotations

import re

from abductive_qa.contextualize import build_interpretation
from abductive_qa.dot_export import export_dot
from abductive_qa.pattern import Level, make_bond, make_configuration
from abductive_qa.pattern import Generator, Grounding

NODE_RE = re.compile(r'^\s*g(\d+) \[label="([^"]*)", style=filled, fillcolor=(\w+)')
EDGE_RE = re.compile(r"^\s*g(\d+) -> g(\d+) \[label=\"([^\"]*)\"(, style=dashed)?\];")


def parse_dot(text: str):
    """Tiny structural parser: digraph header, node lines, edge lines."""
    lines = text.strip().splitlines()
    assert lines[0].startswith("digraph ") and lines[0].endswith("{")
    assert lines[-1] == "}"
    nodes, edges = {}, []
    for line in lines[1:-1]:
        if not line.strip() or line.strip().startswith("rankdir"):
            continue
        m = NODE_RE.match(line)
        if m:
            nodes[int(m.group(1))] = (m.group(2), m.group(3))
            continue
        m = EDGE_RE.match(line)
        assert m, f"unparsable DOT line: {line!r}"
        edges.append((int(m.group(1)), int(m.group(2)), m.group(3), bool(m.group(4))))
    return nodes, edges


def test_empty_configuration_valid_digraph():
    config = make_configuration([], [])
    nodes, edges = parse_dot(export_dot(config))
    assert nodes == {} and edges == []


def test_piano_configuration_styles(piano_network):
    net = piano_network
    evidence = [net.concept_id("en/woman"), net.concept_id("en/piano")]
    hypothesis = [net.concept_id("en/music")]
    config = build_interpretation(net, evidence, hypothesis)
    nodes, edges = parse_dot(export_dot(config))

    assert len(nodes) == 5
    by_label = {label: color for label, color in nodes.values()}
    assert by_label["woman"] == "white"
    assert by_label["piano"] == "white"
    assert by_label["music"] == "white"
    assert by_label["person"] == "red"
    assert by_label["instrument"] == "red"
    assert len(edges) == 5
    labels = {label for _, _, label, _ in edges}
    assert "UsedFor (1)" in labels and "IsA (2)" in labels


def test_negative_phi_dashed():
    generators = [
        Generator(0, "en/hot", Grounding.GROUNDED, Level.EVIDENCE),
        Generator(1, "en/cold", Grounding.GROUNDED, Level.HYPOTHESIS),
    ]
    config = make_configuration(generators, [make_bond(0, 1, "Antonym", -2.5)])
    _, edges = parse_dot(export_dot(config))
    assert edges == [(0, 1, "Antonym (-2.5)", True)]


def test_deterministic_output(piano_network):
    net = piano_network
    evidence = [net.concept_id("en/woman"), net.concept_id("en/piano")]
    config = build_interpretation(net, evidence, [net.concept_id("en/music")])
    assert export_dot(config) == export_dot(config)


def test_label_quoting():
    generators = [
        Generator(0, 'en/say_"hi"', Grounding.GROUNDED, Level.EVIDENCE),
        Generator(1, "en/x", Grounding.GROUNDED, Level.HYPOTHESIS),
    ]
    config = make_configuration(generators, [])
    text = export_dot(config)
    assert '\\"hi\\"' in text
