"""Diagram DSL: parsing, error positions, canonical printing, scripts."""

import math
import random

import pytest

from conftest import data_text, random_diagram, shuffled_copy
from trichrome.diagram import Color, Deco, DiagramError, Edge, Flavour, Phase, node_end, out_port
from trichrome.dsl import (
    ParseError,
    parse,
    parse_diagram,
    parse_script,
    print_diagram,
    print_script,
)
from trichrome.rules import ScriptStep

EXAMPLE = """
# a two-node example
diagram rg {
  inputs a;
  outputs b;
  node x: green 1;
  node y: red 3;
  wire a -> x;
  wire x -> y [h];
  wire y -> b;
}
"""


def test_parse_example():
    d = parse_diagram(EXAMPLE)
    assert d.flavour is Flavour.RG
    assert (d.n_in, d.n_out) == (1, 1)
    assert d.nodes[1].color is Color.GREEN and d.nodes[1].phase == Phase.c4(1)
    assert d.nodes[2].color is Color.RED and d.nodes[2].phase == Phase.c4(3)
    assert Edge(node_end(1), node_end(2), Deco.H) in d.edges
    assert parse(EXAMPLE).iso_equal(d)  # `parse` is an alias


def test_node_ids_follow_declaration_order():
    d = parse_diagram(
        "diagram rg { node z: red 0; node a: green 2; wire z -> a; }"
    )
    assert d.nodes[1].color is Color.RED
    assert d.nodes[2].color is Color.GREEN


def test_parse_real_angle_phase():
    d = parse_diagram(
        "diagram rgplus { outputs o; node n: green rad 1.5; wire n -> o; }"
    )
    assert d.nodes[1].phase.group == "U1"
    assert d.nodes[1].phase.radians() == pytest.approx(1.5)


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as e:
        parse_diagram("diagram purple { }")
    assert "unknown flavour" in str(e.value)
    assert e.value.line == 1

    with pytest.raises(ParseError) as e:
        parse_diagram("diagram rg {\n  node n1: purple 0;\n}")
    assert "unknown colour" in str(e.value)
    assert (e.value.line, e.value.col) == (2, 12)

    with pytest.raises(ParseError, match="unknown decoration"):
        parse_diagram(
            "diagram rg { node a: red 0; node b: red 0; wire a -> b [zz]; }"
        )

    with pytest.raises(ParseError, match="already declared"):
        parse_diagram("diagram rg { inputs a; node a: red 0; wire a -> a; }")

    with pytest.raises(ParseError, match="undeclared name"):
        parse_diagram("diagram rg { wire a -> b; }")

    with pytest.raises(ParseError):
        parse_diagram("diagram rg { node a red 0; }")  # missing colon


def test_structural_errors_are_diagram_errors():
    # parses fine, but the input port is never wired
    with pytest.raises(DiagramError, match="boundary-degree"):
        parse_diagram("diagram rg { inputs a; node n: red 0; }")
    with pytest.raises(DiagramError, match="phase/flavour"):
        parse_diagram("diagram rg { node n: red rad 0.5; }")
    # a known decoration in the wrong flavour is a structural error too
    with pytest.raises(DiagramError, match="deco/flavour"):
        parse_diagram(
            "diagram rg { node a: red 0; node b: red 0; wire a -> b [cw]; }"
        )


def test_print_parse_roundtrip_on_bundled_corpus():
    import importlib.resources as resources

    corpus = resources.files("trichrome") / "data" / "corpus"
    names = sorted(p.name for p in corpus.iterdir() if p.name.endswith(".rgd"))
    assert len(names) >= 40
    for name in names:
        text = data_text("corpus", name)
        d = parse_diagram(text)
        assert print_diagram(d) == text  # shipped files are canonical
        assert parse_diagram(print_diagram(d)).iso_equal(d)


def test_printing_is_label_invariant():
    rng = random.Random(43)
    for flavour in Flavour:
        for _ in range(30):
            d = random_diagram(rng, flavour, allow_u1=True)
            assert print_diagram(shuffled_copy(rng, d)) == print_diagram(d)


def test_print_parse_roundtrip_random():
    rng = random.Random(47)
    for flavour in Flavour:
        for _ in range(40):
            d = random_diagram(rng, flavour, allow_u1=True)
            text = print_diagram(d)
            back = parse_diagram(text)
            assert back.iso_equal(d)
            assert print_diagram(back) == text


def test_real_angles_print_exactly():
    from trichrome.diagram import Diagram, Node

    angle = 2.0 * math.pi * 0.123456789
    d = Diagram.build(
        Flavour.RGPLUS,
        0,
        1,
        [Node(1, Color.GREEN, Phase.u1(angle))],
        [Edge(node_end(1), out_port(0))],
    )
    back = parse_diagram(print_diagram(d))
    assert back.nodes[1].phase.radians() == d.nodes[1].phase.radians()


def test_script_roundtrip():
    text = "# setup\napply copy\napply spider-fusion at node=3, node=5\n"
    steps = parse_script(text)
    assert steps == [ScriptStep("copy"), ScriptStep("spider-fusion", (3, 5))]
    assert parse_script(print_script(steps)) == steps


def test_script_parse_error_positions():
    with pytest.raises(ParseError) as e:
        parse_script("apply copy\nfrobnicate the diagram\n")
    assert e.value.line == 2
    with pytest.raises(ParseError):
        parse_script("apply bad name with spaces at node=1")
