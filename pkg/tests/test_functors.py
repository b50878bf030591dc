"""Flavour translations: semantics preservation, structure, roundtrips."""

import random

import pytest

from conftest import random_diagram
from trichrome.diagram import Color, Deco, Diagram, DiagramError, Flavour, Phase
from trichrome.functors import (
    check_roundtrip,
    check_translation_preserves_interp,
    generator_diagrams,
    roundtrip_image,
    to_unrestricted,
    translate_S,
    translate_T,
)
from trichrome.interp import equal_up_to_scalar, eval_float, evaluate


def test_generator_catalogue_shapes():
    rg = generator_diagrams(Flavour.RG)
    rgplus = generator_diagrams(Flavour.RGPLUS)
    rgb = generator_diagrams(Flavour.RGB)
    assert len(rg) == 11 and len(rgplus) == 11 and len(rgb) == 20
    assert "wire-h" in rg and "wire-h" in rgplus
    assert {"wire-cw", "wire-ccw", "wire-dualY", "wire-dualC", "wire-dualM"} < set(rgb)
    assert rg["green-mul"].n_in == 2 and rg["green-mul"].n_out == 1
    assert rg["red-counit"].n_in == 1 and rg["red-counit"].n_out == 0


def test_translate_T_flavour_and_structure():
    h = Diagram.wire(Flavour.RG, Deco.H)
    img = translate_T(h)
    img.validate()
    assert img.flavour is Flavour.RGB
    # the Hadamard box becomes the three-rotation chain
    chain = translate_T(
        Diagram.chain(
            Flavour.RG,
            [(Color.GREEN, Phase.c4(1)), (Color.RED, Phase.c4(1)), (Color.GREEN, Phase.c4(1))],
        )
    )
    assert img.iso_equal(chain)


def test_translate_T_red_phase_shift():
    # red spiders pick up (outs - ins) quarter turns to absorb the arity twist
    d = Diagram.spider(Flavour.RG, Color.RED, 2, 1, Phase.c4(1))
    img = translate_T(d)
    assert img.nodes[1].color is Color.RED
    assert img.nodes[1].phase == Phase.c4(0)
    g = Diagram.spider(Flavour.RG, Color.GREEN, 2, 1, Phase.c4(1))
    assert translate_T(g).nodes[1].phase == Phase.c4(1)  # green unchanged


def test_translate_T_preserves_semantics_on_generators():
    for name, d in generator_diagrams(Flavour.RG).items():
        assert check_translation_preserves_interp(d), name


def test_translate_T_rejects_three_colour_input():
    with pytest.raises(DiagramError):
        translate_T(Diagram.wire(Flavour.RGB))


def test_translate_S_flavour_and_semantics():
    for name, d in generator_diagrams(Flavour.RGB).items():
        img = translate_S(d)
        img.validate()
        assert img.flavour is Flavour.RGPLUS
        assert all(n.color is not Color.BLUE for n in img.nodes.values()), name
        assert equal_up_to_scalar(evaluate(d), evaluate(img)), name


def test_translate_S_rejects_two_colour_input():
    with pytest.raises(DiagramError):
        translate_S(Diagram.wire(Flavour.RG))


def test_roundtrip_image_flavours():
    rgb = Diagram.spider(Flavour.RGB, Color.BLUE, 1, 1, Phase.c4(1))
    assert roundtrip_image(rgb).flavour is Flavour.RGB
    rg = Diagram.spider(Flavour.RG, Color.GREEN, 1, 1, Phase.c4(1))
    assert roundtrip_image(rg).flavour is Flavour.RGPLUS


def test_roundtrip_images_preserve_semantics():
    rng = random.Random(41)
    for flavour in (Flavour.RGPLUS, Flavour.RGB):
        for _ in range(20):
            d = random_diagram(rng, flavour, max_nodes=3)
            assert equal_up_to_scalar(evaluate(d), evaluate(roundtrip_image(d)))


def test_shipped_roundtrip_scripts_spot_checks():
    for name in ("blue-counit", "wire-dualM", "green-rot"):
        report = check_roundtrip(name, Flavour.RGB)
        assert report.ok, (name, report.error)
    report = check_roundtrip("wire-h", Flavour.RG)  # resolved in rgplus
    assert report.ok and report.flavour is Flavour.RGPLUS
    assert report.steps >= 1


def test_check_roundtrip_unknown_generator():
    with pytest.raises(DiagramError):
        check_roundtrip("purple-rot", Flavour.RGB)


def test_to_unrestricted():
    d = Diagram.spider(Flavour.RG, Color.GREEN, 1, 1, Phase.c4(3))
    u = to_unrestricted(d)
    u.validate()
    assert u.flavour is Flavour.RGPLUS
    assert u.nodes[1].phase.group == "U1"
    assert (eval_float(u).data == eval_float(d).data).all()
    with pytest.raises(DiagramError):
        to_unrestricted(d, target="C8")


def test_translation_covers_only_quarter_turn_phases():
    # T is defined on the C4 fragment; real angles have no three-colour image
    ok = Diagram.spider(Flavour.RGPLUS, Color.RED, 1, 1, Phase.c4(1))
    assert check_translation_preserves_interp(ok)
    bad = Diagram.spider(Flavour.RGPLUS, Color.RED, 1, 1, Phase.u1(0.77))
    with pytest.raises(DiagramError):
        check_translation_preserves_interp(bad)
