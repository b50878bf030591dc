"""Rule engine: libraries, matching, application, scripts, bounded search."""

import pytest

from trichrome.diagram import Color, Diagram, Flavour, Phase
from trichrome.dsl import parse_script
from trichrome.interp import equal_up_to_scalar, evaluate
from trichrome.rules import (
    ScriptError,
    ScriptStep,
    bounded_search,
    load_library,
    run_script,
    semantically_equal,
)
from trichrome.verify import supplementarity_pair, supplementarity_script


def fusion_host() -> Diagram:
    return Diagram.chain(
        Flavour.RG, [(Color.GREEN, Phase.c4(1)), (Color.GREEN, Phase.c4(2))]
    )


def test_library_contents():
    rg = load_library(Flavour.RG)
    rgb = load_library(Flavour.RGB)
    for name in ("copy", "bialgebra", "pi-copy", "shared-cup", "h-involution"):
        assert rg.get(name) is not None
    for name in ("hopf", "changer-def-rg", "dual-def-y", "dual-same-annihilate"):
        assert rgb.get(name) is not None
    assert "spider-fusion" in rg.families and "spider-fusion" in rgb.families
    assert rgb.get("euler-h") is None  # lives in rgplus only
    assert load_library(Flavour.RGPLUS).get("euler-h") is not None
    assert rg.get("no-such-rule") is None


def test_reversed_rules_resolve_with_suffix():
    rg = load_library(Flavour.RG)
    fwd = rg.get("copy")
    rev = rg.get("copy-rev")
    assert rev is not None
    assert rev.lhs.iso_equal(fwd.rhs) and rev.rhs.iso_equal(fwd.lhs)


def test_spider_fusion_adds_phases():
    lib = load_library(Flavour.RG)
    host = fusion_host()
    fam = lib.families["spider-fusion"]
    matches = fam.find_matches(host)
    assert [m.anchor for m in matches] == [(1, 2)]
    out = fam.apply(host, matches[0])
    out.validate()
    assert len(out.nodes) == 1
    assert next(iter(out.nodes.values())).phase == Phase.c4(3)
    assert semantically_equal(host, out)


def test_concrete_rule_application_preserves_semantics():
    lib = load_library(Flavour.RGB)
    rule = lib.get("hopf")
    host = rule.lhs.copy()
    matches = rule.find_matches(host)
    assert matches
    out = rule.apply(host, matches[0])
    out.validate()
    assert out.iso_equal(rule.rhs)
    assert semantically_equal(host, out)


def test_run_script_happy_path():
    lib = load_library(Flavour.RG)
    host = fusion_host()
    result = run_script(host, [ScriptStep("spider-fusion", (1, 2))], lib)
    assert result.start.iso_equal(host)
    assert len(result.records) == 1
    assert result.final.iso_equal(
        Diagram.spider(Flavour.RG, Color.GREEN, 1, 1, Phase.c4(3))
    )


def test_run_script_unknown_rule():
    with pytest.raises(ScriptError, match="step 1: unknown rule"):
        run_script(fusion_host(), [ScriptStep("frobnicate")], load_library(Flavour.RG))


def test_run_script_wrong_anchor():
    with pytest.raises(ScriptError, match="step 1: .* does not match"):
        run_script(
            fusion_host(),
            [ScriptStep("spider-fusion", (1, 7))],
            load_library(Flavour.RG),
        )


def test_run_script_reports_failing_step_index():
    # corrupt the second step of the shipped derivation and replay it
    host = supplementarity_pair(Flavour.RGB)[0]
    steps = supplementarity_script()
    assert len(steps) > 2
    bad = list(steps)
    bad[1] = ScriptStep(bad[1].rule, (1,))
    with pytest.raises(ScriptError, match="step 2"):
        run_script(host, bad, load_library(Flavour.RGB))


def test_script_steps_render_and_parse():
    steps = [ScriptStep("copy"), ScriptStep("spider-fusion", (3, 5))]
    text = "\n".join(s.render() for s in steps)
    assert parse_script(text) == steps


def test_bounded_search_trivial_and_one_step():
    lib = load_library(Flavour.RG)
    host = fusion_host()
    assert bounded_search(host, host.copy(), lib, max_depth=2) == []
    goal = Diagram.spider(Flavour.RG, Color.GREEN, 1, 1, Phase.c4(3))
    steps = bounded_search(host, goal, lib, max_depth=2)
    assert steps is not None and len(steps) == 1
    assert steps[0].anchor is not None  # replayable as-is
    replay = run_script(host, steps, lib)
    assert replay.final.iso_equal(goal)


def test_bounded_search_respects_budget():
    lhs, rhs = supplementarity_pair(Flavour.RG)
    assert bounded_search(lhs, rhs, load_library(Flavour.RG), max_depth=1) is None


def test_every_concrete_rule_is_direction_sound():
    # spot product: applying any concrete rule at its own lhs yields its rhs
    for flavour in (Flavour.RG, Flavour.RGB):
        lib = load_library(flavour)
        for name in ("copy", "bialgebra"):
            rule = lib.get(name)
            out = rule.apply(rule.lhs, rule.find_matches(rule.lhs)[0])
            assert out.iso_equal(rule.rhs)


def test_soundness_checks_cover_families_up_to_arity():
    lib = load_library(Flavour.RG)
    labels = [label for label, _, _ in lib.soundness_checks()]
    assert any(label.startswith("spider-fusion[") for label in labels)
    assert len(labels) == len(set(labels))  # no duplicate check labels


def test_supplementarity_pair_semantics():
    lhs, rhs = supplementarity_pair(Flavour.RG)
    assert equal_up_to_scalar(evaluate(lhs), evaluate(rhs))
