"""Acceptance gate: one test per release criterion, numbered and ordered.

Each criterion is a single test function so the verbose test report carries
exactly one pass/fail line per criterion.  Tolerances: semantic claims are
exact (the ring admits equality without tolerance); the float/exact
agreement bound is 1e-9.
"""

import random

from conftest import data_text, random_diagram
from trichrome.diagram import Color, Deco, Diagram, Flavour, Phase
from trichrome.dsl import parse_diagram, print_diagram
from trichrome.functors import (
    check_roundtrip,
    generator_diagrams,
    roundtrip_image,
    to_unrestricted,
    translate_T,
)
from trichrome.groups import group_report, permutation_order_profile
from trichrome.interp import equal_up_to_scalar, eval_float, evaluate
from trichrome.rules import (
    ScriptStep,
    bounded_search,
    load_library,
    run_script,
    semantically_equal,
    soundness_report,
)
from trichrome.verify import (
    corpus_diagrams,
    minus_projector,
    supplementarity_pair,
    supplementarity_script,
)


def test_criterion_01_two_colour_axiom_soundness_exact():
    report = soundness_report(load_library(Flavour.RG))
    failures = [label for label, ok in report if not ok]
    assert len(report) >= 55  # meta-closure and arity-4 instantiation, ~60
    assert not failures, failures


def test_criterion_02_three_colour_axiom_soundness_exact():
    report = soundness_report(load_library(Flavour.RGB))
    failures = [label for label, ok in report if not ok]
    assert len(report) >= 120  # includes the derivable-equation set
    assert not failures, failures


def test_criterion_03_supplementarity_pair_and_derivation():
    lhs, rhs = supplementarity_pair(Flavour.RG)
    assert equal_up_to_scalar(evaluate(lhs), evaluate(rhs))
    assert equal_up_to_scalar(evaluate(lhs), minus_projector())
    assert equal_up_to_scalar(evaluate(rhs), minus_projector())
    start, _ = supplementarity_pair(Flavour.RGB)
    result = run_script(
        start, supplementarity_script(), load_library(Flavour.RGB), verify=True
    )
    assert result.final.iso_equal(translate_T(rhs))


def test_criterion_04_pair_unreachable_in_two_colours_reachable_in_three():
    lhs, rhs = supplementarity_pair(Flavour.RG)
    assert bounded_search(lhs, rhs, load_library(Flavour.RG), max_depth=5) is None
    start, _ = supplementarity_pair(Flavour.RGB)
    result = run_script(
        start, supplementarity_script(), load_library(Flavour.RGB), verify=True
    )
    assert result.final.iso_equal(translate_T(rhs))


def test_criterion_05_euler_decomposition():
    h = Diagram.wire(Flavour.RG, Deco.H)
    chain = Diagram.chain(
        Flavour.RG,
        [(Color.GREEN, Phase.c4(1)), (Color.RED, Phase.c4(1)), (Color.GREEN, Phase.c4(1))],
    )
    assert equal_up_to_scalar(evaluate(h), evaluate(chain))
    lhs = parse_diagram(data_text("corpus", "rgplus-euler-lhs.rgd"))
    rhs = parse_diagram(data_text("corpus", "rgplus-euler-rhs.rgd"))
    result = run_script(lhs, [ScriptStep("euler-h")], load_library(Flavour.RGPLUS))
    assert len(result.records) == 1
    assert result.final.iso_equal(rhs)


def test_criterion_06_rotations_form_the_octahedral_group():
    report = group_report()
    assert report["order"] == 24
    assert report["quarter_turn_relators"] is True
    assert report["order_profile"] == {1: 1, 2: 9, 3: 8, 4: 6}
    assert report["order_profile"] == permutation_order_profile(4)
    assert report["iso_pair"] is True


def test_criterion_07_translation_preserves_semantics():
    for name, d in generator_diagrams(Flavour.RG).items():
        assert equal_up_to_scalar(evaluate(d), evaluate(translate_T(d))), name
    rng = random.Random(101)
    for _ in range(200):
        d = random_diagram(rng, Flavour.RG, max_nodes=5)
        assert equal_up_to_scalar(evaluate(d), evaluate(translate_T(d)))
    for label, lhs, rhs in load_library(Flavour.RG).soundness_checks():
        assert semantically_equal(translate_T(lhs), translate_T(rhs)), label


def test_criterion_08_roundtrip_scripts_recover_every_generator():
    for flavour in (Flavour.RGB, Flavour.RGPLUS):
        for name in generator_diagrams(flavour):
            report = check_roundtrip(name, flavour)
            assert report.ok, (flavour.value, name, report.error)


def test_criterion_09_dagger_commutes_with_evaluation():
    rng = random.Random(103)
    for flavour in Flavour:
        for _ in range(500):
            d = random_diagram(rng, flavour, max_nodes=5)
            assert equal_up_to_scalar(evaluate(d.dagger()), evaluate(d).dagger())


def test_criterion_10_float_and_exact_evaluations_agree():
    rng = random.Random(107)
    samples = [
        random_diagram(rng, flavour, max_nodes=5)
        for flavour in Flavour
        for _ in range(67)
    ][:200]
    for d in samples:
        assert equal_up_to_scalar(evaluate(d).to_float(), eval_float(d), tol=1e-9)
    # phase relaxation k -> k*pi/2 changes nothing at float precision
    for d in samples:
        if d.flavour is Flavour.RGB:
            continue  # real angles exist only in the two-colour flavours
        relaxed = to_unrestricted(d)
        assert (eval_float(relaxed).data == eval_float(d).data).all()


def test_criterion_11_parser_printer_roundtrip():
    seen = 0
    for d in corpus_diagrams().values():
        _assert_roundtrips(d)
        seen += 1
    for flavour in Flavour:
        for name, gen in generator_diagrams(flavour).items():
            _assert_roundtrips(gen)
            _assert_roundtrips(roundtrip_image(gen))
            seen += 2
        for label, lhs, rhs in load_library(flavour).soundness_checks():
            _assert_roundtrips(lhs)
            _assert_roundtrips(rhs)
            seen += 2
    rng = random.Random(109)
    for _ in range(1000):
        flavour = rng.choice(list(Flavour))
        _assert_roundtrips(random_diagram(rng, flavour, allow_u1=True))
        seen += 1
    assert seen > 1700


def _assert_roundtrips(d: Diagram) -> None:
    text = print_diagram(d)
    back = parse_diagram(text)
    assert back.iso_equal(d)
    assert print_diagram(back) == text
