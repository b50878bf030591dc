"""Verification suites: coverage, outcomes, and report rendering."""

import pytest

from trichrome.diagram import Flavour
from trichrome.verify import (
    SUITE_NAMES,
    CheckResult,
    SuiteReport,
    corpus_diagrams,
    run_suite,
    supplementarity_pair,
    supplementarity_script,
)


def test_suite_names():
    assert SUITE_NAMES == (
        "axioms",
        "derived",
        "functors",
        "supplementarity",
        "euler",
        "group",
    )


def test_unknown_suite_rejected():
    with pytest.raises(ValueError, match="unknown suite"):
        run_suite("bogus")


def test_euler_suite_passes():
    report = run_suite("euler")
    assert report.ok and report.passed == len(report.checks) == 2


def test_group_suite_passes():
    report = run_suite("group")
    assert report.ok and report.passed == 5


def test_supplementarity_suite_passes():
    report = run_suite("supplementarity")
    assert report.ok
    labels = [c.label for c in report.checks]
    assert len(labels) == 5 and len(set(labels)) == 5


def test_axiom_suite_respects_filters():
    full = run_suite("axioms", flavours=(Flavour.RG,))
    small = run_suite("axioms", flavours=(Flavour.RG,), max_arity=2)
    assert full.ok and small.ok
    assert 0 < small.passed < full.passed


def test_derived_suite_two_colour_slice():
    report = run_suite("derived", flavours=(Flavour.RG, Flavour.RGPLUS))
    assert report.ok and report.passed > 0


def test_report_rendering():
    good = SuiteReport("demo", [CheckResult("works", True)])
    bad = SuiteReport("demo", [CheckResult("breaks", False, "details here")])
    assert good.ok and not bad.ok
    assert "demo: 1/1 passed" in good.render()
    assert "[pass] works" in good.render()
    assert "0/1 passed" in bad.render()
    assert "[FAIL] breaks" in bad.render() and "details here" in bad.render()


def test_corpus_contains_distinguished_diagrams():
    corpus = corpus_diagrams()
    for key in ("rg-supp-lhs", "rg-supp-rhs", "rgb-supp-lhs", "rgb-supp-rhs",
                "rgplus-euler-lhs", "rgplus-euler-rhs"):
        assert key in corpus


def test_supplementarity_fixtures_load():
    lhs, rhs = supplementarity_pair(Flavour.RG)
    assert lhs.flavour is Flavour.RG and rhs.flavour is Flavour.RG
    assert len(supplementarity_script()) == 18
