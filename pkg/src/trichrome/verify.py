"""Named verification suites over the whole library.

Each suite re-derives a block of checkable claims and reports one row per
check: rule soundness (``axioms``, ``derived``), translation and roundtrip
behaviour (``functors``), the supplementarity pair and its shipped
derivation (``supplementarity``), the Hadamard decomposition (``euler``),
and the rotation-group structure (``group``).  The command-line front end
and the HTTP service both render these reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .cyclo import CycloNum
from .diagram import Color, Deco, Diagram, Flavour, Phase
from .dsl import parse_diagram, parse_script
from .functors import (
    check_roundtrip,
    check_translation_preserves_interp,
    generator_diagrams,
    translate_T,
)
from .groups import check_relators, group_report, SWAP_PRESENTATION, TRANSPOSITIONS
from .interp import Matrix, equal_up_to_scalar, evaluate
from .rules import ScriptError, ScriptStep, load_library, run_script, semantically_equal

__all__ = [
    "CheckResult",
    "SuiteReport",
    "SUITE_NAMES",
    "corpus_diagrams",
    "run_suite",
    "supplementarity_pair",
    "supplementarity_script",
]

SUITE_NAMES = ("axioms", "derived", "functors", "supplementarity", "euler", "group")

# Rules stated as displayed equations of the calculi; everything else in a
# library is a consequence included for rewriting convenience.
_AXIOM_CONCRETE_PREFIXES = (
    "bialgebra.",
    "changer-def-",
    "cocopy",
    "copy",
    "dual-def-",
    "euler-h",
    "h-involution",
    "pi-commute-",
    "pi-copy",
    "shared-cup",
)
_AXIOM_CONCRETE_EXACT = ("bialgebra",)
_AXIOM_FAMILIES = (
    "changer-recolour-bwd",
    "changer-recolour-fwd",
    "h-colour-change",
    "identity-elision",
    "spider-fusion",
    "unit-absorb",
)


@dataclass(frozen=True)
class CheckResult:
    label: str
    ok: bool
    detail: str = ""


@dataclass
class SuiteReport:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def passed(self) -> int:
        return sum(1 for c in self.checks if c.ok)

    def render(self) -> str:
        width = max((len(c.label) for c in self.checks), default=0)
        lines = [f"suite {self.suite}: {self.passed}/{len(self.checks)} passed"]
        for c in self.checks:
            mark = "pass" if c.ok else "FAIL"
            detail = f"  {c.detail}" if c.detail else ""
            lines.append(f"  [{mark}] {c.label:<{width}}{detail}")
        return "\n".join(lines)


def _data_root():
    return resources.files("trichrome") / "data"


def corpus_diagrams() -> dict[str, Diagram]:
    """Every bundled diagram source, parsed; keyed by file stem."""
    out: dict[str, Diagram] = {}
    for entry in sorted(_data_root().joinpath("corpus").iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".rgd"):
            out[entry.name[: -len(".rgd")]] = parse_diagram(entry.read_text(encoding="utf-8"))
    return out


def supplementarity_pair(flavour: Flavour = Flavour.RG) -> tuple[Diagram, Diagram]:
    """The two one-wire diagrams whose equality is not derivable two-coloured."""
    corpus = _data_root() / "corpus"
    lhs = parse_diagram((corpus / f"{flavour.value}-supp-lhs.rgd").read_text(encoding="utf-8"))
    rhs = parse_diagram((corpus / f"{flavour.value}-supp-rhs.rgd").read_text(encoding="utf-8"))
    return lhs, rhs


def supplementarity_script() -> list[ScriptStep]:
    """The shipped derivation connecting the translated supplementarity pair."""
    text = (_data_root() / "scripts" / "supplementarity.rgs").read_text(encoding="utf-8")
    return parse_script(text)


def _max_arity(d: Diagram) -> int:
    return max((d.degree(n) for n in d.nodes), default=0)


def _is_axiom_label(label: str) -> bool:
    name = label.split("[", 1)[0]
    return (
        name in _AXIOM_CONCRETE_EXACT
        or name in _AXIOM_FAMILIES
        or name.startswith(_AXIOM_CONCRETE_PREFIXES)
    )


def _soundness_suite(
    want_axioms: bool, flavours: tuple[Flavour, ...], max_arity: int | None
) -> list[CheckResult]:
    checks: list[CheckResult] = []
    for flavour in flavours:
        lib = load_library(flavour)
        for label, lhs, rhs in lib.soundness_checks():
            if _is_axiom_label(label) != want_axioms:
                continue
            if max_arity is not None and max(_max_arity(lhs), _max_arity(rhs)) > max_arity:
                continue
            ok = semantically_equal(lhs, rhs)
            checks.append(CheckResult(f"{flavour.value}: {label}", ok))
    return checks


def _functor_suite(flavours: tuple[Flavour, ...]) -> list[CheckResult]:
    checks: list[CheckResult] = []
    if Flavour.RG in flavours:
        for name, d in sorted(generator_diagrams(Flavour.RG).items()):
            checks.append(
                CheckResult(f"T preserves {name}", check_translation_preserves_interp(d))
            )
        for label, lhs, rhs in load_library(Flavour.RG).soundness_checks():
            ok = semantically_equal(translate_T(lhs), translate_T(rhs))
            checks.append(CheckResult(f"T maps rule to equality: {label}", ok))
    roundtrip_flavours = [f for f in (Flavour.RGPLUS, Flavour.RGB) if f in flavours or (
        f is Flavour.RGPLUS and Flavour.RG in flavours)]
    for flavour in roundtrip_flavours:
        for name in sorted(generator_diagrams(flavour)):
            report = check_roundtrip(name, flavour)
            detail = report.error or ""
            checks.append(CheckResult(f"roundtrip {flavour.value}/{name}", report.ok, detail))
    return checks


def minus_projector() -> Matrix:
    """The exact rank-one projector onto the minus state, up to scalar."""
    one, neg = CycloNum(1, 0, 0, 0, 0), CycloNum(-1, 0, 0, 0, 0)
    return Matrix(np.array([[one, neg], [neg, one]], dtype=object), exact=True)


def _supplementarity_suite() -> list[CheckResult]:
    checks: list[CheckResult] = []
    lhs, rhs = supplementarity_pair()
    m_lhs, m_rhs = evaluate(lhs), evaluate(rhs)
    checks.append(CheckResult("pair evaluates equal up to scalar", equal_up_to_scalar(m_lhs, m_rhs)))

    minus = minus_projector()
    checks.append(
        CheckResult(
            "both sides proportional to the minus-state projector",
            equal_up_to_scalar(m_lhs, minus) and equal_up_to_scalar(m_rhs, minus),
        )
    )

    t_lhs, t_rhs = supplementarity_pair(Flavour.RGB)
    checks.append(
        CheckResult(
            "translated pair evaluates equal up to scalar",
            equal_up_to_scalar(evaluate(t_lhs), evaluate(t_rhs)),
        )
    )
    steps = supplementarity_script()
    try:
        result = run_script(t_lhs, steps, load_library(Flavour.RGB), verify=True)
        checks.append(CheckResult(f"derivation script replays ({len(steps)} verified steps)", True))
        checks.append(
            CheckResult(
                "derivation endpoint matches the translated right side",
                result.final.iso_equal(t_rhs),
            )
        )
    except ScriptError as exc:
        checks.append(CheckResult("derivation script replays", False, str(exc)))
    return checks


def _euler_suite() -> list[CheckResult]:
    checks: list[CheckResult] = []
    h_wire = Diagram.wire(Flavour.RGPLUS, Deco.H)
    chain = Diagram.chain(
        Flavour.RGPLUS,
        [(Color.GREEN, Phase.c4(1)), (Color.RED, Phase.c4(1)), (Color.GREEN, Phase.c4(1))],
    )
    checks.append(
        CheckResult(
            "hadamard wire equals the three-rotation chain up to scalar",
            equal_up_to_scalar(evaluate(h_wire), evaluate(chain)),
        )
    )
    try:
        result = run_script(
            h_wire, [ScriptStep("euler-h")], load_library(Flavour.RGPLUS), verify=True
        )
        checks.append(CheckResult("euler-h closes the pair in one step", result.final.iso_equal(chain)))
    except ScriptError as exc:
        checks.append(CheckResult("euler-h closes the pair in one step", False, str(exc)))
    return checks


def _group_suite() -> list[CheckResult]:
    report = group_report()
    checks = [
        CheckResult("rotation group has order 24", report["order"] == 24, f"order={report['order']}"),
        CheckResult(
            "order profile matches the symmetric group on four points",
            report["order_profile"] == report["symmetric_profile"],
            f"profile={dict(report['order_profile'])}",
        ),
        CheckResult("quarter-turn relators hold", report["quarter_turn_relators"]),
        CheckResult(
            "transposition relators hold",
            check_relators(SWAP_PRESENTATION, TRANSPOSITIONS),
        ),
        CheckResult("generator maps are mutually inverse", report["iso_pair"]),
    ]
    return checks


def run_suite(
    suite: str,
    flavours: tuple[Flavour, ...] | None = None,
    max_arity: int | None = None,
) -> SuiteReport:
    """Run one named suite and return its report."""
    if suite not in SUITE_NAMES:
        raise ValueError(f"unknown suite {suite!r} (expected one of {', '.join(SUITE_NAMES)})")
    flavours = tuple(Flavour) if flavours is None else flavours
    if suite == "axioms":
        checks = _soundness_suite(True, flavours, max_arity)
    elif suite == "derived":
        checks = _soundness_suite(False, flavours, max_arity)
    elif suite == "functors":
        checks = _functor_suite(flavours)
    elif suite == "supplementarity":
        checks = _supplementarity_suite()
    elif suite == "euler":
        checks = _euler_suite()
    else:
        checks = _group_suite()
    return SuiteReport(suite, checks)
