"""Rule libraries per flavour: concrete rules, meta-closure, soundness.

``load_library`` returns the closed rule set for a flavour: every concrete
rule plus its images under the dagger and under the flavour's sound colour
symmetries (red/green swap in the two-colour flavours; the two 3-cycles in
the three-colour flavour), de-duplicated up to isomorphism of the (lhs, rhs)
pair, plus all parametric families.  ``soundness_report`` re-checks every
rule and family instance against the exact evaluator.
"""

from __future__ import annotations

from functools import lru_cache

from ..diagram import (
    C4_0,
    Color,
    Deco,
    Diagram,
    Edge,
    Flavour,
    Node,
    Phase,
    in_port,
    node_end,
    out_port,
)
from .engine import ConcreteRule, RuleLibrary, semantically_equal
from .families import standard_families

R, G, B = Color.RED, Color.GREEN, Color.BLUE


def _rule(name: str, flavour: Flavour, lhs: Diagram, rhs: Diagram) -> ConcreteRule:
    return ConcreteRule(name, flavour, lhs, rhs)


def _spider(f: Flavour, c: Color, n: int, m: int, k: int = 0, node_id: int = 1) -> Diagram:
    return Diagram.spider(f, c, n, m, Phase.c4(k), node_id=node_id)


def _chain(f: Flavour, specs: list[tuple[Color, int]], in_deco: Deco = Deco.PLAIN) -> Diagram:
    return Diagram.chain(f, [(c, Phase.c4(k)) for c, k in specs], in_deco=in_deco)


def _diamond(f: Flavour, mul_phase: int) -> Diagram:
    """in0,in1 -> red mul -> green comul -> out0,out1."""
    return Diagram.build(
        f, 2, 2,
        [Node(1, R, Phase.c4(mul_phase)), Node(2, G, C4_0)],
        [Edge(in_port(0), node_end(1)), Edge(in_port(1), node_end(1)),
         Edge(node_end(1), node_end(2)),
         Edge(node_end(2), out_port(0)), Edge(node_end(2), out_port(1))],
    )


def _k22(f: Flavour, green_phase: int, red_phase: int) -> Diagram:
    """Complete bipartite 2x2: greens on the inputs, reds on the outputs."""
    return Diagram.build(
        f, 2, 2,
        [Node(1, G, Phase.c4(green_phase)), Node(2, G, Phase.c4(green_phase)),
         Node(3, R, Phase.c4(red_phase)), Node(4, R, Phase.c4(red_phase))],
        [Edge(in_port(0), node_end(1)), Edge(in_port(1), node_end(2)),
         Edge(node_end(1), node_end(3)), Edge(node_end(1), node_end(4)),
         Edge(node_end(2), node_end(3)), Edge(node_end(2), node_end(4)),
         Edge(node_end(3), out_port(0)), Edge(node_end(4), out_port(1))],
    )


def _pendants(f: Flavour, color: Color, phase: int, count: int, outward: bool) -> Diagram:
    nodes = [Node(i + 1, color, Phase.c4(phase)) for i in range(count)]
    if outward:
        edges = [Edge(node_end(i + 1), out_port(i)) for i in range(count)]
        return Diagram.build(f, 0, count, nodes, edges)
    edges = [Edge(in_port(i), node_end(i + 1)) for i in range(count)]
    return Diagram.build(f, count, 0, nodes, edges)


def _two_colour_rules(f: Flavour) -> list[ConcreteRule]:
    rules = [
        _rule("bialgebra", f, _diamond(f, 0), _k22(f, 0, 0)),
        _rule(
            "copy", f,
            Diagram.build(
                f, 0, 2,
                [Node(1, R, C4_0), Node(2, G, C4_0)],
                [Edge(node_end(1), node_end(2)),
                 Edge(node_end(2), out_port(0)), Edge(node_end(2), out_port(1))],
            ),
            _pendants(f, R, 0, 2, outward=True),
        ),
        _rule(
            "pi-copy", f,
            Diagram.build(
                f, 0, 2,
                [Node(1, R, Phase.c4(2)), Node(2, G, C4_0)],
                [Edge(node_end(1), node_end(2)),
                 Edge(node_end(2), out_port(0)), Edge(node_end(2), out_port(1))],
            ),
            _pendants(f, R, 2, 2, outward=True),
        ),
        _rule("shared-cup", f, _spider(f, R, 0, 2), _spider(f, G, 0, 2)),
        _rule(
            "h-involution", f,
            Diagram.build(
                f, 1, 1, [Node(1, G, C4_0)],
                [Edge(in_port(0), node_end(1), Deco.H), Edge(node_end(1), out_port(0), Deco.H)],
            ),
            Diagram.wire(f),
        ),
    ]
    for k in range(4):
        rules.append(
            _rule(
                f"pi-commute-{k}", f,
                _chain(f, [(R, 2), (G, k)]),
                _chain(f, [(G, (4 - k) % 4), (R, 2)]),
            )
        )
    if f is Flavour.RGPLUS:
        rules.append(
            _rule("euler-h", f, Diagram.wire(f, Deco.H), _chain(f, [(G, 1), (R, 1), (G, 1)]))
        )
    return rules


def _three_colour_rules() -> list[ConcreteRule]:
    f = Flavour.RGB
    blue_unit_copy_lhs = Diagram.build(
        f, 0, 2,
        [Node(1, B, C4_0), Node(2, G, C4_0)],
        [Edge(node_end(1), node_end(2)),
         Edge(node_end(2), out_port(0)), Edge(node_end(2), out_port(1))],
    )
    cocopy_lhs = Diagram.build(
        f, 2, 0,
        [Node(1, R, Phase.c4(3)), Node(2, G, C4_0)],
        [Edge(in_port(0), node_end(1)), Edge(in_port(1), node_end(1)),
         Edge(node_end(1), node_end(2))],
    )
    hopf_lhs = Diagram.build(
        f, 1, 1,
        [Node(1, G, C4_0), Node(2, R, Phase.c4(3))],
        [Edge(in_port(0), node_end(1)),
         Edge(node_end(1), node_end(2)), Edge(node_end(1), node_end(2)),
         Edge(node_end(2), out_port(0))],
    )
    hopf_rhs = Diagram.build(
        f, 1, 1,
        [Node(1, G, C4_0), Node(2, B, C4_0)],
        [Edge(in_port(0), node_end(1)), Edge(node_end(2), out_port(0))],
    )
    convenient_rhs = Diagram.build(
        f, 2, 2,
        [Node(1, R, C4_0), Node(2, B, Phase.c4(1))],
        [Edge(in_port(0), node_end(1)), Edge(in_port(1), node_end(1)),
         Edge(node_end(1), node_end(2)),
         Edge(node_end(2), out_port(0)), Edge(node_end(2), out_port(1))],
    )
    two_cw_point = Diagram.build(
        f, 1, 1, [Node(1, G, C4_0)],
        [Edge(in_port(0), node_end(1), Deco.CW), Edge(node_end(1), out_port(0), Deco.CW)],
    )
    cw_ccw_point = Diagram.build(
        f, 1, 1, [Node(1, G, C4_0)],
        [Edge(in_port(0), node_end(1), Deco.CW), Edge(node_end(1), out_port(0), Deco.CCW)],
    )
    dual_same_lhs = Diagram.build(
        f, 1, 1, [Node(1, G, C4_0)],
        [Edge(in_port(0), node_end(1), Deco.DUAL_Y), Edge(node_end(1), out_port(0), Deco.DUAL_Y)],
    )
    dual_hetero_lhs = Diagram.build(
        f, 1, 1,
        [Node(1, G, C4_0), Node(2, G, C4_0)],
        [Edge(in_port(0), node_end(1), Deco.DUAL_Y),
         Edge(node_end(1), node_end(2), Deco.DUAL_C),
         Edge(node_end(2), out_port(0), Deco.DUAL_M)],
    )
    return [
        _rule("copy", f, blue_unit_copy_lhs, _pendants(f, B, 0, 2, outward=True)),
        _rule("cocopy", f, cocopy_lhs, _pendants(f, G, 0, 2, outward=False)),
        _rule("bialgebra", f, _diamond(f, 3), _k22(f, 0, 3)),
        _rule("bialgebra-convenient", f, _k22(f, 0, 0), convenient_rhs),
        _rule("hopf", f, hopf_lhs, hopf_rhs),
        _rule("changer-def-rg", f, Diagram.wire(f, Deco.CW), _chain(f, [(R, 1), (G, 1)])),
        _rule("changer-def-gb", f, Diagram.wire(f, Deco.CW), _chain(f, [(G, 1), (B, 1)])),
        _rule("changer-def-br", f, Diagram.wire(f, Deco.CW), _chain(f, [(B, 1), (R, 1)])),
        _rule("changer-def-ccw", f, Diagram.wire(f, Deco.CCW), two_cw_point),
        _rule("changer-inversion", f, cw_ccw_point, Diagram.wire(f)),
        _rule("dual-def-y", f, Diagram.wire(f, Deco.DUAL_Y), _chain(f, [(R, 2)])),
        _rule("dual-def-c", f, Diagram.wire(f, Deco.DUAL_C), _chain(f, [(G, 2)])),
        _rule("dual-def-m", f, Diagram.wire(f, Deco.DUAL_M), _chain(f, [(B, 2)])),
        _rule("dual-same-annihilate", f, dual_same_lhs, Diagram.wire(f)),
        _rule("dual-hetero-annihilate", f, dual_hetero_lhs, Diagram.wire(f)),
    ]


def _colour_maps(flavour: Flavour) -> list[tuple[str, dict[Color, Color]]]:
    if flavour is Flavour.RGB:
        rot1 = {R: G, G: B, B: R}
        rot2 = {R: B, G: R, B: G}
        return [("rot1", rot1), ("rot2", rot2)]
    return [("flip", {R: G, G: R})]


def close_under_meta(rules: list[ConcreteRule], flavour: Flavour) -> list[ConcreteRule]:
    """Close a concrete rule set under dagger and colour symmetry.

    Images whose (lhs, rhs) pair is isomorphic to an already-kept rule are
    dropped, so the closed set contains each rule shape exactly once.  All
    explicitly named rules are kept before any generated image, so the
    readable names win ties.
    """
    kept: list[ConcreteRule] = []

    def is_new(rule: ConcreteRule) -> bool:
        return not any(
            rule.lhs.iso_equal(old.lhs) and rule.rhs.iso_equal(old.rhs) for old in kept
        )

    for base in rules:
        if is_new(base):
            kept.append(base)
    for base in rules:
        images = [
            base.colour_image(f"{base.name}.{cname}", cmap)
            for cname, cmap in _colour_maps(flavour)
        ]
        images += [img.dagger_image(f"{img.name}.dag") for img in [base, *images]]
        for img in images:
            if is_new(img):
                kept.append(img)
    return kept


@lru_cache(maxsize=None)
def load_library(flavour: Flavour) -> RuleLibrary:
    """The closed rule library for a flavour (cached)."""
    if flavour is Flavour.RGB:
        base = _three_colour_rules()
    else:
        base = _two_colour_rules(flavour)
    lib = RuleLibrary(flavour)
    for rule in close_under_meta(base, flavour):
        lib.add(rule)
    for fam in standard_families(flavour):
        lib.add_family(fam)
    return lib


def soundness_report(library: RuleLibrary) -> list[tuple[str, bool]]:
    """(label, holds) for every concrete rule and family instance."""
    return [
        (label, semantically_equal(lhs, rhs))
        for label, lhs, rhs in library.soundness_checks()
    ]
