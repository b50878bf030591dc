"""Translations between the two-colour and three-colour flavours.

``translate_T`` (two-colour -> three-colour) keeps green nodes, shifts every
red node's phase by a quarter turn per out-leg minus one per in-leg (the
three-colour red convention carries that twist), and replaces each Hadamard
edge by its Euler chain green(1) . red(1) . green(1).

``translate_S`` (three-colour -> two-colour, unrestricted) first expands
every edge decoration into plain-wired nodes (changer ticks become
red(1)/green(1) chains, dualizers become half-turn rotations), then maps
nodes: green stays, red shifts by a quarter turn per in-leg minus one per
out-leg, and a blue node becomes a red node of the same phase with a
green(3) point on every in-leg and a green(1) point on every out-leg.  The
one exception: a phase-0 blue unit or counit maps to the bare red unit or
counit — the green wrap is provably redundant on those states, and the bare
form is the fixed image.

Both translations preserve the evaluated matrix up to a nonzero scalar, and
their phase shifts cancel: green and red spiders round-trip syntactically,
while Hadamard edges, blue nodes, and decorations round-trip up to a short
shipped rewrite script (see ``check_roundtrip``).

``to_unrestricted`` converts quarter-turn phases to radians without touching
anything else; it is the only crossing between phase groups, and it routes
through ``Phase.radians`` so float evaluation is bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .diagram import (
    Color,
    Deco,
    Diagram,
    DiagramError,
    Edge,
    Flavour,
    Node,
    Phase,
    node_end,
)
from .interp import EvalError, equal_up_to_scalar, eval_float, evaluate

__all__ = [
    "RoundtripReport",
    "check_roundtrip",
    "check_translation_preserves_interp",
    "generator_diagrams",
    "roundtrip_image",
    "translate_S",
    "translate_T",
    "to_unrestricted",
]

_QUARTER = Phase.c4(1).radians()


def _shift_quarters(phase: Phase, quarters: int) -> Phase:
    if phase.group == "C4":
        return Phase.c4(phase.value + quarters)
    return Phase.u1(phase.value + quarters * _QUARTER)


def translate_T(d: Diagram) -> Diagram:
    """Two-colour to three-colour translation (semantics-preserving)."""
    if d.flavour is Flavour.RGB:
        raise DiagramError("translate_T expects a two-colour diagram")
    nodes: dict[int, Node] = {}
    for n, node in d.nodes.items():
        if node.color is Color.RED:
            ins, outs = d.in_degree(n), d.out_degree(n)
            nodes[n] = Node(n, Color.RED, _shift_quarters(node.phase, outs - ins))
        else:
            nodes[n] = Node(n, node.color, node.phase)
    fresh = d.fresh_ids()
    edges: list[Edge] = []
    for e in d.edges:
        if e.deco is Deco.H:
            a, b, c = next(fresh), next(fresh), next(fresh)
            nodes[a] = Node(a, Color.GREEN, Phase.c4(1))
            nodes[b] = Node(b, Color.RED, Phase.c4(1))
            nodes[c] = Node(c, Color.GREEN, Phase.c4(1))
            edges += [
                Edge(e.src, node_end(a)),
                Edge(node_end(a), node_end(b)),
                Edge(node_end(b), node_end(c)),
                Edge(node_end(c), e.dst),
            ]
        else:
            edges.append(e)
    return Diagram(Flavour.RGB, nodes, tuple(edges), d.n_in, d.n_out)


_DECO_CHAINS: dict[Deco, list[tuple[Color, int]]] = {
    Deco.CW: [(Color.RED, 1), (Color.GREEN, 1)],
    Deco.CCW: [(Color.RED, 1), (Color.GREEN, 1), (Color.RED, 1), (Color.GREEN, 1)],
    Deco.DUAL_Y: [(Color.RED, 2)],
    Deco.DUAL_C: [(Color.GREEN, 2)],
    Deco.DUAL_M: [(Color.BLUE, 2)],
}


def _expand_decorations(d: Diagram) -> Diagram:
    """Replace every decorated edge by plain-wired rotation nodes."""
    nodes = dict(d.nodes)
    fresh = d.fresh_ids()
    edges: list[Edge] = []
    for e in d.edges:
        if e.deco is Deco.PLAIN:
            edges.append(e)
            continue
        chain = _DECO_CHAINS[e.deco]
        prev = e.src
        for color, k in chain:
            nid = next(fresh)
            nodes[nid] = Node(nid, color, Phase.c4(k))
            edges.append(Edge(prev, node_end(nid)))
            prev = node_end(nid)
        edges.append(Edge(prev, e.dst))
    return Diagram(d.flavour, nodes, tuple(edges), d.n_in, d.n_out)


def translate_S(d: Diagram) -> Diagram:
    """Three-colour to two-colour translation (semantics-preserving)."""
    if d.flavour is not Flavour.RGB:
        raise DiagramError("translate_S expects a three-colour diagram")
    d = _expand_decorations(d)
    nodes: dict[int, Node] = {}
    wrapped_blue = []
    for n, node in d.nodes.items():
        if node.color is Color.GREEN:
            nodes[n] = Node(n, Color.GREEN, node.phase)
            continue
        ins, outs = d.in_degree(n), d.out_degree(n)
        if node.color is Color.RED:
            nodes[n] = Node(n, Color.RED, _shift_quarters(node.phase, ins - outs))
            continue
        nodes[n] = Node(n, Color.RED, node.phase)
        if not (ins + outs == 1 and node.phase.is_zero()):
            wrapped_blue.append(n)
    fresh = d.fresh_ids()
    blue_set = {node_end(n) for n in wrapped_blue}
    out: list[Edge] = []
    for e in d.edges:  # all edges are plain after expansion
        src, dst = e.src, e.dst
        if src in blue_set:  # out-leg: green(1) point after the node
            w = next(fresh)
            nodes[w] = Node(w, Color.GREEN, Phase.c4(1))
            out.append(Edge(src, node_end(w)))
            src = node_end(w)
        if dst in blue_set:  # in-leg: green(3) point before the node
            w = next(fresh)
            nodes[w] = Node(w, Color.GREEN, Phase.c4(3))
            out.append(Edge(node_end(w), dst))
            dst = node_end(w)
        out.append(Edge(src, dst))
    return Diagram(Flavour.RGPLUS, nodes, tuple(out), d.n_in, d.n_out)


def to_unrestricted(d: Diagram, target: str = "U1") -> Diagram:
    """Convert all quarter-turn phases to radians (phases become U1)."""
    if target != "U1":
        raise DiagramError(f"unsupported phase group target: {target!r}")
    nodes = {
        n: Node(n, node.color, Phase.u1(node.phase.radians()))
        for n, node in d.nodes.items()
    }
    flavour = Flavour.RGPLUS if d.flavour is Flavour.RG else d.flavour
    return Diagram(flavour, nodes, d.edges, d.n_in, d.n_out)


def check_translation_preserves_interp(d: Diagram, tol: float = 1e-9) -> bool:
    """Does the three-colour image of d evaluate to the same map (up to scalar)?"""
    img = translate_T(d)
    try:
        return equal_up_to_scalar(evaluate(d), evaluate(img))
    except (EvalError, OverflowError):
        return equal_up_to_scalar(eval_float(d), eval_float(img), tol=tol)


# ---------------------------------------------------------------------------
# generator catalogues and roundtrips
# ---------------------------------------------------------------------------


def _spider(flavour: Flavour, color: Color, n: int, m: int, k: int) -> Diagram:
    nodes = {1: Node(1, color, Phase.c4(k))}
    edges = [Edge(("in", i), node_end(1)) for i in range(n)]
    edges += [Edge(node_end(1), ("out", j)) for j in range(m)]
    return Diagram(flavour, nodes, tuple(edges), n, m)


def _wire(flavour: Flavour, deco: Deco) -> Diagram:
    return Diagram(flavour, {}, (Edge(("in", 0), ("out", 0), deco),), 1, 1)


_SPIDER_SHAPES = {
    "rot": (1, 1, 1),
    "unit": (0, 1, 0),
    "counit": (1, 0, 0),
    "mul": (2, 1, 0),
    "comul": (1, 2, 0),
}


def generator_diagrams(flavour: Flavour) -> dict[str, Diagram]:
    """The named generators of a flavour, as concrete diagrams.

    Spider generators come in the five shapes rot/unit/counit/mul/comul per
    colour (rot carries phase 1 as its representative).  The two-colour
    flavours add the Hadamard wire; the three-colour flavour adds the five
    decorated wires (derived gates, included for roundtrip coverage).
    """
    colors = (
        (Color.GREEN, Color.RED, Color.BLUE)
        if flavour is Flavour.RGB
        else (Color.GREEN, Color.RED)
    )
    out: dict[str, Diagram] = {}
    for color in colors:
        for shape, (n, m, k) in _SPIDER_SHAPES.items():
            out[f"{color.value}-{shape}"] = _spider(flavour, color, n, m, k)
    if flavour is Flavour.RGB:
        for deco in (Deco.CW, Deco.CCW, Deco.DUAL_Y, Deco.DUAL_C, Deco.DUAL_M):
            out[f"wire-{deco.value}"] = _wire(flavour, deco)
    else:
        out["wire-h"] = _wire(flavour, Deco.H)
    return out


def roundtrip_image(d: Diagram) -> Diagram:
    """The composite translation back into d's own flavour."""
    if d.flavour is Flavour.RGB:
        return translate_T(translate_S(d))
    return translate_S(translate_T(d))


@dataclass
class RoundtripReport:
    """Outcome of replaying a generator's shipped roundtrip script."""

    generator: str
    flavour: Flavour
    steps: int
    semantic_ok: bool
    syntactic_ok: bool
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.semantic_ok and self.syntactic_ok and self.error is None


def _load_roundtrip_script(flavour: Flavour, name: str) -> str:
    root = resources.files("trichrome") / "data" / "roundtrips"
    return (root / flavour.value / f"{name}.rgs").read_text(encoding="utf-8")


def check_roundtrip(name: str, flavour: Flavour = Flavour.RGB) -> RoundtripReport:
    """Replay the shipped script that rewrites a generator's roundtrip image
    back to the generator, with every step semantically verified."""
    from .dsl import parse_script
    from .rules import ScriptError, load_library, run_script

    if flavour is Flavour.RG:
        flavour = Flavour.RGPLUS  # roundtrip images live in the unrestricted flavour
    gens = generator_diagrams(flavour)
    if name not in gens:
        raise DiagramError(f"unknown generator {name!r} for {flavour.value}")
    gen = gens[name]
    image = roundtrip_image(gen)
    steps = parse_script(_load_roundtrip_script(flavour, name))
    try:
        result = run_script(image, steps, load_library(flavour), verify=True)
    except ScriptError as exc:
        return RoundtripReport(name, flavour, len(steps), False, False, str(exc))
    sem = equal_up_to_scalar(evaluate(result.final), evaluate(gen))
    syn = result.final.iso_equal(gen)
    return RoundtripReport(name, flavour, len(steps), sem, syn)
