"""Parametric rewrite-rule families.

Each family is indexed by colours, arities and phases and implements its own
matcher and surgery.  Every phase law used here was pinned against the exact
evaluator over a grid of arities (0..3 legs each way) and all quarter-turn
phases; ``instance_hosts`` re-derives a representative slice of that grid so
the library soundness check re-verifies the laws on every run.

Colour cycle conventions (three-colour flavour): ``NEXT`` is the rotation
red -> green -> blue -> red.  Unit-absorption pairs a node with pendants of
its ``PREV`` colour; state-copy pairs a hub with pendants of its ``NEXT``
colour; the two-colour expansions wrap a node's legs in its PREV (variant a)
or NEXT (variant b) colour.
"""

from __future__ import annotations

from ..diagram import (
    C4_0,
    DUALIZERS,
    PAIR_DUAL,
    Color,
    Deco,
    Diagram,
    Edge,
    Flavour,
    Node,
    Phase,
    in_port,
    is_node_end,
    node_end,
    out_port,
)
from .engine import Match, ParametricRule, RuleError

NEXT = {Color.RED: Color.GREEN, Color.GREEN: Color.BLUE, Color.BLUE: Color.RED}
PREV = {v: k for k, v in NEXT.items()}

# The dualizer that equals the half-turn rotation of each colour.
OWN_DUAL = {Color.RED: Deco.DUAL_Y, Color.GREEN: Deco.DUAL_C, Color.BLUE: Deco.DUAL_M}

_CHANGER_POWER = {Deco.PLAIN: 0, Deco.CW: 1, Deco.CCW: 2}
_POWER_CHANGER = {0: Deco.PLAIN, 1: Deco.CW, 2: Deco.CCW}


def _is_c4(phase: Phase) -> bool:
    return phase.group == "C4"


def _rgb_colors(flavour: Flavour) -> tuple[Color, ...]:
    if flavour is Flavour.RGB:
        return (Color.RED, Color.GREEN, Color.BLUE)
    return (Color.RED, Color.GREEN)


def _pendant_host(
    flavour: Flavour,
    color: Color,
    n: int,
    m: int,
    th: int,
    pend_color: Color,
    pend_phase: int,
    inward: bool,
) -> Diagram:
    nodes = [Node(1, color, Phase.c4(th)), Node(2, pend_color, Phase.c4(pend_phase))]
    edges = [Edge(in_port(i), node_end(1)) for i in range(n)]
    edges += [Edge(node_end(1), out_port(j)) for j in range(m)]
    edges.append(Edge(node_end(2), node_end(1)) if inward else Edge(node_end(1), node_end(2)))
    return Diagram.build(flavour, n, m, nodes, edges)


class SpiderFusion(ParametricRule):
    """Fuse two same-colour nodes joined by at least one plain edge.

    Phases add; plain connecting edges vanish; decorated connecting edges
    become self-loops on the merged node (which keeps the smaller id).
    """

    name = "spider-fusion"
    search_safe = True

    def __init__(self, flavour: Flavour) -> None:
        self.flavour = flavour

    def find_matches(self, host: Diagram) -> list[Match]:
        out = []
        ids = sorted(host.nodes)
        for i, a in enumerate(ids):
            for b in ids[i + 1 :]:
                na, nb = host.nodes[a], host.nodes[b]
                if na.color != nb.color or na.phase.group != nb.phase.group:
                    continue
                ea, eb = node_end(a), node_end(b)
                if any(
                    e.deco == Deco.PLAIN and {e.src, e.dst} == {ea, eb}
                    for e in host.edges
                ):
                    out.append(Match(self.name, (a, b)))
        return out

    def apply(self, host: Diagram, match: Match) -> Diagram:
        a, b = match.anchor
        ea, eb = node_end(a), node_end(b)
        edges = []
        for e in host.edges:
            if {e.src, e.dst} == {ea, eb}:
                if e.deco == Deco.PLAIN:
                    continue
                edges.append(Edge(ea, ea, e.deco))
                continue
            src = ea if e.src == eb else e.src
            dst = ea if e.dst == eb else e.dst
            edges.append(Edge(src, dst, e.deco))
        nodes = {n: node for n, node in host.nodes.items() if n != b}
        merged = host.nodes[a].phase + host.nodes[b].phase
        nodes[a] = Node(a, host.nodes[a].color, merged)
        return Diagram(host.flavour, nodes, tuple(edges), host.n_in, host.n_out)

    def instance_hosts(self):
        f = self.flavour
        deco = Deco.H if f is not Flavour.RGB else Deco.CW
        out = []
        for c in _rgb_colors(f):
            for th1, th2, conns in ((1, 2, 1), (3, 3, 2), (0, 1, 1)):
                nodes = [Node(1, c, Phase.c4(th1)), Node(2, c, Phase.c4(th2))]
                edges = [Edge(in_port(0), node_end(1)), Edge(node_end(2), out_port(0))]
                edges += [Edge(node_end(1), node_end(2)) for _ in range(conns)]
                host = Diagram.build(f, 1, 1, nodes, edges)
                out.append((f"{c.value}-{th1}{th2}-{conns}", host, (1, 2)))
            # one bent connection plus a decorated edge that becomes a self-loop
            nodes = [Node(1, c, Phase.c4(1)), Node(2, c, Phase.c4(0))]
            edges = [
                Edge(in_port(0), node_end(1)),
                Edge(node_end(1), node_end(2)),
                Edge(node_end(2), node_end(1), deco),
                Edge(node_end(2), out_port(0)),
            ]
            out.append((f"{c.value}-selfloop", Diagram.build(f, 1, 1, nodes, edges), (1, 2)))
        return out


class IdentityElision(ParametricRule):
    """Remove a phase-0 node with exactly two legs, splicing its edges.

    At least one of the two edges must be plain; the surviving edge carries
    the other decoration.  In the three-colour flavour the node must have one
    leg in and one leg out (legs bent the same way change a neighbour's
    in/out split, which is only sound in the two-colour flavours).
    """

    name = "identity-elision"
    search_safe = True

    def __init__(self, flavour: Flavour) -> None:
        self.flavour = flavour

    def find_matches(self, host: Diagram) -> list[Match]:
        out = []
        for p in sorted(host.nodes):
            if not host.nodes[p].phase.is_zero():
                continue
            ends = host.incident(p)
            if len(ends) != 2 or ends[0][0] == ends[1][0]:
                continue
            (i1, r1), (i2, r2) = ends
            e1, e2 = host.edges[i1], host.edges[i2]
            if e1.deco != Deco.PLAIN and e2.deco != Deco.PLAIN:
                continue
            if host.flavour is Flavour.RGB and {r1, r2} != {"src", "dst"}:
                continue
            out.append(Match(self.name, (p,)))
        return out

    def apply(self, host: Diagram, match: Match) -> Diagram:
        (p,) = match.anchor
        (i1, r1), (i2, r2) = host.incident(p)
        e1, e2 = host.edges[i1], host.edges[i2]
        deco = e1.deco if e2.deco == Deco.PLAIN else e2.deco
        if {r1, r2} == {"src", "dst"}:
            incoming = e1 if r1 == "dst" else e2
            outgoing = e2 if r1 == "dst" else e1
            spliced = Edge(incoming.src, outgoing.dst, deco)
        elif r1 == "src":  # both legs leave the point: it was a cup
            spliced = Edge(e1.dst, e2.dst, deco)
        else:  # both legs enter the point: it was a cap
            spliced = Edge(e1.src, e2.src, deco)
        edges = [e for i, e in enumerate(host.edges) if i not in (i1, i2)]
        edges.append(spliced)
        nodes = {n: node for n, node in host.nodes.items() if n != p}
        return Diagram(host.flavour, nodes, tuple(edges), host.n_in, host.n_out)

    def instance_hosts(self):
        f = self.flavour
        deco = Deco.H if f is not Flavour.RGB else Deco.DUAL_Y
        out = []
        for c in _rgb_colors(f):
            host = Diagram.build(
                f, 1, 1, [Node(1, c, C4_0)],
                [Edge(in_port(0), node_end(1)), Edge(node_end(1), out_port(0), deco)],
            )
            out.append((f"{c.value}-straight", host, (1,)))
        if f is not Flavour.RGB:
            cap = Diagram.build(
                f, 2, 0, [Node(1, Color.GREEN, C4_0)],
                [Edge(in_port(0), node_end(1)), Edge(in_port(1), node_end(1), Deco.H)],
            )
            out.append(("bent-cap", cap, (1,)))
            cup = Diagram.build(
                f, 0, 2, [Node(1, Color.RED, C4_0)],
                [Edge(node_end(1), out_port(0)), Edge(node_end(1), out_port(1))],
            )
            out.append(("bent-cup", cup, (1,)))
        return out


class HColourToggle(ParametricRule):
    """Two-colour flavours: flip a node's colour and toggle Hadamard on each leg."""

    name = "h-colour-change"
    search_safe = True

    def __init__(self, flavour: Flavour) -> None:
        if flavour is Flavour.RGB:
            raise RuleError("h-colour-change only exists in the two-colour flavours")
        self.flavour = flavour

    def find_matches(self, host: Diagram) -> list[Match]:
        return [Match(self.name, (n,)) for n in sorted(host.nodes)]

    def apply(self, host: Diagram, match: Match) -> Diagram:
        (x,) = match.anchor
        ex = node_end(x)
        toggle = {Deco.PLAIN: Deco.H, Deco.H: Deco.PLAIN}
        edges = []
        for e in host.edges:
            hits = (e.src == ex) + (e.dst == ex)
            edges.append(Edge(e.src, e.dst, toggle[e.deco] if hits % 2 else e.deco))
        node = host.nodes[x]
        flip = Color.RED if node.color is Color.GREEN else Color.GREEN
        nodes = dict(host.nodes)
        nodes[x] = Node(x, flip, node.phase)
        return Diagram(host.flavour, nodes, tuple(edges), host.n_in, host.n_out)

    def instance_hosts(self):
        f = self.flavour
        out = []
        for c, n, m, th in ((Color.GREEN, 2, 1, 1), (Color.RED, 1, 2, 3), (Color.GREEN, 0, 2, 0)):
            out.append((f"{c.value}-{n}{m}-{th}", Diagram.spider(f, c, n, m, Phase.c4(th)), (1,)))
        # an existing Hadamard leg toggles off; a self-loop is left alone
        host = Diagram.build(
            f, 1, 1, [Node(1, Color.GREEN, Phase.c4(2))],
            [Edge(in_port(0), node_end(1), Deco.H), Edge(node_end(1), node_end(1)),
             Edge(node_end(1), out_port(0))],
        )
        out.append(("h-leg-selfloop", host, (1,)))
        return out


class ChangerRecolour(ParametricRule):
    """Recolour a node one step around the colour cycle using changer ticks.

    Moving with the cycle (red->green->blue->red) composes a ccw tick onto
    every in-leg and a cw tick onto every out-leg; moving against it does the
    opposite.  The node's phase is unchanged.  All legs must carry plain or
    changer decorations.
    """

    search_safe = True

    def __init__(self, flavour: Flavour, forward: bool) -> None:
        if flavour is not Flavour.RGB:
            raise RuleError("changer recolouring only exists in the three-colour flavour")
        self.flavour = flavour
        self.forward = forward
        self.name = "changer-recolour-fwd" if forward else "changer-recolour-bwd"

    def find_matches(self, host: Diagram) -> list[Match]:
        out = []
        allowed = {Deco.PLAIN, Deco.CW, Deco.CCW}
        for x in sorted(host.nodes):
            if all(host.edges[i].deco in allowed for i, _ in host.incident(x)):
                out.append(Match(self.name, (x,)))
        return out

    def apply(self, host: Diagram, match: Match) -> Diagram:
        (x,) = match.anchor
        ex = node_end(x)
        a_in, a_out = (2, 1) if self.forward else (1, 2)
        edges = []
        for e in host.edges:
            if e.src != ex and e.dst != ex:
                edges.append(e)
                continue
            power = _CHANGER_POWER[e.deco]
            if e.dst == ex:
                power += a_in
            if e.src == ex:
                power += a_out
            edges.append(Edge(e.src, e.dst, _POWER_CHANGER[power % 3]))
        node = host.nodes[x]
        target = NEXT[node.color] if self.forward else PREV[node.color]
        nodes = dict(host.nodes)
        nodes[x] = Node(x, target, node.phase)
        return Diagram(host.flavour, nodes, tuple(edges), host.n_in, host.n_out)

    def instance_hosts(self):
        out = []
        for c in (Color.RED, Color.GREEN, Color.BLUE):
            for n, m, th in ((1, 1, 1), (2, 1, 0), (1, 2, 3)):
                host = Diagram.spider(Flavour.RGB, c, n, m, Phase.c4(th))
                out.append((f"{c.value}-{n}{m}-{th}", host, (1,)))
        # legs that already carry changers compose mod 3; self-loops cancel
        host = Diagram.build(
            Flavour.RGB, 1, 1, [Node(1, Color.GREEN, Phase.c4(1))],
            [Edge(in_port(0), node_end(1), Deco.CW), Edge(node_end(1), node_end(1), Deco.CCW),
             Edge(node_end(1), out_port(0), Deco.CCW)],
        )
        out.append(("changer-legs", host, (1,)))
        # an untouched context edge may carry any decoration
        host = Diagram.build(
            Flavour.RGB, 2, 2,
            [Node(1, Color.GREEN, Phase.c4(1)), Node(2, Color.RED, Phase.c4(0))],
            [Edge(in_port(0), node_end(1)), Edge(node_end(1), out_port(0)),
             Edge(in_port(1), node_end(2), Deco.DUAL_Y), Edge(node_end(2), out_port(1))],
        )
        out.append(("dual-context", host, (1,)))
        return out


class ArrowInversion(ParametricRule):
    """Flip the direction of a node-node edge.

    Same-colour edges flip freely when plain or dualizer-decorated (those
    matrices are symmetric up to scalar, and half-turn twists cancel in
    pairs).  Edges between different colours trade a plain decoration for the
    dualizer of the colour pair and vice versa.
    """

    name = "arrow-inversion"
    search_safe = True

    def __init__(self, flavour: Flavour) -> None:
        if flavour is not Flavour.RGB:
            raise RuleError("arrow inversion only exists in the three-colour flavour")
        self.flavour = flavour

    def _edge_action(self, host: Diagram, e: Edge) -> Deco | None:
        if not (is_node_end(e.src) and is_node_end(e.dst)) or e.src == e.dst:
            return None
        c1 = host.nodes[e.src[1]].color
        c2 = host.nodes[e.dst[1]].color
        if c1 == c2:
            if e.deco == Deco.PLAIN or e.deco in DUALIZERS:
                return e.deco
            return None
        pair_dual = PAIR_DUAL[frozenset({c1, c2})]
        if e.deco == Deco.PLAIN:
            return pair_dual
        if e.deco == pair_dual:
            return Deco.PLAIN
        return None

    def find_matches(self, host: Diagram) -> list[Match]:
        out = []
        for i, e in enumerate(host.edges):
            if self._edge_action(host, e) is not None:
                anchor = tuple(sorted({e.src[1], e.dst[1]}))
                out.append(Match(self.name, anchor, (i,)))
        return sorted(out, key=Match.sort_key)

    def apply(self, host: Diagram, match: Match) -> Diagram:
        (i,) = match.data
        e = host.edges[i]
        new_deco = self._edge_action(host, e)
        if new_deco is None:
            raise RuleError("edge is not invertible")
        edges = list(host.edges)
        edges[i] = Edge(e.dst, e.src, new_deco)
        return Diagram(host.flavour, dict(host.nodes), tuple(edges), host.n_in, host.n_out)

    def instance_hosts(self):
        out = []
        combos = [
            (Color.GREEN, Color.GREEN, Deco.PLAIN),
            (Color.RED, Color.RED, Deco.PLAIN),
            (Color.RED, Color.RED, Deco.DUAL_C),
            (Color.BLUE, Color.BLUE, Deco.DUAL_M),
            (Color.RED, Color.GREEN, Deco.PLAIN),
            (Color.RED, Color.GREEN, Deco.DUAL_Y),
            (Color.GREEN, Color.BLUE, Deco.PLAIN),
            (Color.RED, Color.BLUE, Deco.DUAL_M),
        ]
        for idx, (c1, c2, deco) in enumerate(combos):
            nodes = [Node(1, c1, Phase.c4(1)), Node(2, c2, Phase.c4(2))]
            edges = [
                Edge(in_port(0), node_end(1)),
                Edge(node_end(1), node_end(2), deco),
                Edge(node_end(2), out_port(0)),
            ]
            host = Diagram.build(Flavour.RGB, 1, 1, nodes, edges)
            out.append((f"{c1.value}-{c2.value}-{deco.value}-{idx}", host, (1, 2)))
        return out


class DualThroughNode(ParametricRule):
    """Strip the same dualizer from every leg of a node, adjusting its phase.

    With theta the old phase and L = in-degree + out-degree:

    * the node colour's own half-turn dualizer: theta' = theta + 2L
    * the PREV colour's dualizer:               theta' = -theta
    * the NEXT colour's dualizer:               theta' = -theta + 2L
    """

    name = "dual-through-node"
    search_safe = True

    def __init__(self, flavour: Flavour) -> None:
        if flavour is not Flavour.RGB:
            raise RuleError("dualizers only exist in the three-colour flavour")
        self.flavour = flavour

    def find_matches(self, host: Diagram) -> list[Match]:
        out = []
        for x in sorted(host.nodes):
            if not _is_c4(host.nodes[x].phase):
                continue
            ends = host.incident(x)
            if not ends:
                continue
            decos = {host.edges[i].deco for i, _ in ends}
            if len(decos) != 1 or next(iter(decos)) not in DUALIZERS:
                continue
            if any(host.edges[i].src == host.edges[i].dst for i, _ in ends):
                continue
            out.append(Match(self.name, (x,)))
        return out

    def apply(self, host: Diagram, match: Match) -> Diagram:
        (x,) = match.anchor
        node = host.nodes[x]
        ends = host.incident(x)
        deco = host.edges[ends[0][0]].deco
        L = len(ends)
        th = node.phase.value
        if deco == OWN_DUAL[node.color]:
            new = th + 2 * L
        elif deco == OWN_DUAL[PREV[node.color]]:
            new = -th
        else:
            new = -th + 2 * L
        edges = list(host.edges)
        for i, _ in ends:
            edges[i] = Edge(edges[i].src, edges[i].dst, Deco.PLAIN)
        nodes = dict(host.nodes)
        nodes[x] = Node(x, node.color, Phase.c4(new))
        return Diagram(host.flavour, nodes, tuple(edges), host.n_in, host.n_out)

    def instance_hosts(self):
        out = []
        for c in (Color.RED, Color.GREEN, Color.BLUE):
            for deco in DUALIZERS:
                for n, m, th in ((1, 1, 1), (1, 2, 3), (2, 1, 0)):
                    nodes = [Node(1, c, Phase.c4(th))]
                    edges = [Edge(in_port(i), node_end(1), deco) for i in range(n)]
                    edges += [Edge(node_end(1), out_port(j), deco) for j in range(m)]
                    host = Diagram.build(Flavour.RGB, n, m, nodes, edges)
                    out.append((f"{c.value}-{deco.value}-{n}{m}-{th}", host, (1,)))
        return out


class TwoColourExpand(ParametricRule):
    """Rewrite a node as a hub of another colour with wrapped legs.

    Variant a: wrap colour PREV(c) with phase 3 on in-legs and 1 on
    out-legs, hub colour NEXT(c) with phase theta + out-degree - in-degree.
    Variant b: wrap colour NEXT(c) with phase 1 on in-legs and 3 on
    out-legs, hub colour PREV(c) with phase theta - out-degree + in-degree.
    """

    search_safe = False  # grows the diagram

    def __init__(self, flavour: Flavour, variant: str) -> None:
        if flavour is not Flavour.RGB:
            raise RuleError("two-colour expansion only exists in the three-colour flavour")
        if variant not in ("a", "b"):
            raise RuleError("variant must be 'a' or 'b'")
        self.flavour = flavour
        self.variant = variant
        self.name = f"two-colour-expand-{variant}"

    def find_matches(self, host: Diagram) -> list[Match]:
        return [
            Match(self.name, (x,))
            for x in sorted(host.nodes)
            if _is_c4(host.nodes[x].phase)
        ]

    def apply(self, host: Diagram, match: Match) -> Diagram:
        (x,) = match.anchor
        node = host.nodes[x]
        ends = host.incident(x)
        n = sum(1 for _, role in ends if role == "dst")
        m = len(ends) - n
        if self.variant == "a":
            wrap, hub = PREV[node.color], NEXT[node.color]
            w_in, w_out, hub_th = 3, 1, node.phase.value + m - n
        else:
            wrap, hub = NEXT[node.color], PREV[node.color]
            w_in, w_out, hub_th = 1, 3, node.phase.value - m + n
        fresh = host.fresh_ids()
        nodes = dict(host.nodes)
        nodes[x] = Node(x, hub, Phase.c4(hub_th))
        edges = list(host.edges)
        ex = node_end(x)
        for i, role in ends:
            w = next(fresh)
            ph = w_in if role == "dst" else w_out
            nodes[w] = Node(w, wrap, Phase.c4(ph))
            e = edges[i]
            if role == "dst":
                edges[i] = Edge(e.src, node_end(w), e.deco)
                edges.append(Edge(node_end(w), ex))
            else:
                edges[i] = Edge(node_end(w), e.dst, e.deco)
                edges.append(Edge(ex, node_end(w)))
        return Diagram(host.flavour, nodes, tuple(edges), host.n_in, host.n_out)

    def instance_hosts(self):
        out = []
        for c in (Color.RED, Color.GREEN, Color.BLUE):
            for n, m, th in ((1, 1, 1), (1, 2, 0), (2, 1, 3), (0, 1, 2)):
                host = Diagram.spider(Flavour.RGB, c, n, m, Phase.c4(th))
                out.append((f"{c.value}-{n}{m}-{th}", host, (1,)))
        decorated = Diagram.build(
            Flavour.RGB, 1, 1, [Node(1, Color.GREEN, Phase.c4(1))],
            [Edge(in_port(0), node_end(1), Deco.DUAL_Y), Edge(node_end(1), out_port(0))],
        )
        out.append(("decorated-leg", decorated, (1,)))
        return out


class TwoColourCollapse(ParametricRule):
    """Inverse of the two-colour expansion: collapse a fully wrapped hub.

    Variant a matches a hub whose every leg passes through a 2-legged
    NEXT(hub)-coloured wrap node (phase 3 inbound, 1 outbound, all edges
    plain) and replaces the cluster by a PREV(hub) node with phase
    hub-phase - out-degree + in-degree.  Variant b is the mirror: PREV(hub)
    wraps (phase 1 inbound, 3 outbound) collapse to a NEXT(hub) node with
    phase hub-phase + out-degree - in-degree.
    """

    search_safe = True

    def __init__(self, flavour: Flavour, variant: str) -> None:
        if flavour is not Flavour.RGB:
            raise RuleError("two-colour collapse only exists in the three-colour flavour")
        if variant not in ("a", "b"):
            raise RuleError("variant must be 'a' or 'b'")
        self.flavour = flavour
        self.variant = variant
        self.name = f"two-colour-collapse-{variant}"

    def _wrap_spec(self, hub_color: Color) -> tuple[Color, int, int]:
        if self.variant == "a":
            return NEXT[hub_color], 3, 1
        return PREV[hub_color], 1, 3

    def _match_data(self, host: Diagram, x: int) -> tuple | None:
        node = host.nodes[x]
        if not _is_c4(node.phase):
            return None
        wrap_color, w_in, w_out = self._wrap_spec(node.color)
        ends = host.incident(x)
        if not ends:
            return None
        wraps = []
        seen = {x}
        for i, role in ends:
            e = host.edges[i]
            if e.deco != Deco.PLAIN or e.src == e.dst:
                return None
            other = e.src if role == "dst" else e.dst
            if not is_node_end(other):
                return None
            w = other[1]
            if w in seen:
                return None
            seen.add(w)
            wn = host.nodes[w]
            want_phase = w_in if role == "dst" else w_out
            if wn.color != wrap_color or wn.phase != Phase.c4(want_phase):
                return None
            wends = host.incident(w)
            if len(wends) != 2:
                return None
            (j1, s1), (j2, s2) = wends
            outer = j1 if j2 == i else j2 if j1 == i else None
            if outer is None:
                return None
            oe = host.edges[outer]
            if oe.deco != Deco.PLAIN:
                return None
            # orientation: context -> wrap -> hub for in-legs, reverse for out
            if role == "dst":
                if not (e.src == node_end(w) and oe.dst == node_end(w)):
                    return None
            else:
                if not (e.dst == node_end(w) and oe.src == node_end(w)):
                    return None
            wraps.append((i, outer, w, role))
        return tuple(wraps)

    def find_matches(self, host: Diagram) -> list[Match]:
        out = []
        for x in sorted(host.nodes):
            data = self._match_data(host, x)
            if data is not None:
                out.append(Match(self.name, (x,), data))
        return out

    def apply(self, host: Diagram, match: Match) -> Diagram:
        (x,) = match.anchor
        wraps = match.data
        node = host.nodes[x]
        n = sum(1 for *_, role in wraps if role == "dst")
        m = len(wraps) - n
        if self.variant == "a":
            color = PREV[node.color]
            th = node.phase.value - m + n
        else:
            color = NEXT[node.color]
            th = node.phase.value + m - n
        drop_edges = set()
        drop_nodes = {w for _, _, w, _ in wraps}
        edges = list(host.edges)
        ex = node_end(x)
        for inner, outer, w, role in wraps:
            drop_edges.add(inner)
            oe = edges[outer]
            if role == "dst":
                edges[outer] = Edge(oe.src, ex, oe.deco)
            else:
                edges[outer] = Edge(ex, oe.dst, oe.deco)
        final = [e for i, e in enumerate(edges) if i not in drop_edges]
        nodes = {k: v for k, v in host.nodes.items() if k not in drop_nodes}
        nodes[x] = Node(x, color, Phase.c4(th))
        return Diagram(host.flavour, nodes, tuple(final), host.n_in, host.n_out)

    def instance_hosts(self):
        expander = TwoColourExpand(Flavour.RGB, self.variant)
        out = []
        for c in (Color.RED, Color.GREEN, Color.BLUE):
            for n, m, th in ((1, 1, 2), (1, 2, 1), (2, 0, 0)):
                plainspider = Diagram.spider(Flavour.RGB, c, n, m, Phase.c4(th))
                host = expander.apply(plainspider, Match(expander.name, (1,)))
                out.append((f"{c.value}-{n}{m}-{th}", host, (1,)))
        return out


class UnitAbsorb(ParametricRule):
    """Absorb a single-leg PREV-coloured pendant with phase 0 or 2.

    The pendant and its plain edge vanish; the node's phase shifts by +1 for
    an inward phase-0 or outward phase-2 pendant and by -1 otherwise.
    """

    name = "unit-absorb"
    search_safe = True

    def __init__(self, flavour: Flavour) -> None:
        if flavour is not Flavour.RGB:
            raise RuleError("unit absorption only exists in the three-colour flavour")
        self.flavour = flavour

    def _pendants(self, host: Diagram, x: int) -> list[tuple[int, int, str]]:
        node = host.nodes[x]
        out = []
        for i, role in host.incident(x):
            e = host.edges[i]
            if e.deco != Deco.PLAIN or e.src == e.dst:
                continue
            other = e.src if role == "dst" else e.dst
            if not is_node_end(other):
                continue
            p = other[1]
            pn = host.nodes[p]
            if (
                p != x
                and host.degree(p) == 1
                and pn.color == PREV[node.color]
                and pn.phase in (Phase.c4(0), Phase.c4(2))
            ):
                out.append((i, p, "in" if role == "dst" else "out"))
        return out

    def find_matches(self, host: Diagram) -> list[Match]:
        out = []
        for x in sorted(host.nodes):
            if not _is_c4(host.nodes[x].phase):
                continue
            for i, p, direction in self._pendants(host, x):
                out.append(Match(self.name, tuple(sorted((x, p))), (x, p, i, direction)))
        return sorted(out, key=Match.sort_key)

    def apply(self, host: Diagram, match: Match) -> Diagram:
        x, p, i, direction = match.data
        pend_phase = host.nodes[p].phase.value
        shift = 1 if (direction == "in") == (pend_phase == 0) else -1
        edges = tuple(e for j, e in enumerate(host.edges) if j != i)
        nodes = {k: v for k, v in host.nodes.items() if k != p}
        node = host.nodes[x]
        nodes[x] = Node(x, node.color, Phase.c4(node.phase.value + shift))
        return Diagram(host.flavour, nodes, edges, host.n_in, host.n_out)

    def instance_hosts(self):
        out = []
        for c in (Color.RED, Color.GREEN, Color.BLUE):
            for pend, inward, n, m, th in (
                (0, True, 1, 1, 0),
                (2, True, 1, 2, 1),
                (0, False, 2, 1, 3),
                (2, False, 1, 1, 2),
            ):
                host = _pendant_host(Flavour.RGB, c, n, m, th, PREV[c], pend, inward)
                label = f"{c.value}-p{pend}-{'in' if inward else 'out'}"
                out.append((label, host, (1, 2)))
        return out


class UnitDetach(ParametricRule):
    """Inverse of unit absorption: split off a phase-0 inward pendant."""

    name = "unit-detach"
    search_safe = False  # grows the diagram

    def __init__(self, flavour: Flavour) -> None:
        if flavour is not Flavour.RGB:
            raise RuleError("unit detachment only exists in the three-colour flavour")
        self.flavour = flavour

    def find_matches(self, host: Diagram) -> list[Match]:
        return [
            Match(self.name, (x,))
            for x in sorted(host.nodes)
            if _is_c4(host.nodes[x].phase)
        ]

    def apply(self, host: Diagram, match: Match) -> Diagram:
        (x,) = match.anchor
        node = host.nodes[x]
        p = next(host.fresh_ids())
        nodes = dict(host.nodes)
        nodes[x] = Node(x, node.color, Phase.c4(node.phase.value - 1))
        nodes[p] = Node(p, PREV[node.color], C4_0)
        edges = host.edges + (Edge(node_end(p), node_end(x)),)
        return Diagram(host.flavour, nodes, edges, host.n_in, host.n_out)

    def instance_hosts(self):
        out = []
        for c, th in ((Color.GREEN, 0), (Color.RED, 2), (Color.BLUE, 1)):
            out.append((f"{c.value}-{th}", Diagram.spider(Flavour.RGB, c, 1, 1, Phase.c4(th)), (1,)))
        return out


class StateCopy(ParametricRule):
    """Copy a basis-state pendant through a hub of the copying colour.

    A single-leg pendant of colour NEXT(hub) with phase 0 or 2 (a basis
    state of the hub's diagonal basis) deletes the hub and reappears, with
    the same phase, on every other leg.  Edge decorations and directions on
    those legs are untouched.  In the two-colour flavours red and green copy
    each other's basis pendants.
    """

    name = "state-copy"
    search_safe = True

    def __init__(self, flavour: Flavour) -> None:
        self.flavour = flavour

    def _copies(self, hub_color: Color) -> Color:
        if self.flavour is Flavour.RGB:
            return NEXT[hub_color]
        return Color.RED if hub_color is Color.GREEN else Color.GREEN

    def find_matches(self, host: Diagram) -> list[Match]:
        out = []
        for x in sorted(host.nodes):
            hub = host.nodes[x]
            for i, role in host.incident(x):
                e = host.edges[i]
                if e.deco != Deco.PLAIN or e.src == e.dst:
                    continue
                other = e.src if role == "dst" else e.dst
                if not is_node_end(other):
                    continue
                p = other[1]
                pn = host.nodes[p]
                if (
                    host.degree(p) == 1
                    and pn.color == self._copies(hub.color)
                    and pn.phase in (Phase.c4(0), Phase.c4(2))
                ):
                    out.append(Match(self.name, tuple(sorted((x, p))), (x, p, i)))
        return sorted(out, key=Match.sort_key)

    def apply(self, host: Diagram, match: Match) -> Diagram:
        x, p, i = match.data
        pend = host.nodes[p]
        fresh = host.fresh_ids()
        nodes = {k: v for k, v in host.nodes.items() if k not in (x, p)}
        ex = node_end(x)
        edges = []
        for j, e in enumerate(host.edges):
            if j == i:
                continue
            src, dst = e.src, e.dst
            if src == ex:
                w = next(fresh)
                nodes[w] = Node(w, pend.color, pend.phase)
                src = node_end(w)
            if dst == ex:
                w = next(fresh)
                nodes[w] = Node(w, pend.color, pend.phase)
                dst = node_end(w)
            edges.append(Edge(src, dst, e.deco))
        return Diagram(host.flavour, nodes, tuple(edges), host.n_in, host.n_out)

    def instance_hosts(self):
        f = self.flavour
        hubs = (Color.RED, Color.GREEN, Color.BLUE) if f is Flavour.RGB else (Color.RED, Color.GREEN)
        out = []
        for h in hubs:
            w = self._copies(h)
            for pend, inward, n, m, th in ((0, True, 1, 1, 1), (2, True, 0, 2, 0), (0, False, 2, 1, 3)):
                host = _pendant_host(f, h, n, m, th, w, pend, inward)
                out.append((f"{h.value}-p{pend}-{'in' if inward else 'out'}", host, (1, 2)))
        # decorated remaining leg: the pendant slides out through the decoration
        deco = Deco.DUAL_C if f is Flavour.RGB else Deco.H
        hub, w = (Color.BLUE, Color.RED) if f is Flavour.RGB else (Color.GREEN, Color.RED)
        host = Diagram.build(
            f, 0, 1,
            [Node(1, hub, Phase.c4(2)), Node(2, w, Phase.c4(2))],
            [Edge(node_end(2), node_end(1)), Edge(node_end(1), out_port(0), deco)],
        )
        out.append(("decorated-leg", host, (1, 2)))
        return out


class PhaseDetach(ParametricRule):
    """Move a node's phase onto a fresh same-colour pendant."""

    name = "phase-detach"
    search_safe = False  # grows the diagram

    def __init__(self, flavour: Flavour) -> None:
        self.flavour = flavour

    def find_matches(self, host: Diagram) -> list[Match]:
        return [
            Match(self.name, (x,))
            for x in sorted(host.nodes)
            if not host.nodes[x].phase.is_zero()
        ]

    def apply(self, host: Diagram, match: Match) -> Diagram:
        (x,) = match.anchor
        node = host.nodes[x]
        p = next(host.fresh_ids())
        nodes = dict(host.nodes)
        nodes[x] = Node(x, node.color, Phase(node.phase.group, 0))
        nodes[p] = Node(p, node.color, node.phase)
        edges = host.edges + (Edge(node_end(x), node_end(p)),)
        return Diagram(host.flavour, nodes, edges, host.n_in, host.n_out)

    def instance_hosts(self):
        f = self.flavour
        out = []
        for c in _rgb_colors(f):
            out.append((f"{c.value}-12", Diagram.spider(f, c, 1, 2, Phase.c4(3)), (1,)))
            out.append((f"{c.value}-21", Diagram.spider(f, c, 2, 1, Phase.c4(1)), (1,)))
        return out


class PointInsert(ParametricRule):
    """Split an edge by inserting a phase-0 green identity point.

    The decoration stays on the first half; the second half is plain.
    """

    name = "point-insert"
    search_safe = False  # grows the diagram

    def __init__(self, flavour: Flavour) -> None:
        self.flavour = flavour

    def find_matches(self, host: Diagram) -> list[Match]:
        out = []
        for i, e in enumerate(host.edges):
            anchor = tuple(sorted({ep[1] for ep in (e.src, e.dst) if is_node_end(ep)}))
            out.append(Match(self.name, anchor, (i,)))
        return sorted(out, key=Match.sort_key)

    def apply(self, host: Diagram, match: Match) -> Diagram:
        (i,) = match.data
        e = host.edges[i]
        p = next(host.fresh_ids())
        nodes = dict(host.nodes)
        nodes[p] = Node(p, Color.GREEN, C4_0)
        edges = list(host.edges)
        edges[i] = Edge(e.src, node_end(p), e.deco)
        edges.append(Edge(node_end(p), e.dst))
        return Diagram(host.flavour, nodes, tuple(edges), host.n_in, host.n_out)

    def instance_hosts(self):
        f = self.flavour
        deco = Deco.H if f is not Flavour.RGB else Deco.CW
        out = [
            ("wire", Diagram.wire(f), ()),
            ("deco-wire", Diagram.wire(f, deco), ()),
        ]
        host = Diagram.spider(f, Color.RED, 1, 1, Phase.c4(1))
        out.append(("before-node", host, (1,)))
        return out


class ScalarDrop(ParametricRule):
    """Delete a connected component that does not touch the boundary."""

    name = "scalar-drop"
    search_safe = True

    def __init__(self, flavour: Flavour) -> None:
        self.flavour = flavour

    def find_matches(self, host: Diagram) -> list[Match]:
        out = []
        for nodes, touches in host.components():
            if not touches:
                out.append(Match(self.name, tuple(sorted(nodes))))
        return sorted(out, key=Match.sort_key)

    def apply(self, host: Diagram, match: Match) -> Diagram:
        drop = set(match.anchor)
        nodes = {k: v for k, v in host.nodes.items() if k not in drop}
        edges = tuple(
            e
            for e in host.edges
            if not any(is_node_end(ep) and ep[1] in drop for ep in (e.src, e.dst))
        )
        return Diagram(host.flavour, nodes, edges, host.n_in, host.n_out)

    def instance_hosts(self):
        f = self.flavour
        wire = Diagram.wire(f)
        floating = Diagram.build(
            f, 0, 0,
            [Node(1, Color.RED, Phase.c4(1)), Node(2, Color.GREEN, C4_0)],
            [Edge(node_end(1), node_end(2)), Edge(node_end(2), node_end(1))],
        )
        host = wire.tensor(floating)
        return [("loop-scalar", host, (1, 2))]


def standard_families(flavour: Flavour) -> list[ParametricRule]:
    """All rule families available in the given flavour."""
    fams: list[ParametricRule] = [
        SpiderFusion(flavour),
        IdentityElision(flavour),
        StateCopy(flavour),
        PhaseDetach(flavour),
        PointInsert(flavour),
        ScalarDrop(flavour),
    ]
    if flavour is Flavour.RGB:
        fams += [
            ChangerRecolour(flavour, True),
            ChangerRecolour(flavour, False),
            ArrowInversion(flavour),
            DualThroughNode(flavour),
            TwoColourExpand(flavour, "a"),
            TwoColourExpand(flavour, "b"),
            TwoColourCollapse(flavour, "a"),
            TwoColourCollapse(flavour, "b"),
            UnitAbsorb(flavour),
            UnitDetach(flavour),
        ]
    else:
        fams.append(HColourToggle(flavour))
    return fams
