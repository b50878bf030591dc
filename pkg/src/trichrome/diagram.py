"""Open directed multigraph diagrams with coloured, phased nodes.

A diagram has ordered input and output boundary ports, nodes carrying a
colour (red/green/blue) and a phase (quarter-turn C4 integer or U(1) radians),
and a multiset of directed edges between node/port endpoints.  Edges may carry
a decoration: a Hadamard box in the two-colour flavours, or a colour-changer /
dualizer tick in the three-colour flavour.  Self-loops and parallel edges are
allowed.

Flavours:

* ``rg``      -- red/green nodes, plain or Hadamard edges.
* ``rgplus``  -- same signature as ``rg`` (the extra Euler rule lives in the
                 rule library, not in the data model).
* ``rgb``     -- red/green/blue nodes, plain/changer/dualizer edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from itertools import count

TWO_PI = 2.0 * math.pi


class Flavour(str, Enum):
    RG = "rg"
    RGPLUS = "rgplus"
    RGB = "rgb"


class Color(str, Enum):
    RED = "red"
    GREEN = "green"
    BLUE = "blue"


class Deco(str, Enum):
    PLAIN = "plain"
    H = "h"
    CW = "cw"
    CCW = "ccw"
    DUAL_Y = "dualY"
    DUAL_C = "dualC"
    DUAL_M = "dualM"


DUALIZERS = (Deco.DUAL_Y, Deco.DUAL_C, Deco.DUAL_M)
CHANGERS = (Deco.CW, Deco.CCW)

# Which unordered colour pair each dualizer mediates.
DUAL_PAIR = {
    Deco.DUAL_Y: frozenset({Color.RED, Color.GREEN}),
    Deco.DUAL_C: frozenset({Color.GREEN, Color.BLUE}),
    Deco.DUAL_M: frozenset({Color.RED, Color.BLUE}),
}
PAIR_DUAL = {pair: deco for deco, pair in DUAL_PAIR.items()}

_ALLOWED_DECOS = {
    Flavour.RG: {Deco.PLAIN, Deco.H},
    Flavour.RGPLUS: {Deco.PLAIN, Deco.H},
    Flavour.RGB: {Deco.PLAIN, Deco.CW, Deco.CCW, *DUALIZERS},
}
_ALLOWED_COLORS = {
    Flavour.RG: {Color.RED, Color.GREEN},
    Flavour.RGPLUS: {Color.RED, Color.GREEN},
    Flavour.RGB: {Color.RED, Color.GREEN, Color.BLUE},
}


class DiagramError(ValueError):
    """Raised when a diagram (or an operation on one) is malformed."""


@dataclass(frozen=True, slots=True)
class Phase:
    """A node phase: an integer quarter turn (C4) or an angle in radians (U1)."""

    group: str
    value: int | float

    def __post_init__(self) -> None:
        if self.group == "C4":
            object.__setattr__(self, "value", int(self.value) % 4)
        elif self.group == "U1":
            object.__setattr__(self, "value", float(self.value) % TWO_PI)
        else:
            raise DiagramError(f"unknown phase group {self.group!r}")

    @staticmethod
    def c4(k: int) -> "Phase":
        return Phase("C4", k)

    @staticmethod
    def u1(angle: float) -> "Phase":
        return Phase("U1", angle)

    def is_zero(self) -> bool:
        return self.value == 0

    def __add__(self, other: "Phase") -> "Phase":
        if self.group != other.group:
            raise DiagramError("cannot add phases from different groups")
        return Phase(self.group, self.value + other.value)

    def __neg__(self) -> "Phase":
        return Phase(self.group, -self.value)

    def radians(self) -> float:
        """The angle in radians; the single C4 -> U(1) conversion point."""
        if self.group == "C4":
            return self.value * (math.pi / 2)
        return self.value


C4_0 = Phase.c4(0)
C4_1 = Phase.c4(1)
C4_2 = Phase.c4(2)
C4_3 = Phase.c4(3)


# Endpoints are ("node", id), ("in", index) or ("out", index) tuples.
Endpoint = tuple[str, int]


def node_end(node_id: int) -> Endpoint:
    return ("node", node_id)


def in_port(index: int) -> Endpoint:
    return ("in", index)


def out_port(index: int) -> Endpoint:
    return ("out", index)


def is_node_end(e: Endpoint) -> bool:
    return e[0] == "node"


_END_ORDER = {"in": 0, "node": 1, "out": 2}
_DECO_ORDER = {deco: i for i, deco in enumerate(Deco)}


def endpoint_key(e: Endpoint) -> tuple[int, int]:
    return (_END_ORDER[e[0]], e[1])


@dataclass(frozen=True, slots=True)
class Edge:
    src: Endpoint
    dst: Endpoint
    deco: Deco = Deco.PLAIN

    def reversed(self) -> "Edge":
        return Edge(self.dst, self.src, self.deco)

    def key(self) -> tuple:
        return (endpoint_key(self.src), endpoint_key(self.dst), _DECO_ORDER[self.deco])

    def touches(self, node_id: int) -> bool:
        ne = node_end(node_id)
        return self.src == ne or self.dst == ne


@dataclass(frozen=True, slots=True)
class Node:
    id: int
    color: Color
    phase: Phase


@dataclass
class Diagram:
    flavour: Flavour
    nodes: dict[int, Node] = field(default_factory=dict)
    edges: tuple[Edge, ...] = ()
    n_in: int = 0
    n_out: int = 0

    def __post_init__(self) -> None:
        self.edges = tuple(self.edges)
        self.nodes = dict(self.nodes)

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def build(
        flavour: Flavour,
        n_in: int,
        n_out: int,
        nodes: list[Node] | None = None,
        edges: list[Edge] | None = None,
    ) -> "Diagram":
        node_map = {n.id: n for n in (nodes or [])}
        return Diagram(flavour, node_map, tuple(edges or ()), n_in, n_out)

    @staticmethod
    def spider(
        flavour: Flavour,
        color: Color,
        n_in: int,
        n_out: int,
        phase: Phase = C4_0,
        node_id: int = 1,
    ) -> "Diagram":
        """A single node wired straight to the boundary."""
        edges = [Edge(in_port(i), node_end(node_id)) for i in range(n_in)]
        edges += [Edge(node_end(node_id), out_port(j)) for j in range(n_out)]
        return Diagram.build(flavour, n_in, n_out, [Node(node_id, color, phase)], edges)

    @staticmethod
    def wire(flavour: Flavour, deco: Deco = Deco.PLAIN) -> "Diagram":
        return Diagram.build(flavour, 1, 1, [], [Edge(in_port(0), out_port(0), deco)])

    @staticmethod
    def identity(flavour: Flavour, n: int) -> "Diagram":
        edges = [Edge(in_port(i), out_port(i)) for i in range(n)]
        return Diagram.build(flavour, n, n, [], edges)

    @staticmethod
    def permutation(flavour: Flavour, targets: list[int]) -> "Diagram":
        """Wires input i to output targets[i]."""
        edges = [Edge(in_port(i), out_port(t)) for i, t in enumerate(targets)]
        return Diagram.build(flavour, len(targets), len(targets), [], edges)

    @staticmethod
    def empty(flavour: Flavour) -> "Diagram":
        return Diagram.build(flavour, 0, 0)

    @staticmethod
    def chain(
        flavour: Flavour,
        specs: list[tuple[Color, Phase]],
        in_deco: Deco = Deco.PLAIN,
    ) -> "Diagram":
        """A 1-in-1-out chain of 2-legged nodes joined by plain edges."""
        nodes = [Node(i + 1, c, p) for i, (c, p) in enumerate(specs)]
        edges = [Edge(in_port(0), node_end(1), in_deco)]
        edges += [Edge(node_end(i), node_end(i + 1)) for i in range(1, len(specs))]
        edges.append(Edge(node_end(len(specs)), out_port(0)))
        return Diagram.build(flavour, 1, 1, nodes, edges)

    def copy(self) -> "Diagram":
        return Diagram(self.flavour, dict(self.nodes), self.edges, self.n_in, self.n_out)

    # -- basic queries ---------------------------------------------------------

    def sorted_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges, key=Edge.key))

    def max_node_id(self) -> int:
        return max(self.nodes, default=0)

    def fresh_ids(self) -> "count[int]":
        return count(self.max_node_id() + 1)

    def incident(self, node_id: int) -> list[tuple[int, str]]:
        """(edge index, 'src'|'dst') pairs for every edge end at the node."""
        ne = node_end(node_id)
        out = []
        for i, e in enumerate(self.edges):
            if e.src == ne:
                out.append((i, "src"))
            if e.dst == ne:
                out.append((i, "dst"))
        return out

    def degree(self, node_id: int) -> int:
        return len(self.incident(node_id))

    def in_degree(self, node_id: int) -> int:
        ne = node_end(node_id)
        return sum(1 for e in self.edges if e.dst == ne)

    def out_degree(self, node_id: int) -> int:
        ne = node_end(node_id)
        return sum(1 for e in self.edges if e.src == ne)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Diagram):
            return NotImplemented
        return (
            self.flavour == other.flavour
            and self.n_in == other.n_in
            and self.n_out == other.n_out
            and self.nodes == other.nodes
            and self.sorted_edges() == other.sorted_edges()
        )

    # -- validation -------------------------------------------------------------

    def validate(self) -> None:
        """Raise DiagramError unless the diagram is well formed."""
        seen_ports: dict[Endpoint, int] = {}
        for e in self.edges:
            if e.deco not in _ALLOWED_DECOS[self.flavour]:
                raise DiagramError(
                    f"deco/flavour: decoration {e.deco.value} not allowed in "
                    f"flavour {self.flavour.value}"
                )
            for ep in (e.src, e.dst):
                kind, idx = ep
                if kind == "node":
                    if idx not in self.nodes:
                        raise DiagramError(f"edge-endpoint: edge references missing node {idx}")
                elif kind == "in":
                    if not 0 <= idx < self.n_in:
                        raise DiagramError(f"port-range: input port {idx} out of range")
                    seen_ports[ep] = seen_ports.get(ep, 0) + 1
                elif kind == "out":
                    if not 0 <= idx < self.n_out:
                        raise DiagramError(f"port-range: output port {idx} out of range")
                    seen_ports[ep] = seen_ports.get(ep, 0) + 1
                else:
                    raise DiagramError(f"edge-endpoint: bad endpoint kind {kind!r}")
        for i in range(self.n_in):
            if seen_ports.get(in_port(i), 0) != 1:
                raise DiagramError(
                    f"boundary-degree: input port {i} must appear in exactly one edge"
                )
        for j in range(self.n_out):
            if seen_ports.get(out_port(j), 0) != 1:
                raise DiagramError(
                    f"boundary-degree: output port {j} must appear in exactly one edge"
                )
        for node in self.nodes.values():
            if node.color not in _ALLOWED_COLORS[self.flavour]:
                raise DiagramError(
                    f"colour/flavour: colour {node.color.value} not allowed in "
                    f"flavour {self.flavour.value}"
                )
            if node.phase.group == "U1" and self.flavour is not Flavour.RGPLUS:
                raise DiagramError(
                    f"phase/flavour: real-angle phases are only allowed in "
                    f"flavour {Flavour.RGPLUS.value}"
                )
        ids = [n for n, node in self.nodes.items() if node.id != n]
        if ids:
            raise DiagramError(f"node-key: node key/id mismatch for {ids}")

    # -- categorical structure ---------------------------------------------------

    def _relabelled(self, offset: int) -> "Diagram":
        mapping = {n: n + offset for n in self.nodes}
        return self.relabelled(mapping)

    def relabelled(self, mapping: dict[int, int]) -> "Diagram":
        def m(ep: Endpoint) -> Endpoint:
            return node_end(mapping[ep[1]]) if ep[0] == "node" else ep

        nodes = {mapping[n]: replace(node, id=mapping[n]) for n, node in self.nodes.items()}
        edges = tuple(Edge(m(e.src), m(e.dst), e.deco) for e in self.edges)
        return Diagram(self.flavour, nodes, edges, self.n_in, self.n_out)

    def compose(self, other: "Diagram") -> "Diagram":
        """Sequential composition: self first, then other.

        The k-th output port of self is fused with the k-th input port of
        other.  When both fused wire halves carry a decoration, an identity
        point (a phase-0 green node with one wire in and one wire out) is kept
        between them so neither decoration is lost.  Junctions whose halves
        both face the same way (bent wires) also keep their point, which then
        acts as the cup/cap pairing the two legs.
        """
        if self.flavour != other.flavour:
            raise DiagramError("flavour mismatch in compose")
        if self.n_out != other.n_in:
            raise DiagramError(
                f"cannot compose: {self.n_out} outputs against {other.n_in} inputs"
            )
        g = other._relabelled(self.max_node_id())
        fresh = count(max(self.max_node_id(), g.max_node_id()) + 1)

        junction: dict[int, int] = {}  # boundary index -> junction node id
        nodes = dict(self.nodes)
        nodes.update(g.nodes)
        edges: list[Edge] = []

        def via_junction(ep: Endpoint, kind: str) -> Endpoint:
            if ep[0] != kind:
                return ep
            k = ep[1]
            if k not in junction:
                junction[k] = next(fresh)
                nodes[junction[k]] = Node(junction[k], Color.GREEN, C4_0)
            return node_end(junction[k])

        for e in self.edges:
            edges.append(Edge(via_junction(e.src, "out"), via_junction(e.dst, "out"), e.deco))
        for e in g.edges:
            edges.append(Edge(via_junction(e.src, "in"), via_junction(e.dst, "in"), e.deco))

        result = Diagram(self.flavour, nodes, tuple(edges), self.n_in, g.n_out)
        for jid in junction.values():
            result = result._try_splice(jid)
        return result

    def _try_splice(self, point_id: int) -> "Diagram":
        """Remove a 2-legged identity point if a plain splice is possible."""
        ends = self.incident(point_id)
        if len(ends) != 2:
            return self
        (i1, r1), (i2, r2) = ends
        if i1 == i2:  # a self-loop on the point: leave it alone
            return self
        e1, e2 = self.edges[i1], self.edges[i2]
        if r1 == "dst" and r2 == "src":
            incoming, outgoing = e1, e2
        elif r1 == "src" and r2 == "dst":
            incoming, outgoing = e2, e1
        else:
            return self  # both legs face the same way: the point is a cup/cap
        if incoming.deco != Deco.PLAIN and outgoing.deco != Deco.PLAIN:
            return self  # decoration collision: keep the identity point
        deco = incoming.deco if outgoing.deco == Deco.PLAIN else outgoing.deco
        spliced = Edge(incoming.src, outgoing.dst, deco)
        edges = [e for i, e in enumerate(self.edges) if i not in (i1, i2)]
        edges.append(spliced)
        nodes = {n: node for n, node in self.nodes.items() if n != point_id}
        return Diagram(self.flavour, nodes, tuple(edges), self.n_in, self.n_out)

    def tensor(self, other: "Diagram") -> "Diagram":
        """Parallel composition: self on top, other below."""
        if self.flavour != other.flavour:
            raise DiagramError("flavour mismatch in tensor")
        g = other._relabelled(self.max_node_id())

        def shift(ep: Endpoint) -> Endpoint:
            if ep[0] == "in":
                return in_port(ep[1] + self.n_in)
            if ep[0] == "out":
                return out_port(ep[1] + self.n_out)
            return ep

        nodes = dict(self.nodes)
        nodes.update(g.nodes)
        edges = self.edges + tuple(Edge(shift(e.src), shift(e.dst), e.deco) for e in g.edges)
        return Diagram(self.flavour, nodes, edges, self.n_in + g.n_in, self.n_out + g.n_out)

    def dagger(self) -> "Diagram":
        """Adjoint: swap boundaries, reverse edges, negate phases.

        Colour-changer decorations swap cw <-> ccw (the changer is a unitary of
        projective order three, so its adjoint is the opposite changer); all
        other decorations are self-adjoint.
        """
        flip = {"in": "out", "out": "in", "node": "node"}
        swap = {Deco.CW: Deco.CCW, Deco.CCW: Deco.CW}

        def f(ep: Endpoint) -> Endpoint:
            return (flip[ep[0]], ep[1])

        nodes = {
            n: Node(n, node.color, -node.phase) for n, node in self.nodes.items()
        }
        edges = tuple(
            Edge(f(e.dst), f(e.src), swap.get(e.deco, e.deco)) for e in self.edges
        )
        return Diagram(self.flavour, nodes, edges, self.n_out, self.n_in)

    def colour_permute(self, mapping: dict[Color, Color]) -> "Diagram":
        """Apply a colour symmetry.

        In rgb only even permutations of the three colours are sound (odd ones
        flip orientation-sensitive structure); in rg/rgplus only the identity
        and the red/green swap exist.  Dualizer decorations follow the pair of
        colours they mediate; changers and Hadamard are invariant.
        """
        colors = _ALLOWED_COLORS[self.flavour]
        if set(mapping) != colors or set(mapping.values()) != colors:
            raise DiagramError("colour permutation must be a bijection on the flavour's colours")
        if self.flavour is Flavour.RGB and not _is_even_perm(mapping):
            raise DiagramError("only even colour permutations are allowed in rgb")

        def map_deco(deco: Deco) -> Deco:
            if deco in DUALIZERS:
                pair = DUAL_PAIR[deco]
                return PAIR_DUAL[frozenset(mapping[c] for c in pair)]
            return deco

        nodes = {
            n: Node(n, mapping[node.color], node.phase) for n, node in self.nodes.items()
        }
        edges = tuple(Edge(e.src, e.dst, map_deco(e.deco)) for e in self.edges)
        return Diagram(self.flavour, nodes, edges, self.n_in, self.n_out)

    # -- components -------------------------------------------------------------

    def components(self) -> list[tuple[set[int], bool]]:
        """Connected components as (node ids, touches_boundary) pairs.

        Port-port edges form boundary-touching components with no nodes and are
        not reported; isolated nodes are their own components.
        """
        parent: dict[object, object] = {}

        def find(x: object) -> object:
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x: object, y: object) -> None:
            parent[find(x)] = find(y)

        for n in self.nodes:
            find(("node", n))
        for e in self.edges:
            union(e.src if e.src[0] == "node" else ("port", e.src),
                  e.dst if e.dst[0] == "node" else ("port", e.dst))
        groups: dict[object, tuple[set[int], bool]] = {}
        for n in self.nodes:
            root = find(("node", n))
            groups.setdefault(root, (set(), False))
            groups[root][0].add(n)
        for e in self.edges:
            for ep in (e.src, e.dst):
                if ep[0] != "node":
                    root = find(("port", ep))
                    if root in groups:
                        groups[root] = (groups[root][0], True)
                    else:
                        groups[root] = (set(), True)
        out = []
        for nodes, touches in groups.values():
            if nodes:
                out.append((nodes, touches))
        return out

    # -- isomorphism --------------------------------------------------------------

    def iso_equal(self, other: "Diagram") -> bool:
        """Boundary-order-fixing directed multigraph isomorphism.

        Node ids are irrelevant; colours, phases, decorations, edge directions
        and the identity of every boundary port must be preserved.
        """
        if (
            self.flavour != other.flavour
            or self.n_in != other.n_in
            or self.n_out != other.n_out
            or len(self.nodes) != len(other.nodes)
            or len(self.edges) != len(other.edges)
        ):
            return False
        # Port-port edges must agree verbatim (ports are fixed by the iso).
        pp_a = sorted(e.key() for e in self.edges if not is_node_end(e.src) and not is_node_end(e.dst))
        pp_b = sorted(e.key() for e in other.edges if not is_node_end(e.src) and not is_node_end(e.dst))
        if pp_a != pp_b:
            return False

        sig_a = _refined_signatures(self)
        sig_b = _refined_signatures(other)
        if sorted(sig_a.values()) != sorted(sig_b.values()):
            return False

        order = sorted(self.nodes, key=lambda n: (sig_a[n], n))
        candidates = {
            n: [m for m in other.nodes if sig_b[m] == sig_a[n]] for n in order
        }

        def edges_between(d: "Diagram", x: Endpoint, y: Endpoint) -> list[tuple]:
            out = []
            for e in d.edges:
                if e.src == x and e.dst == y:
                    out.append(("f", _DECO_ORDER[e.deco]))
                if e.src == y and e.dst == x and x != y:
                    out.append(("b", _DECO_ORDER[e.deco]))
            return sorted(out)

        mapping: dict[int, int] = {}
        used: set[int] = set()

        def backtrack(i: int) -> bool:
            if i == len(order):
                return True
            n = order[i]
            for m in candidates[n]:
                if m in used:
                    continue
                ok = True
                # consistency against already-mapped nodes and all ports
                for n2, m2 in mapping.items():
                    if edges_between(self, node_end(n), node_end(n2)) != edges_between(
                        other, node_end(m), node_end(m2)
                    ):
                        ok = False
                        break
                if ok:
                    if edges_between(self, node_end(n), node_end(n)) != edges_between(
                        other, node_end(m), node_end(m)
                    ):
                        ok = False
                if ok:
                    for p in range(self.n_in):
                        if edges_between(self, in_port(p), node_end(n)) != edges_between(
                            other, in_port(p), node_end(m)
                        ):
                            ok = False
                            break
                if ok:
                    for p in range(self.n_out):
                        if edges_between(self, node_end(n), out_port(p)) != edges_between(
                            other, node_end(m), out_port(p)
                        ):
                            ok = False
                            break
                if ok:
                    mapping[n] = m
                    used.add(m)
                    if backtrack(i + 1):
                        return True
                    del mapping[n]
                    used.discard(m)
            return False

        return backtrack(0)


def _is_even_perm(mapping: dict[Color, Color]) -> bool:
    moved = sum(1 for c, t in mapping.items() if c != t)
    return moved != 2  # on three points, only transpositions are odd


def _refined_signatures(d: Diagram, rounds: int = 3) -> dict[int, tuple]:
    """Weisfeiler-Leman style node signatures used to prune the iso search."""
    sig: dict[int, tuple] = {}
    for n, node in d.nodes.items():
        ports = []
        for e in d.edges:
            for a, b, dir_ in ((e.src, e.dst, "f"), (e.dst, e.src, "b")):
                if a == node_end(n) and not is_node_end(b):
                    ports.append((b[0], b[1], dir_, _DECO_ORDER[e.deco]))
        sig[n] = (
            node.color.value,
            node.phase.group,
            node.phase.value,
            d.in_degree(n),
            d.out_degree(n),
            tuple(sorted(ports)),
        )
    for _ in range(rounds):
        nxt: dict[int, tuple] = {}
        for n in d.nodes:
            nbrs = []
            for e in d.edges:
                if e.src == node_end(n) and is_node_end(e.dst):
                    nbrs.append(("f", _DECO_ORDER[e.deco], sig[e.dst[1]]))
                if e.dst == node_end(n) and is_node_end(e.src):
                    nbrs.append(("b", _DECO_ORDER[e.deco], sig[e.src[1]]))
            nxt[n] = (sig[n], tuple(sorted(nbrs)))
        sig = nxt
    return sig
