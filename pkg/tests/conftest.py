"""Shared test helpers: seeded random diagrams and bundled example files."""

from __future__ import annotations

import math
import random
from importlib import resources

from trichrome.diagram import (
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

_COLORS = {
    Flavour.RG: (Color.RED, Color.GREEN),
    Flavour.RGPLUS: (Color.RED, Color.GREEN),
    Flavour.RGB: (Color.RED, Color.GREEN, Color.BLUE),
}

# plain edges dominate so diagrams stay recognisable; each legal decoration
# still shows up often across a few hundred samples
_DECOS = {
    Flavour.RG: (Deco.PLAIN,) * 3 + (Deco.H,),
    Flavour.RGPLUS: (Deco.PLAIN,) * 3 + (Deco.H,),
    Flavour.RGB: (Deco.PLAIN,) * 5
    + (Deco.CW, Deco.CCW, Deco.DUAL_Y, Deco.DUAL_C, Deco.DUAL_M),
}


def random_diagram(
    rng: random.Random,
    flavour: Flavour,
    max_nodes: int = 5,
    allow_u1: bool = False,
) -> Diagram:
    """A valid random diagram: random spiders, boundary wiring, extra edges."""
    n = rng.randint(1, max_nodes)
    nodes = []
    for i in range(1, n + 1):
        if allow_u1 and flavour is Flavour.RGPLUS and rng.random() < 0.4:
            phase = Phase.u1(rng.uniform(0.0, 2.0 * math.pi))
        else:
            phase = Phase.c4(rng.randrange(4))
        nodes.append(Node(i, rng.choice(_COLORS[flavour]), phase))
    decos = _DECOS[flavour]
    n_in, n_out = rng.randint(0, 2), rng.randint(0, 2)
    edges = [
        Edge(in_port(i), node_end(rng.randint(1, n)), rng.choice(decos))
        for i in range(n_in)
    ]
    edges += [
        Edge(node_end(rng.randint(1, n)), out_port(j), rng.choice(decos))
        for j in range(n_out)
    ]
    for _ in range(rng.randint(0, n + 1)):
        a, b = rng.randint(1, n), rng.randint(1, n)
        edges.append(Edge(node_end(a), node_end(b), rng.choice(decos)))
    d = Diagram.build(flavour, n_in, n_out, nodes, edges)
    d.validate()
    return d


def shuffled_copy(rng: random.Random, d: Diagram) -> Diagram:
    """An isomorphic copy with permuted node ids and reordered edges."""
    ids = list(d.nodes)
    new_ids = ids[:]
    rng.shuffle(new_ids)
    relabelled = d.relabelled(dict(zip(ids, new_ids)))
    edges = list(relabelled.edges)
    rng.shuffle(edges)
    return Diagram.build(
        d.flavour, d.n_in, d.n_out, list(relabelled.nodes.values()), edges
    )


def data_text(*parts: str) -> str:
    """Contents of a bundled data file, e.g. data_text('corpus', 'x.rgd')."""
    root = resources.files("trichrome") / "data"
    for part in parts:
        root = root / part
    return root.read_text(encoding="utf-8")
