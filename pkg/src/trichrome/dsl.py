"""Textual format for diagrams and rewrite scripts.

Diagram sources (conventionally ``.rgd`` files) look like::

    diagram rgb {
      inputs i0, i1;
      outputs o0;
      node n1: red 1;
      node n2: green rad 0.25;
      wire i0 -> n1;
      wire i1 -> n1 [cw];
      wire n1 -> n2;
      wire n2 -> o0;
    }

Phases are quarter turns when written as a bare integer and radians when
prefixed with ``rad``.  Node arity is implicit: a node has exactly the legs
its wires give it.  ``#`` starts a comment that runs to the end of the line.

:func:`print_diagram` is canonical: isomorphic diagrams (equal up to node
renaming) print to byte-identical text.  Node names are re-assigned by an
individualisation/refinement canonical ordering, so the output is stable
under any relabelling of the input.

Script sources (``.rgs`` files) are line oriented::

    # optional comment
    apply spider-fusion
    apply state-copy at node=2, node=7

``at`` pins the anchor nodes (ids in the evolving diagram); without it the
first match in scan order is used.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .diagram import (
    _DECO_ORDER,
    Color,
    Deco,
    Diagram,
    Edge,
    Endpoint,
    Flavour,
    Node,
    Phase,
    in_port,
    is_node_end,
    node_end,
    out_port,
)
from .rules.engine import ScriptStep

__all__ = [
    "ParseError",
    "parse",
    "parse_diagram",
    "parse_script",
    "print_diagram",
    "print_script",
]


class ParseError(ValueError):
    """Syntax error in a diagram or script source, with position."""

    def __init__(self, message: str, line: int, col: int) -> None:
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


_COLOURS = {c.name.lower(): c for c in Color}
_FLAVOURS = {f.value: f for f in Flavour}
_DECOS = {d.value: d for d in Deco if d is not Deco.PLAIN}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow>->)
  | (?P<num>-?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[{}\[\];:,])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "arrow" | "num" | "name" | "punct" | "eof"
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup or ""
        chunk = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = _tokenize(text)
        self.pos = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.pos]

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.cur.line, self.cur.col)

    def advance(self) -> _Token:
        tok = self.cur
        self.pos += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> _Token:
        tok = self.cur
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            raise self.error(f"expected {want!r}, found {tok.text or 'end of input'!r}")
        return self.advance()

    def accept(self, kind: str, text: str | None = None) -> _Token | None:
        tok = self.cur
        if tok.kind == kind and (text is None or tok.text == text):
            return self.advance()
        return None

    # -- grammar ---------------------------------------------------------------

    def diagram(self) -> Diagram:
        self.expect("name", "diagram")
        flav_tok = self.expect("name")
        if flav_tok.text not in _FLAVOURS:
            raise ParseError(
                f"unknown flavour {flav_tok.text!r} (expected one of "
                f"{', '.join(sorted(_FLAVOURS))})",
                flav_tok.line,
                flav_tok.col,
            )
        flavour = _FLAVOURS[flav_tok.text]
        self.expect("punct", "{")

        names: dict[str, Endpoint] = {}
        node_specs: list[Node] = []
        edges: list[Edge] = []
        n_in = n_out = 0

        def declare(tok: _Token, endpoint: Endpoint) -> None:
            if tok.text in names:
                raise ParseError(f"name {tok.text!r} already declared", tok.line, tok.col)
            names[tok.text] = endpoint

        while not self.accept("punct", "}"):
            key = self.expect("name")
            if key.text == "inputs":
                for tok in self.idlist():
                    declare(tok, in_port(n_in))
                    n_in += 1
            elif key.text == "outputs":
                for tok in self.idlist():
                    declare(tok, out_port(n_out))
                    n_out += 1
            elif key.text == "node":
                name = self.expect("name")
                self.expect("punct", ":")
                colour_tok = self.expect("name")
                if colour_tok.text not in _COLOURS:
                    raise ParseError(
                        f"unknown colour {colour_tok.text!r}", colour_tok.line, colour_tok.col
                    )
                phase = self.phase()
                node_id = len(node_specs) + 1
                declare(name, node_end(node_id))
                node_specs.append(Node(node_id, _COLOURS[colour_tok.text], phase))
                self.expect("punct", ";")
            elif key.text == "wire":
                src = self.endpoint(names)
                self.expect("arrow")
                dst = self.endpoint(names)
                deco = Deco.PLAIN
                if self.accept("punct", "["):
                    deco_tok = self.expect("name")
                    if deco_tok.text not in _DECOS:
                        raise ParseError(
                            f"unknown decoration {deco_tok.text!r}", deco_tok.line, deco_tok.col
                        )
                    deco = _DECOS[deco_tok.text]
                    self.expect("punct", "]")
                edges.append(Edge(src, dst, deco))
                self.expect("punct", ";")
            else:
                raise ParseError(
                    f"expected 'inputs', 'outputs', 'node' or 'wire', found {key.text!r}",
                    key.line,
                    key.col,
                )
        self.expect("eof")
        return Diagram.build(flavour, n_in, n_out, node_specs, edges)

    def idlist(self) -> list[_Token]:
        out = []
        if self.cur.kind == "name":
            out.append(self.advance())
            while self.accept("punct", ","):
                out.append(self.expect("name"))
        self.expect("punct", ";")
        return out

    def phase(self) -> Phase:
        if self.accept("name", "rad"):
            tok = self.expect("num")
            return Phase.u1(float(tok.text))
        tok = self.expect("num")
        try:
            quarters = int(tok.text)
        except ValueError:
            raise ParseError(
                f"quarter-turn phase must be an integer, found {tok.text!r} "
                "(use 'rad' for real angles)",
                tok.line,
                tok.col,
            ) from None
        return Phase.c4(quarters)

    def endpoint(self, names: dict[str, Endpoint]) -> Endpoint:
        tok = self.expect("name")
        if tok.text not in names:
            raise ParseError(f"undeclared name {tok.text!r}", tok.line, tok.col)
        return names[tok.text]


def parse_diagram(text: str) -> Diagram:
    """Parse diagram source text; raises ParseError or DiagramError."""
    d = _Parser(text).diagram()
    d.validate()
    return d


#: Alias matching the operation name used by the command-line front end.
parse = parse_diagram


# -- canonical printing ----------------------------------------------------------


def _refine_classes(d: Diagram, cls: dict[int, int]) -> dict[int, int]:
    """Refine an integer node colouring by neighbourhood structure to a fixpoint."""
    nodes = list(d.nodes)
    for _ in range(len(nodes) + 1):
        keys: dict[int, tuple] = {}
        for n in nodes:
            nbrs = []
            for e in d.edges:
                if e.src == node_end(n) and is_node_end(e.dst):
                    nbrs.append(("f", _DECO_ORDER[e.deco], cls[e.dst[1]]))
                if e.dst == node_end(n) and is_node_end(e.src):
                    nbrs.append(("b", _DECO_ORDER[e.deco], cls[e.src[1]]))
            keys[n] = (cls[n], tuple(sorted(nbrs)))
        ranked = {key: i for i, key in enumerate(sorted(set(keys.values())))}
        new = {n: ranked[keys[n]] for n in nodes}
        if len(set(new.values())) == len(set(cls.values())):
            return new
        cls = new
    return cls


def _initial_classes(d: Diagram) -> dict[int, int]:
    sigs: dict[int, tuple] = {}
    for n, node in d.nodes.items():
        ports = []
        for e in d.edges:
            for a, b, direction in ((e.src, e.dst, "f"), (e.dst, e.src, "b")):
                if a == node_end(n) and not is_node_end(b):
                    ports.append((b[0], b[1], direction, _DECO_ORDER[e.deco]))
        sigs[n] = (
            node.color.value,
            node.phase.group,
            float(node.phase.value),
            d.in_degree(n),
            d.out_degree(n),
            tuple(sorted(ports)),
        )
    ranked = {sig: i for i, sig in enumerate(sorted(set(sigs.values())))}
    return {n: ranked[sigs[n]] for n in d.nodes}


def _encode(d: Diagram, order: list[int]) -> tuple:
    rank = {n: i for i, n in enumerate(order)}

    def key(ep: Endpoint) -> tuple:
        kind, idx = ep
        return ("n", rank[idx]) if kind == "node" else (kind, idx)

    nodes = tuple(
        (d.nodes[n].color.value, d.nodes[n].phase.group, float(d.nodes[n].phase.value))
        for n in order
    )
    edges = tuple(sorted((key(e.src), key(e.dst), _DECO_ORDER[e.deco]) for e in d.edges))
    return (nodes, edges)


def _canonical_order(d: Diagram) -> list[int]:
    """Node ids ordered so that isomorphic diagrams get identical encodings.

    Individualisation/refinement: refine the degree/colour/port partition,
    then branch on every member of the first ambiguous cell and keep the
    ordering whose encoding is lexicographically smallest.  Exponential only
    in the size of the diagram's symmetry orbits, which stay tiny here.
    """
    if not d.nodes:
        return []
    best: tuple | None = None
    best_order: list[int] = []
    fresh = len(d.nodes)  # class ids above this are individualisation marks

    def explore(cls: dict[int, int]) -> None:
        nonlocal best, best_order
        cls = _refine_classes(d, cls)
        groups: dict[int, list[int]] = {}
        for n, c in cls.items():
            groups.setdefault(c, []).append(n)
        ambiguous = [members for _, members in sorted(groups.items()) if len(members) > 1]
        if not ambiguous:
            order = sorted(d.nodes, key=lambda n: cls[n])
            enc = _encode(d, order)
            if best is None or enc < best:
                best, best_order = enc, order
            return
        for pick in sorted(ambiguous[0]):
            child = dict(cls)
            child[pick] = fresh + 1
            explore(child)

    explore(_initial_classes(d))
    return best_order


def print_diagram(d: Diagram) -> str:
    """Render canonical source text; isomorphic diagrams render identically."""
    d.validate()
    order = _canonical_order(d)
    rank = {n: i for i, n in enumerate(order)}

    def name(ep: Endpoint) -> str:
        kind, idx = ep
        if kind == "in":
            return f"i{idx}"
        if kind == "out":
            return f"o{idx}"
        return f"n{rank[idx] + 1}"

    lines = [f"diagram {d.flavour.value} {{"]
    if d.n_in:
        lines.append("  inputs " + ", ".join(f"i{i}" for i in range(d.n_in)) + ";")
    if d.n_out:
        lines.append("  outputs " + ", ".join(f"o{j}" for j in range(d.n_out)) + ";")
    for n in order:
        node = d.nodes[n]
        if node.phase.group == "C4":
            phase_text = str(node.phase.value)
        else:
            phase_text = f"rad {node.phase.value!r}"
        lines.append(f"  node {name(node_end(n))}: {node.color.name.lower()} {phase_text};")

    def edge_sort_key(e: Edge) -> tuple:
        def ep_key(ep: Endpoint) -> tuple:
            kind, idx = ep
            return ("n", rank[idx]) if kind == "node" else (kind, idx)

        return (ep_key(e.src), ep_key(e.dst), _DECO_ORDER[e.deco])

    for e in sorted(d.edges, key=edge_sort_key):
        deco = "" if e.deco is Deco.PLAIN else f" [{e.deco.value}]"
        lines.append(f"  wire {name(e.src)} -> {name(e.dst)}{deco};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- scripts ---------------------------------------------------------------------

_APPLY_RE = re.compile(
    r"^apply\s+(?P<rule>[A-Za-z0-9.\-]+)\s*(?:at\s+(?P<anchor>node=\d+(?:\s*,\s*node=\d+)*))?$"
)


def parse_script(text: str) -> list[ScriptStep]:
    """Parse a rewrite script: ``apply <rule> [at node=<id>, ...]`` per line."""
    steps: list[ScriptStep] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _APPLY_RE.match(line)
        if m is None:
            raise ParseError("expected 'apply <rule> [at node=<id>, ...]'", lineno, 1)
        anchor = None
        if m.group("anchor"):
            anchor = tuple(int(part.split("=")[1]) for part in m.group("anchor").split(","))
        steps.append(ScriptStep(m.group("rule"), anchor))
    return steps


def print_script(steps: list[ScriptStep]) -> str:
    """Render steps in the script format accepted by :func:`parse_script`."""
    lines = []
    for step in steps:
        if step.anchor is None:
            lines.append(f"apply {step.rule}")
        else:
            at = ", ".join(f"node={n}" for n in step.anchor)
            lines.append(f"apply {step.rule} at {at}")
    return "\n".join(lines) + ("\n" if lines else "")
