"""Rewrite machinery: pattern matching, rule application, scripts, search.

Two kinds of rules exist.  A :class:`ConcreteRule` is a left/right diagram
pair; its matcher embeds the left diagram into a host and its ``apply``
replaces the image by the right diagram.  A :class:`ParametricRule` is a
family indexed by colours, arities or phases; each family implements its own
matcher and surgery (see ``families.py``).

Matching conventions for concrete rules:

* Node images must agree in colour and phase and have exactly the same
  degree as the pattern node (the pattern describes *all* legs of the nodes
  it mentions).
* Interior pattern edges (node-node) match host edges with exactly the same
  decoration.
* Boundary legs (port-node pattern edges) with a plain decoration are
  *pass-through*: the host edge is kept, whatever its decoration, and only
  re-aimed at the rewritten interface.  Decorated boundary legs match the
  host decoration exactly and consume the host edge.
* Port-port pattern edges match a whole host edge verbatim (same decoration)
  anywhere outside the matched nodes and consume it.
* Rules whose pattern contains a dualizer or colour-changer decoration are
  direction sensitive: host edge orientations must equal the pattern's.
  All other rules match either orientation of each edge.

Application splices the right-hand side in through phase-0 green interface
points, one per pattern boundary port.  Points whose two legs line up over a
plain wire are removed again; points kept behind (decoration collisions,
bent wires) are semantically exact identities / cups / caps.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace

from ..diagram import (
    C4_0,
    CHANGERS,
    DUALIZERS,
    Color,
    Deco,
    Diagram,
    Edge,
    Endpoint,
    Flavour,
    Node,
    _refined_signatures,
    in_port,
    is_node_end,
    node_end,
    out_port,
)
from ..interp import EvalError, equal_up_to_scalar, evaluate


class RuleError(ValueError):
    """Raised for malformed rules or invalid rule applications."""


class ScriptError(RuleError):
    """Raised when a rewrite script cannot be executed."""


def semantically_equal(a: Diagram, b: Diagram, tol: float = 1e-9) -> bool:
    """Projective semantic equality; exact when both sides evaluate exactly."""
    try:
        return equal_up_to_scalar(evaluate(a), evaluate(b))
    except (EvalError, OverflowError):
        return equal_up_to_scalar(evaluate(a, float_mode=True), evaluate(b, float_mode=True), tol=tol)


@dataclass(frozen=True)
class Match:
    """One occurrence of a rule in a host diagram.

    ``anchor`` is the sorted tuple of host node ids the match touches (its
    address for scripts); ``data`` is a rule-specific payload consumed by the
    rule's ``apply``.
    """

    rule: str
    anchor: tuple[int, ...]
    data: tuple = ()

    def sort_key(self) -> tuple:
        return (self.anchor, self.data)


class Rule:
    """Interface shared by concrete rules and parametric families."""

    name: str
    flavour: Flavour

    def find_matches(self, host: Diagram) -> list[Match]:
        raise NotImplementedError

    def apply(self, host: Diagram, match: Match) -> Diagram:
        raise NotImplementedError

    def soundness_checks(self) -> list[tuple[str, Diagram, Diagram]]:
        """(label, lhs, rhs) pairs that must be semantically equal."""
        raise NotImplementedError


# ---------------------------------------------------------------------------
# concrete rules
# ---------------------------------------------------------------------------


def _edge_kind(d: Diagram, e: Edge) -> str:
    sn, dn = is_node_end(e.src), is_node_end(e.dst)
    if sn and dn:
        return "interior"
    if sn or dn:
        return "leg"
    return "wire"


@dataclass
class ConcreteRule(Rule):
    name: str
    flavour: Flavour
    lhs: Diagram
    rhs: Diagram
    tags: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if self.lhs.flavour != self.flavour or self.rhs.flavour != self.flavour:
            raise RuleError(f"rule {self.name}: flavour mismatch")
        if (self.lhs.n_in, self.lhs.n_out) != (self.rhs.n_in, self.rhs.n_out):
            raise RuleError(f"rule {self.name}: boundary arity mismatch")
        self.lhs.validate()
        self.rhs.validate()

    @property
    def direction_sensitive(self) -> bool:
        marked = set(DUALIZERS) | set(CHANGERS)
        return any(e.deco in marked for e in self.lhs.edges)

    def reversed(self, name: str | None = None) -> "ConcreteRule":
        return ConcreteRule(name or self.name + "-rev", self.flavour, self.rhs, self.lhs, self.tags)

    def dagger_image(self, name: str) -> "ConcreteRule":
        return ConcreteRule(name, self.flavour, self.lhs.dagger(), self.rhs.dagger(), self.tags)

    def colour_image(self, name: str, mapping: dict[Color, Color]) -> "ConcreteRule":
        return ConcreteRule(
            name, self.flavour, self.lhs.colour_permute(mapping), self.rhs.colour_permute(mapping), self.tags
        )

    def soundness_checks(self) -> list[tuple[str, Diagram, Diagram]]:
        return [(self.name, self.lhs, self.rhs)]

    # -- matching ---------------------------------------------------------

    def find_matches(self, host: Diagram) -> list[Match]:
        if host.flavour != self.flavour:
            return []
        L = self.lhs
        sens = self.direction_sensitive
        kinds = [_edge_kind(L, e) for e in L.edges]
        lids = sorted(L.nodes)

        candidates: dict[int, list[int]] = {}
        for ln in lids:
            pat = L.nodes[ln]
            candidates[ln] = [
                h
                for h in sorted(host.nodes)
                if host.nodes[h].color == pat.color
                and host.nodes[h].phase == pat.phase
                and host.degree(h) == L.degree(ln)
            ]
            if not candidates[ln]:
                return []

        results: list[Match] = []
        order = sorted(range(len(L.edges)), key=lambda i: {"interior": 0, "leg": 1, "wire": 2}[kinds[i]])

        def covered_ends(le_idx: int, he_idx: int, orient: str) -> frozenset:
            if kinds[le_idx] != "leg":
                return frozenset({(he_idx, "src"), (he_idx, "dst")})
            le = L.edges[le_idx]
            node_side = "src" if is_node_end(le.src) else "dst"
            end = node_side if orient == "+" else ("dst" if node_side == "src" else "src")
            return frozenset({(he_idx, end)})

        def try_assignments(sigma: dict[int, int]) -> None:
            matched = set(sigma.values())

            def edge_candidates(le_idx: int, used_ends: set) -> list[tuple[int, str]]:
                le = L.edges[le_idx]
                kind = kinds[le_idx]
                out = []
                for he_idx, he in enumerate(host.edges):
                    for orient in ("+", "-"):
                        if orient == "-" and (sens or (kind == "interior" and le.src == le.dst)):
                            continue
                        a, b = (he.src, he.dst) if orient == "+" else (he.dst, he.src)
                        if kind == "interior":
                            if he.deco != le.deco:
                                continue
                            if a != node_end(sigma[le.src[1]]) or b != node_end(sigma[le.dst[1]]):
                                continue
                        elif kind == "leg":
                            if le.deco != Deco.PLAIN and he.deco != le.deco:
                                continue
                            node_ep, node_is_src = (le.src, True) if is_node_end(le.src) else (le.dst, False)
                            want = node_end(sigma[node_ep[1]])
                            if (a if node_is_src else b) != want:
                                continue
                        else:  # wire
                            if he.deco != le.deco:
                                continue
                            if (is_node_end(he.src) and he.src[1] in matched) or (
                                is_node_end(he.dst) and he.dst[1] in matched
                            ):
                                continue
                        ends = covered_ends(le_idx, he_idx, orient)
                        if ends & used_ends:
                            continue
                        out.append((he_idx, orient))
                return out

            assign: dict[int, tuple[int, str]] = {}
            used_ends: set = set()

            def backtrack_edges(pos: int) -> None:
                if pos == len(order):
                    if self._legs_consistent(host, assign):
                        results.append(self._make_match(host, sigma, assign))
                    return
                le_idx = order[pos]
                for he_idx, orient in edge_candidates(le_idx, used_ends):
                    ends = covered_ends(le_idx, he_idx, orient)
                    assign[le_idx] = (he_idx, orient)
                    used_ends.update(ends)
                    backtrack_edges(pos + 1)
                    del assign[le_idx]
                    used_ends.difference_update(ends)

            backtrack_edges(0)

        def backtrack_nodes(pos: int, sigma: dict[int, int], used: set[int]) -> None:
            if pos == len(lids):
                try_assignments(dict(sigma))
                return
            ln = lids[pos]
            for h in candidates[ln]:
                if h in used:
                    continue
                sigma[ln] = h
                used.add(h)
                backtrack_nodes(pos + 1, sigma, used)
                del sigma[ln]
                used.discard(h)

        backtrack_nodes(0, {}, set())
        uniq = {m.sort_key(): m for m in results}
        return sorted(uniq.values(), key=Match.sort_key)

    def _legs_consistent(self, host: Diagram, assign: dict[int, tuple[int, str]]) -> bool:
        """A host edge matched by several legs must be uniformly kept or consumed."""
        L = self.lhs
        per_edge: dict[int, list[bool]] = {}
        for le_idx, (he_idx, _) in assign.items():
            if _edge_kind(L, L.edges[le_idx]) == "leg":
                per_edge.setdefault(he_idx, []).append(L.edges[le_idx].deco == Deco.PLAIN)
        return all(len(set(flags)) == 1 for flags in per_edge.values())

    def _make_match(self, host: Diagram, sigma: dict[int, int], assign: dict[int, tuple[int, str]]) -> Match:
        anchor = set(sigma.values())
        for le_idx, (he_idx, _) in assign.items():
            if _edge_kind(self.lhs, self.lhs.edges[le_idx]) == "wire":
                he = host.edges[he_idx]
                for ep in (he.src, he.dst):
                    if is_node_end(ep):
                        anchor.add(ep[1])
        data = (
            tuple(sorted(sigma.items())),
            tuple(sorted((le, he, orient) for le, (he, orient) in assign.items())),
        )
        return Match(self.name, tuple(sorted(anchor)), data)

    # -- application --------------------------------------------------------

    def apply(self, host: Diagram, match: Match) -> Diagram:
        L, R = self.lhs, self.rhs
        sigma = dict(match.data[0])
        assign = {le: (he, orient) for le, he, orient in match.data[1]}
        matched_nodes = set(sigma.values())
        fresh = host.fresh_ids()
        nodes = dict(host.nodes)
        edges: list[Edge | None] = list(host.edges)

        # one interface point per pattern boundary port
        ports = [in_port(i) for i in range(L.n_in)] + [out_port(j) for j in range(L.n_out)]
        q_of: dict[Endpoint, int] = {}
        for p in ports:
            q = next(fresh)
            q_of[p] = q
            nodes[q] = Node(q, Color.GREEN, C4_0)

        # pattern port -> (pattern edge index, side holding the port)
        lport: dict[Endpoint, tuple[int, str]] = {}
        for i, e in enumerate(L.edges):
            if not is_node_end(e.src):
                lport[e.src] = (i, "src")
            if not is_node_end(e.dst):
                lport[e.dst] = (i, "dst")

        consumed: set[int] = set()
        leg_covers: dict[int, list[tuple[int, str]]] = {}
        for le_idx, (he_idx, orient) in assign.items():
            kind = _edge_kind(L, L.edges[le_idx])
            if kind in ("interior", "wire"):
                consumed.add(he_idx)
            else:
                leg_covers.setdefault(he_idx, []).append((le_idx, orient))

        def leg_port(le_idx: int) -> Endpoint:
            le = L.edges[le_idx]
            return le.src if not is_node_end(le.src) else le.dst

        def covered_side(le_idx: int, orient: str) -> str:
            node_side = "src" if is_node_end(L.edges[le_idx].src) else "dst"
            return node_side if orient == "+" else ("dst" if node_side == "src" else "src")

        new_edges: list[Edge] = []
        for he_idx, covers in leg_covers.items():
            he = host.edges[he_idx]
            if L.edges[covers[0][0]].deco == Deco.PLAIN:
                # pass-through: keep the host edge, re-aim the covered ends
                for le_idx, orient in covers:
                    q = node_end(q_of[leg_port(le_idx)])
                    side = covered_side(le_idx, orient)
                    he = replace(he, **{side: q})
                edges[he_idx] = he
            else:
                consumed.add(he_idx)
                if len(covers) == 1:
                    le_idx, orient = covers[0]
                    q = node_end(q_of[leg_port(le_idx)])
                    side = covered_side(le_idx, orient)
                    if side == "dst":  # far end is the source: it keeps sending
                        new_edges.append(Edge(he.src, q))
                    else:
                        new_edges.append(Edge(q, he.dst))
                else:
                    by_side = {covered_side(le, o): le for le, o in covers}
                    new_edges.append(
                        Edge(node_end(q_of[leg_port(by_side["src"])]), node_end(q_of[leg_port(by_side["dst"])]))
                    )

        for le_idx, (he_idx, orient) in assign.items():
            if _edge_kind(L, L.edges[le_idx]) != "wire":
                continue
            he = host.edges[he_idx]
            le = L.edges[le_idx]
            src_port, dst_port = le.src, le.dst
            if orient == "+":
                new_edges.append(Edge(he.src, node_end(q_of[src_port])))
                new_edges.append(Edge(node_end(q_of[dst_port]), he.dst))
            else:
                new_edges.append(Edge(node_end(q_of[src_port]), he.dst))
                new_edges.append(Edge(he.src, node_end(q_of[dst_port])))

        # instantiate the right-hand side
        rmap = {rn: next(fresh) for rn in sorted(R.nodes)}
        for rn, node in R.nodes.items():
            nodes[rmap[rn]] = Node(rmap[rn], node.color, node.phase)

        def sub(ep: Endpoint) -> Endpoint:
            return node_end(rmap[ep[1]]) if is_node_end(ep) else node_end(q_of[ep])

        for e in R.edges:
            new_edges.append(Edge(sub(e.src), sub(e.dst), e.deco))

        final_edges = [e for i, e in enumerate(edges) if i not in consumed and e is not None]
        final_edges.extend(new_edges)
        for n in matched_nodes:
            del nodes[n]
        result = Diagram(host.flavour, nodes, tuple(final_edges), host.n_in, host.n_out)
        for q in q_of.values():
            result = result._try_splice(q)
        return result


class ParametricRule(Rule):
    """Base class for rule families; subclasses provide matcher and surgery."""

    name: str
    flavour: Flavour
    search_safe: bool = True

    def find_matches(self, host: Diagram) -> list[Match]:
        raise NotImplementedError

    def apply(self, host: Diagram, match: Match) -> Diagram:
        raise NotImplementedError

    def instance_hosts(self) -> list[tuple[str, Diagram, tuple[int, ...]]]:
        """(label, host, anchor) triples exercising the family."""
        raise NotImplementedError

    def soundness_checks(self) -> list[tuple[str, Diagram, Diagram]]:
        checks = []
        for label, host, anchor in self.instance_hosts():
            matches = [m for m in self.find_matches(host) if m.anchor == anchor]
            if not matches:
                raise RuleError(f"{self.name}: no match for instance {label}")
            checks.append((f"{self.name}[{label}]", host, self.apply(host, matches[0])))
        return checks


# ---------------------------------------------------------------------------
# scripts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScriptStep:
    rule: str
    anchor: tuple[int, ...] | None = None

    def render(self) -> str:
        if self.anchor is None:
            return f"apply {self.rule}"
        return f"apply {self.rule} at " + ",".join(f"node={n}" for n in self.anchor)


@dataclass
class StepRecord:
    step: ScriptStep
    match: Match
    diagram: Diagram


@dataclass
class ScriptResult:
    start: Diagram
    final: Diagram
    records: list[StepRecord] = field(default_factory=list)


def run_script(
    host: Diagram,
    steps: list[ScriptStep],
    library: "RuleLibrary",
    verify: bool = True,
    tol: float = 1e-9,
) -> ScriptResult:
    """Apply the steps in order; with ``verify`` each step is checked exactly."""
    current = host
    result = ScriptResult(start=host, final=host)
    for idx, step in enumerate(steps, start=1):
        rule = library.get(step.rule)
        if rule is None:
            raise ScriptError(f"step {idx}: unknown rule {step.rule!r}")
        matches = rule.find_matches(current)
        if step.anchor is not None:
            matches = [m for m in matches if m.anchor == tuple(sorted(step.anchor))]
        if not matches:
            where = "" if step.anchor is None else f" at nodes {list(step.anchor)}"
            raise ScriptError(f"step {idx}: rule {step.rule!r} does not match{where}")
        match = matches[0]
        nxt = rule.apply(current, match)
        nxt.validate()
        if verify and not semantically_equal(current, nxt, tol=tol):
            raise ScriptError(f"step {idx}: rule {step.rule!r} broke semantic equality")
        result.records.append(StepRecord(step, match, nxt))
        current = nxt
    result.final = current
    return result


# ---------------------------------------------------------------------------
# bounded search
# ---------------------------------------------------------------------------


def _iso_key(d: Diagram) -> tuple:
    pp = tuple(sorted(e.key() for e in d.edges if not is_node_end(e.src) and not is_node_end(e.dst)))
    sigs = tuple(sorted(_refined_signatures(d).values()))
    return (d.n_in, d.n_out, len(d.nodes), len(d.edges), pp, sigs)


def bounded_search(
    start: Diagram,
    goal: Diagram,
    library: "RuleLibrary",
    max_depth: int = 6,
    max_states: int = 30000,
) -> list[ScriptStep] | None:
    """Breadth-first search for a rewrite path from start to goal.

    Uses every concrete rule in both directions plus the non-growing rule
    families.  Returns the step list, or None when no path of at most
    ``max_depth`` steps exists within the state budget.
    """
    rules = library.search_rules()
    start = start.copy()
    if start.iso_equal(goal):
        return []

    buckets: dict[tuple, list[Diagram]] = {_iso_key(start): [start]}
    frontier: deque[tuple[Diagram, list[ScriptStep], int]] = deque([(start, [], 0)])
    states = 1

    while frontier:
        current, path, depth = frontier.popleft()
        if depth >= max_depth:
            continue
        for rule in rules:
            for match in rule.find_matches(current):
                try:
                    nxt = rule.apply(current, match)
                except RuleError:
                    continue
                key = _iso_key(nxt)
                bucket = buckets.setdefault(key, [])
                if any(nxt.iso_equal(seen) for seen in bucket):
                    continue
                bucket.append(nxt)
                step = ScriptStep(rule.name, match.anchor)
                if nxt.iso_equal(goal):
                    return path + [step]
                states += 1
                if states > max_states:
                    return None
                frontier.append((nxt, path + [step], depth + 1))
    return None


# ---------------------------------------------------------------------------
# libraries
# ---------------------------------------------------------------------------


@dataclass
class RuleLibrary:
    flavour: Flavour
    concrete: dict[str, ConcreteRule] = field(default_factory=dict)
    families: dict[str, ParametricRule] = field(default_factory=dict)

    def add(self, rule: ConcreteRule) -> None:
        if rule.name in self.concrete or rule.name in self.families:
            raise RuleError(f"duplicate rule name {rule.name!r}")
        self.concrete[rule.name] = rule

    def add_family(self, fam: ParametricRule) -> None:
        if fam.name in self.concrete or fam.name in self.families:
            raise RuleError(f"duplicate rule name {fam.name!r}")
        self.families[fam.name] = fam

    def names(self) -> list[str]:
        return sorted(self.concrete) + sorted(self.families)

    def get(self, name: str) -> Rule | None:
        if name in self.concrete:
            return self.concrete[name]
        if name in self.families:
            return self.families[name]
        if name.endswith("-rev"):
            base = self.concrete.get(name[: -len("-rev")])
            if base is not None:
                return base.reversed(name)
        return None

    def search_rules(self) -> list[Rule]:
        out: list[Rule] = []
        for name in sorted(self.concrete):
            rule = self.concrete[name]
            out.append(rule)
            out.append(rule.reversed())
        for name in sorted(self.families):
            fam = self.families[name]
            if fam.search_safe:
                out.append(fam)
        return out

    def soundness_checks(self) -> list[tuple[str, Diagram, Diagram]]:
        checks: list[tuple[str, Diagram, Diagram]] = []
        for name in sorted(self.concrete):
            checks.extend(self.concrete[name].soundness_checks())
        for name in sorted(self.families):
            checks.extend(self.families[name].soundness_checks())
        return checks
