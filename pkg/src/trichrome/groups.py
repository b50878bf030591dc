"""Finite-group checks for the single-qubit quarter-turn rotations.

Up to a global scalar, the three coloured quarter-turn gates generate a
24-element matrix group.  This module verifies, by exact computation, that
the group is isomorphic to the symmetric group on four points, three
independent ways:

* brute-force closure of the generators has order exactly 24;
* the generators satisfy the quarter-turn presentation (each generator has
  order four, the product of the three squares is the identity, and the
  three mixed products agree), while the images of the transposition
  generators satisfy the standard symmetric-group presentation;
* an explicit pair of mutually inverse homomorphisms connects the matrix
  group with the concrete permutation group on four points.

Everything is exact: matrices are canonicalized up to a nonzero scalar by
dividing through by their first nonzero entry, which turns projective
equality into hashable identity.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .cyclo import CycloNum, exact_div
from .diagram import Color, Diagram, Edge, Flavour, Node, Phase, node_end
from .interp import Matrix, evaluate

__all__ = [
    "GroupError",
    "GroupTable",
    "PhaseClassMatrix",
    "Presentation",
    "QUARTER_TURN_PRESENTATION",
    "ROTATION_WORDS",
    "SWAP_PRESENTATION",
    "TRANSPOSITION_WORDS",
    "check_iso_pair",
    "check_relators",
    "enumerate_group",
    "group_report",
    "order_profile",
    "permutation_order_profile",
    "qubit_rotations",
]

MAX_GROUP_ORDER = 10_000

Word = tuple[str, ...]
Perm = tuple[int, ...]


class GroupError(ValueError):
    """Raised for malformed group input (non-square, zero, or runaway)."""


# ---------------------------------------------------------------------------
# projective matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PhaseClassMatrix:
    """A square exact matrix identified up to a nonzero scalar.

    The stored entries are canonical: the matrix is divided through by its
    first nonzero entry in row-major order, so two values compare (and hash)
    equal exactly when the underlying matrices differ by a scalar.
    """

    entries: tuple[tuple[CycloNum, ...], ...]

    @staticmethod
    def from_matrix(m: Matrix) -> "PhaseClassMatrix":
        if not m.exact:
            raise GroupError("phase classes need exact matrices")
        rows, cols = m.shape
        if rows != cols:
            raise GroupError("phase classes need square matrices")
        grid = [[m.entry(r, c) for c in range(cols)] for r in range(rows)]
        return PhaseClassMatrix._canonical(grid)

    @staticmethod
    def _canonical(grid: list[list[CycloNum]]) -> "PhaseClassMatrix":
        pivot = next((x for row in grid for x in row if not x.is_zero()), None)
        if pivot is None:
            raise GroupError("the zero matrix has no phase class")
        return PhaseClassMatrix(
            tuple(tuple(exact_div(x, pivot) for x in row) for row in grid)
        )

    @property
    def dim(self) -> int:
        return len(self.entries)

    def matmul(self, other: "PhaseClassMatrix") -> "PhaseClassMatrix":
        if self.dim != other.dim:
            raise GroupError("dimension mismatch")
        n = self.dim
        zero = CycloNum.zero()
        grid = [
            [
                sum(
                    (self.entries[r][k] * other.entries[k][c] for k in range(n)),
                    zero,
                )
                for c in range(n)
            ]
            for r in range(n)
        ]
        return PhaseClassMatrix._canonical(grid)

    def is_identity(self) -> bool:
        one = CycloNum.one()
        zero = CycloNum.zero()
        return all(
            x == (one if r == c else zero)
            for r, row in enumerate(self.entries)
            for c, x in enumerate(row)
        )

    @staticmethod
    def identity(dim: int) -> "PhaseClassMatrix":
        one = CycloNum.one()
        zero = CycloNum.zero()
        return PhaseClassMatrix(
            tuple(tuple(one if r == c else zero for c in range(dim)) for r in range(dim))
        )

    def order(self) -> int:
        acc = self
        for k in range(1, MAX_GROUP_ORDER + 1):
            if acc.is_identity():
                return k
            acc = acc.matmul(self)
        raise GroupError("element order exceeds the enumeration bound")

    def inverse(self) -> "PhaseClassMatrix":
        acc = PhaseClassMatrix.identity(self.dim)
        for _ in range(self.order() - 1):
            acc = acc.matmul(self)
        return acc


# ---------------------------------------------------------------------------
# presentations and words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Presentation:
    """Generator names plus relators, each relator a pair of equal words.

    A word is a tuple of tokens; the token ``name'`` denotes the inverse of
    ``name`` and the empty word is the identity.
    """

    generators: tuple[str, ...]
    relators: tuple[tuple[Word, Word], ...]

    def __post_init__(self) -> None:
        for lhs, rhs in self.relators:
            for token in (*lhs, *rhs):
                if token.rstrip("'") not in self.generators:
                    raise GroupError(f"unknown generator in relator: {token!r}")


def _evaluate_word(word: Word, assignment: dict, identity, multiply, invert):
    """Left-to-right product; in the word ``ab`` the element b acts first."""
    acc = identity
    for token in word:
        name = token.rstrip("'")
        if name not in assignment:
            raise GroupError(f"unknown generator in word: {token!r}")
        elem = assignment[name]
        if token.endswith("'"):
            elem = invert(elem)
        acc = multiply(acc, elem)
    return acc


def evaluate_matrix_word(word: Word, assignment: dict[str, PhaseClassMatrix]) -> PhaseClassMatrix:
    dim = next(iter(assignment.values())).dim
    return _evaluate_word(
        word,
        assignment,
        PhaseClassMatrix.identity(dim),
        PhaseClassMatrix.matmul,
        PhaseClassMatrix.inverse,
    )


def _perm_mul(a: Perm, b: Perm) -> Perm:
    """Composition a after b (b acts first)."""
    return tuple(a[b[i]] for i in range(len(a)))


def _perm_inv(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, v in enumerate(a):
        out[v] = i
    return tuple(out)


def evaluate_perm_word(word: Word, assignment: dict[str, Perm]) -> Perm:
    n = len(next(iter(assignment.values())))
    return _evaluate_word(word, assignment, tuple(range(n)), _perm_mul, _perm_inv)


def check_relators(p: Presentation, assignment: dict) -> bool:
    """Do all relators of the presentation hold under the assignment?

    Elements may be ``PhaseClassMatrix`` values or permutations (tuples).
    """
    sample = next(iter(assignment.values()), None)
    if isinstance(sample, PhaseClassMatrix):
        ev = lambda w: evaluate_matrix_word(w, assignment)
    else:
        ev = lambda w: evaluate_perm_word(w, assignment)
    for name in p.generators:
        if name not in assignment:
            raise GroupError(f"assignment misses generator {name!r}")
    return all(ev(lhs) == ev(rhs) for lhs, rhs in p.relators)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


@dataclass
class GroupTable:
    """A finite matrix group up to scalar: elements, words, product table.

    Elements are listed in breadth-first order from the identity, so the
    ordering is deterministic given the generator order; ``words[i]`` is a
    shortest generator word for element ``i``.
    """

    elements: list[PhaseClassMatrix]
    words: list[Word]
    generator_names: tuple[str, ...]
    table: list[list[int]] = field(default_factory=list)
    _index: dict[PhaseClassMatrix, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self._index = {e: i for i, e in enumerate(self.elements)}
        if not self.table:
            self.table = [
                [self._index[a.matmul(b)] for b in self.elements]
                for a in self.elements
            ]

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, element: PhaseClassMatrix) -> int:
        return self._index[element]

    def element_order(self, i: int) -> int:
        k, acc = 1, i
        while acc != 0:
            acc = self.table[acc][i]
            k += 1
        return k

    def assignment(self) -> dict[str, PhaseClassMatrix]:
        """Generator name -> group element, for relator checks."""
        return {
            name: self.elements[self._index[e]]
            for name, e in zip(self.generator_names, self._generators)
        }

    @property
    def _generators(self) -> list[PhaseClassMatrix]:
        by_name = {w: e for e, w in zip(self.elements, self.words) if len(w) == 1}
        return [by_name[(name,)] for name in self.generator_names]


def _as_named(gens) -> list[tuple[str, Matrix]]:
    if isinstance(gens, dict):
        return list(gens.items())
    return [(f"g{i}", m) for i, m in enumerate(gens)]


def enumerate_group(gens) -> GroupTable:
    """Close the generators under multiplication up to scalar (BFS).

    ``gens`` is a list of square exact invertible matrices, or a dict naming
    them.  Raises ``GroupError`` if a generator is singular or the closure
    exceeds ``MAX_GROUP_ORDER``.
    """
    named = _as_named(gens)
    if not named:
        raise GroupError("need at least one generator")
    classes: list[tuple[str, PhaseClassMatrix]] = []
    dim = None
    for name, m in named:
        pc = PhaseClassMatrix.from_matrix(m)
        if dim is None:
            dim = pc.dim
        elif pc.dim != dim:
            raise GroupError("generators must share a dimension")
        f = m.to_float().data
        if abs(np.linalg.det(f)) < 1e-9:
            raise GroupError(f"generator {name} is singular")
        classes.append((name, pc))

    identity = PhaseClassMatrix.identity(dim)
    elements = [identity]
    words: list[Word] = [()]
    seen = {identity: 0}
    frontier = [identity]
    while frontier:
        nxt = []
        for e in frontier:
            w = words[seen[e]]
            for name, g in classes:
                prod = e.matmul(g)
                if prod not in seen:
                    if len(elements) >= MAX_GROUP_ORDER:
                        raise GroupError("group closure exceeds the enumeration bound")
                    seen[prod] = len(elements)
                    elements.append(prod)
                    words.append(w + (name,))
                    nxt.append(prod)
        frontier = nxt
    return GroupTable(elements, words, tuple(name for name, _ in classes))


def order_profile(table: GroupTable) -> dict[int, int]:
    """Histogram of element orders."""
    return dict(Counter(table.element_order(i) for i in range(table.order)))


def permutation_order_profile(n: int) -> dict[int, int]:
    """Element-order histogram of the full symmetric group on n points."""

    def order_of(p: Perm) -> int:
        k, acc = 1, p
        ident = tuple(range(n))
        while acc != ident:
            acc = _perm_mul(acc, p)
            k += 1
        return k

    return dict(Counter(order_of(p) for p in permutations(range(n))))


# ---------------------------------------------------------------------------
# the coloured quarter turns and the isomorphism pair
# ---------------------------------------------------------------------------


def _rotation(color: Color) -> Matrix:
    d = Diagram(
        Flavour.RGB,
        {1: Node(1, color, Phase.c4(1))},
        (Edge(("in", 0), node_end(1)), Edge(node_end(1), ("out", 0))),
        1,
        1,
    )
    return evaluate(d)


def qubit_rotations() -> dict[str, Matrix]:
    """The three coloured quarter-turn gates as exact 2x2 matrices."""
    return {
        "r": _rotation(Color.RED),
        "g": _rotation(Color.GREEN),
        "b": _rotation(Color.BLUE),
    }


def _word(text: str) -> Word:
    return tuple(text.split())


QUARTER_TURN_PRESENTATION = Presentation(
    ("r", "g", "b"),
    (
        (_word("r r r r"), ()),
        (_word("g g g g"), ()),
        (_word("b b b b"), ()),
        (_word("r r g g b b"), ()),
        (_word("g r"), _word("b g")),
        (_word("b g"), _word("r b")),
    ),
)

SWAP_PRESENTATION = Presentation(
    ("t1", "t2", "t3"),
    (
        (_word("t1 t1"), ()),
        (_word("t2 t2"), ()),
        (_word("t3 t3"), ()),
        (_word("t1 t2 t1 t2 t1 t2"), ()),
        (_word("t2 t3 t2 t3 t2 t3"), ()),
        (_word("t1 t3 t1 t3"), ()),
    ),
)

# adjacent transpositions of four points: t1 = (0 1), t2 = (1 2), t3 = (2 3)
TRANSPOSITIONS: dict[str, Perm] = {
    "t1": (1, 0, 2, 3),
    "t2": (0, 2, 1, 3),
    "t3": (0, 1, 3, 2),
}

# transposition -> word in rotations, and rotation -> word in transpositions
TRANSPOSITION_WORDS: dict[str, Word] = {
    "t1": _word("b r r"),
    "t2": _word("b b g"),
    "t3": _word("g r g"),
}
ROTATION_WORDS: dict[str, Word] = {
    "r": _word("t1 t2 t3"),
    "g": _word("t3 t1 t2"),
    "b": _word("t1 t2 t3 t1 t2"),
}


def check_iso_pair(
    f_map: dict[str, Word] | None = None,
    g_map: dict[str, Word] | None = None,
) -> bool:
    """Verify the homomorphism pair between rotations and permutations.

    ``f_map`` sends each transposition generator to a rotation word;
    ``g_map`` sends each rotation generator to a transposition word.  The
    check is fully concrete: both composites must fix every generator, and
    each map must satisfy the relators of its source presentation.
    """
    f_map = TRANSPOSITION_WORDS if f_map is None else f_map
    g_map = ROTATION_WORDS if g_map is None else g_map
    sigma = {
        name: PhaseClassMatrix.from_matrix(m) for name, m in qubit_rotations().items()
    }
    f_images = {t: evaluate_matrix_word(w, sigma) for t, w in f_map.items()}
    g_images = {s: evaluate_perm_word(w, TRANSPOSITIONS) for s, w in g_map.items()}
    if not check_relators(SWAP_PRESENTATION, f_images):
        return False
    if not check_relators(QUARTER_TURN_PRESENTATION, g_images):
        return False
    for s in sigma:  # f(g(s)) == s in the matrix group
        expanded = tuple(tok for t in g_map[s] for tok in f_map[t.rstrip("'")])
        if evaluate_matrix_word(expanded, sigma) != sigma[s]:
            return False
    for t in TRANSPOSITIONS:  # g(f(t)) == t in the permutation group
        expanded = tuple(tok for s in f_map[t] for tok in g_map[s.rstrip("'")])
        if evaluate_perm_word(expanded, TRANSPOSITIONS) != TRANSPOSITIONS[t]:
            return False
    return True


def group_report() -> dict:
    """Order, order profile, relator verdicts, and the isomorphism verdict."""
    table = enumerate_group(qubit_rotations())
    return {
        "order": table.order,
        "order_profile": order_profile(table),
        "symmetric_profile": permutation_order_profile(4),
        "quarter_turn_relators": check_relators(
            QUARTER_TURN_PRESENTATION, table.assignment()
        ),
        "iso_pair": check_iso_pair(),
    }
