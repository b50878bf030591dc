"""Matrix semantics for diagrams: exact over Z[w, 1/sqrt2] or as complex doubles.

Every node denotes a spider: the green family copies the computational basis,
the red family the |+>/|-> basis, and the blue family (three-colour flavour
only) the |i>/|-i> basis, each weighting its second basis term by
exp(i*pi*theta/2).  Three-colour red spiders additionally carry the arity
twist i^(ins - outs), which is what the generator equations of that calculus
require.

A node's in-legs are bra indices and its out-legs ket indices, as recorded by
the stored edge directions; an edge contracts its source's ket index against
its target's bra index, with the edge decoration's 2x2 matrix applied from
source to target.  Connected components that never touch the boundary are
deleted before contraction (all semantics here are up to a global scalar).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .cyclo import CycloNum
from .diagram import (
    Color,
    Deco,
    Diagram,
    Flavour,
    Phase,
    in_port,
    is_node_end,
    out_port,
)


class EvalError(ValueError):
    """Raised when a diagram cannot be evaluated in the requested mode."""


# ---------------------------------------------------------------------------
# number backends
# ---------------------------------------------------------------------------


class _ExactBackend:
    exact = True
    dtype = object

    zero = CycloNum.zero()
    one = CycloNum.one()
    _i_pow = (CycloNum.one(), CycloNum.i(), -CycloNum.one(), -CycloNum.i())

    @staticmethod
    def phase_factor(phase: Phase) -> CycloNum:
        if phase.group != "C4":
            raise EvalError("exact evaluation requires quarter-turn (C4) phases")
        return CycloNum.omega(2 * int(phase.value))

    @classmethod
    def i_power(cls, p: int) -> CycloNum:
        return cls._i_pow[p % 4]

    inv_sqrt2 = CycloNum.inv_sqrt2()

    @staticmethod
    def conj(x: CycloNum) -> CycloNum:
        return x.conj()

    @staticmethod
    def asarray(nested) -> np.ndarray:
        shape = _shape_of(nested)
        arr = np.empty(shape, dtype=object)
        for idx in np.ndindex(shape):
            v = nested
            for i in idx:
                v = v[i]
            arr[idx] = v
        return arr


class _FloatBackend:
    exact = False
    dtype = complex

    zero = 0j
    one = 1 + 0j
    _i_pow = (1 + 0j, 1j, -1 + 0j, -1j)

    @staticmethod
    def phase_factor(phase: Phase) -> complex:
        return cmath.exp(1j * phase.radians())

    @classmethod
    def i_power(cls, p: int) -> complex:
        return cls._i_pow[p % 4]

    inv_sqrt2 = complex(2 ** -0.5)

    @staticmethod
    def conj(x: complex) -> complex:
        return x.conjugate()

    @staticmethod
    def asarray(nested) -> np.ndarray:
        return np.array(nested, dtype=complex)


def _shape_of(nested) -> tuple[int, ...]:
    if isinstance(nested, list):
        return (len(nested),) + _shape_of(nested[0])
    return ()


# ---------------------------------------------------------------------------
# node and decoration tensors
# ---------------------------------------------------------------------------


def _basis(be, color: Color) -> tuple[list, list]:
    """(kets, bras): kets[b] / bras[b] are 2-component vectors for basis term b."""
    r = be.inv_sqrt2
    if color is Color.GREEN:
        k0, k1 = [be.one, be.zero], [be.zero, be.one]
        return [k0, k1], [k0, k1]
    if color is Color.RED:
        k0, k1 = [r, r], [r, -r]
        return [k0, k1], [k0, k1]
    # blue: the |i> / |-i> basis; bras are conjugated componentwise
    i = be.i_power(1)
    k0, k1 = [r, i * r], [r, -(i * r)]
    b0, b1 = [r, -(i * r)], [r, i * r]
    return [k0, k1], [b0, b1]


def spider_tensor(
    flavour: Flavour, color: Color, ins: int, outs: int, phase: Phase, be
) -> np.ndarray:
    """Tensor of a spider node, axes ordered [out legs..., in legs...]."""
    kets, bras = _basis(be, color)
    w1 = be.phase_factor(phase)
    if flavour is Flavour.RGB and color is Color.RED:
        w1 = w1 * be.i_power(ins - outs)
    legs = outs + ins
    if legs == 0:
        out = np.empty((), dtype=be.dtype)
        out[()] = be.one + w1
        return out
    total = None
    for b, w in ((0, be.one), (1, w1)):
        vecs = [kets[b]] * outs + [bras[b]] * ins
        term = reduce(np.multiply.outer, (be.asarray(v) for v in vecs))
        term = term * w
        total = term if total is None else total + term
    return total


def deco_matrix(deco: Deco, be) -> np.ndarray:
    """2x2 matrix of an edge decoration, applied source -> target."""
    r = be.inv_sqrt2
    if deco is Deco.H:
        return be.asarray([[r, r], [r, -r]])
    if deco is Deco.DUAL_Y:
        return _rot_matrix(Color.RED, 2, be)
    if deco is Deco.DUAL_C:
        return _rot_matrix(Color.GREEN, 2, be)
    if deco is Deco.DUAL_M:
        return _rot_matrix(Color.BLUE, 2, be)
    if deco is Deco.CW:
        return _rot_matrix(Color.BLUE, 1, be).dot(_rot_matrix(Color.GREEN, 1, be))
    if deco is Deco.CCW:
        cw = deco_matrix(Deco.CW, be)
        return cw.dot(cw)
    raise EvalError(f"no matrix for decoration {deco}")


def _rot_matrix(color: Color, k: int, be) -> np.ndarray:
    t = spider_tensor(Flavour.RGB, color, 1, 1, Phase.c4(k), be)
    return t.reshape(2, 2)


# ---------------------------------------------------------------------------
# contraction
# ---------------------------------------------------------------------------


def _contract(tensors: list[tuple[np.ndarray, list]], be) -> tuple[np.ndarray, list]:
    """Contract shared axis keys greedily; returns the final (tensor, axes)."""
    work = [(t, list(axes)) for t, axes in tensors]

    def trace_repeats(t: np.ndarray, axes: list) -> tuple[np.ndarray, list]:
        while True:
            seen: dict = {}
            pair = None
            for pos, k in enumerate(axes):
                if k in seen:
                    pair = (seen[k], pos)
                    break
                seen[k] = pos
            if pair is None:
                return t, axes
            a, b = pair
            t = np.trace(t, axis1=a, axis2=b)
            axes = [k for i, k in enumerate(axes) if i not in (a, b)]

    work = [trace_repeats(t, a) for t, a in work]

    while True:
        best = None
        for i in range(len(work)):
            for j in range(i + 1, len(work)):
                shared = [k for k in work[i][1] if k in work[j][1]]
                if not shared:
                    continue
                rank = len(work[i][1]) + len(work[j][1]) - 2 * len(shared)
                if best is None or rank < best[0]:
                    best = (rank, i, j, shared)
        if best is None:
            break
        _, i, j, shared = best
        (ta, axa), (tb, axb) = work[i], work[j]
        ia = [axa.index(k) for k in shared]
        ib = [axb.index(k) for k in shared]
        tc = np.tensordot(ta, tb, axes=(ia, ib))
        axc = [k for k in axa if k not in shared] + [k for k in axb if k not in shared]
        work = [w for idx, w in enumerate(work) if idx not in (i, j)]
        work.append(trace_repeats(tc, axc))

    if not work:
        out = np.empty((), dtype=be.dtype)
        out[()] = be.one
        return out, []
    total, axes = work[0]
    for t, a in work[1:]:
        total = np.multiply.outer(total, t)
        axes = axes + a
    return total, axes


def evaluate(d: Diagram, float_mode: bool = False) -> "Matrix":
    """The matrix of a diagram: rows index outputs, columns inputs, big-endian."""
    d.validate()
    be = _FloatBackend if float_mode else _ExactBackend

    kept_nodes: set[int] = set()
    for nodes, touches in d.components():
        if touches:
            kept_nodes |= nodes
    edges = [
        e
        for e in d.edges
        if all(not is_node_end(ep) or ep[1] in kept_nodes for ep in (e.src, e.dst))
    ]

    # Axis keys: ports are final axes; plain edges share one key between their
    # two ends; decorated edges get distinct end keys joined by the 2x2 matrix.
    def end_keys(idx: int, e) -> tuple:
        if e.deco is Deco.PLAIN:
            if not is_node_end(e.src):
                return e.src, e.src
            if not is_node_end(e.dst):
                return e.dst, e.dst
            return ("e", idx), ("e", idx)
        src_key = e.src if not is_node_end(e.src) else ("e", idx, "s")
        dst_key = e.dst if not is_node_end(e.dst) else ("e", idx, "t")
        return src_key, dst_key

    keys = [end_keys(i, e) for i, e in enumerate(edges)]

    tensors: list[tuple[np.ndarray, list]] = []
    for n in sorted(kept_nodes):
        node = d.nodes[n]
        out_axes = [keys[i][0] for i, e in enumerate(edges) if e.src == ("node", n)]
        in_axes = [keys[i][1] for i, e in enumerate(edges) if e.dst == ("node", n)]
        t = spider_tensor(
            d.flavour, node.color, len(in_axes), len(out_axes), node.phase, be
        )
        tensors.append((t, out_axes + in_axes))
    for i, e in enumerate(edges):
        if e.deco is not Deco.PLAIN:
            # matrix element D[t, s]: axis order [target key, source key]
            tensors.append((deco_matrix(e.deco, be), [keys[i][1], keys[i][0]]))
        elif not is_node_end(e.src) and not is_node_end(e.dst):
            tensors.append((deco_matrix_identity(be), [e.dst, e.src]))

    total, axes = _contract(tensors, be)

    wanted = [out_port(j) for j in range(d.n_out)] + [in_port(i) for i in range(d.n_in)]
    if sorted(map(repr, axes)) != sorted(map(repr, wanted)):
        raise EvalError("internal error: boundary axes do not line up")
    perm = [axes.index(k) for k in wanted]
    total = np.transpose(total, perm) if perm else total
    return Matrix(total.reshape(2 ** d.n_out, 2 ** d.n_in), exact=be.exact)


def deco_matrix_identity(be) -> np.ndarray:
    return be.asarray([[be.one, be.zero], [be.zero, be.one]])


def eval_float(d: Diagram) -> "Matrix":
    """Float evaluation; accepts both C4 and U(1) phases."""
    return evaluate(d, float_mode=True)


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Matrix:
    data: np.ndarray
    exact: bool

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape  # type: ignore[return-value]

    def entry(self, r: int, c: int):
        return self.data[r, c]

    def dagger(self) -> "Matrix":
        if self.exact:
            conj = np.vectorize(lambda x: x.conj(), otypes=[object])
            return Matrix(conj(self.data).T.copy(), True)
        return Matrix(self.data.conj().T.copy(), False)

    def matmul(self, other: "Matrix") -> "Matrix":
        return Matrix(self.data.dot(other.data), self.exact and other.exact)

    def kron(self, other: "Matrix") -> "Matrix":
        return Matrix(np.kron(self.data, other.data), self.exact and other.exact)

    def to_float(self) -> "Matrix":
        if not self.exact:
            return self
        conv = np.vectorize(lambda x: x.to_approx(), otypes=[complex])
        return Matrix(conv(self.data).astype(complex), False)

    def entry_texts(self) -> list[list[str]]:
        if self.exact:
            return [[x.to_text() for x in row] for row in self.data]
        return [[_complex_text(x) for x in row] for row in self.data]

    def to_text(self) -> str:
        return "\n".join(", ".join(row) for row in self.entry_texts())


def _complex_text(z: complex) -> str:
    sign = "+" if z.imag >= 0 else "-"
    return f"{float(z.real)!r}{sign}{float(abs(z.imag))!r}j"


def equal_up_to_scalar(m: Matrix, n: Matrix, tol: float | None = None) -> bool:
    """True when m = z * n for some nonzero scalar z.

    Exact matrices use cross-multiplication (no division); float comparisons
    take a tolerance (default 1e-9) on max entry deviation after scaling.
    """
    if m.shape != n.shape:
        return False
    if m.exact and n.exact and tol is None:
        flat_m = m.data.reshape(-1)
        flat_n = n.data.reshape(-1)
        pivot = next((i for i, x in enumerate(flat_n) if not x.is_zero()), None)
        if pivot is None:
            return all(x.is_zero() for x in flat_m)
        if flat_m[pivot].is_zero():
            return False
        zm, zn = flat_m[pivot], flat_n[pivot]
        return all(zm * flat_n[i] == zn * flat_m[i] for i in range(len(flat_m)))
    tol = 1e-9 if tol is None else tol
    flat_a = m.to_float().data.reshape(-1)
    flat_b = n.to_float().data.reshape(-1)
    ma = float(np.max(np.abs(flat_a)))
    mb = float(np.max(np.abs(flat_b)))
    if ma <= tol or mb <= tol:
        return ma <= tol and mb <= tol
    flat_a, flat_b = flat_a / ma, flat_b / mb
    pivot = int(np.argmax(np.abs(flat_b)))
    z = flat_a[pivot] / flat_b[pivot]
    return bool(np.max(np.abs(flat_a - z * flat_b)) <= tol)


def check_dagger_functor(d: Diagram, float_mode: bool = False) -> bool:
    """eval(dagger(d)) must match the conjugate transpose of eval(d), up to scalar."""
    m = evaluate(d, float_mode=float_mode)
    md = evaluate(d.dagger(), float_mode=float_mode)
    tol = None if (m.exact and md.exact) else 1e-9
    return equal_up_to_scalar(m.dagger(), md, tol=tol)
