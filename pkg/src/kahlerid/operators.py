"""Linear operators on the blade coefficient space, and the exterior zoo.

Operators are dense exact (or float) matrices indexed by blade masks,
tagged with a picture ("ext" for forms, "cl" for Clifford/polyvectors),
a parity computed from the matrix, and an optional declared bidegree.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, replace

import numpy as np

from .algebra import (
    AdaptedStructure,
    Multivector,
    blade_degree,
    blade_indices,
    contract,
    coframe,
    degree_spectrum,
    frame,
    hodge_star,
    j_algebra,
    j_derivation,
    j_vector,
    wedge,
)
from .matrices import ExactMatrix, FloatMatrix
from .scalars import GaussianRational, ONE, gq

PICTURES = ("ext", "cl")


class StructuralError(RuntimeError):
    """An operation was asked of operands that structurally cannot support it."""


@dataclass(frozen=True)
class LinearOperator:
    name: str
    matrix: ExactMatrix | FloatMatrix
    picture: str
    parity: str  # "even" | "odd" | "mixed"
    bidegree: tuple[int, int] | None = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def renamed(self, name: str) -> "LinearOperator":
        return replace(self, name=name)


# ---------------------------------------------------------------------------
# per-dimension structure cache
# ---------------------------------------------------------------------------

class BladeStructure:
    """Shared per-n data: gradings, J matrices, projectors, conversions."""

    def __init__(self, n: int):
        self.n = n
        self.dim = 4**n
        self.structure = AdaptedStructure(n)
        degs = np.array([blade_degree(m) for m in range(self.dim)], dtype=np.int64)
        self.degrees = degs
        self.even_mask = (degs % 2) == 0
        self.odd_mask = ~self.even_mask
        self.degree_indices = {
            k: np.nonzero(degs == k)[0] for k in range(2 * n + 1)
        }
        self.identity = ExactMatrix.identity(self.dim)
        self.parity_sign = ExactMatrix.diag([(-1) ** int(k) for k in degs])
        self.degree_proj = {
            k: ExactMatrix.diag([1 if d == k else 0 for d in degs])
            for k in range(2 * n + 1)
        }
        self.Ja_ext = self._blade_matrix(lambda mv: j_algebra(mv, "ext"))
        self.Jd_ext = self._blade_matrix(lambda mv: j_derivation(mv, "ext"))
        self.Ja_cl = self._blade_matrix(lambda mv: j_algebra(mv, "cl"))
        self.Jd_cl = self._blade_matrix(lambda mv: j_derivation(mv, "cl"))
        # J_a is a real signed permutation: inverse = transpose
        self.Ja_ext_inv = self.Ja_ext.transpose()
        self.Ja_cl_inv = self.Ja_cl.transpose()
        self.hodge = self._blade_matrix(hodge_star)
        self._proj: dict[str, dict[tuple[int, int], ExactMatrix]] = {}
        self._proj_blocks: dict[str, dict[tuple[int, int], ExactMatrix]] = {}

    # -- conversions -------------------------------------------------------
    def mv(self, mask: int) -> Multivector:
        return Multivector(self.n, {mask: ONE})

    def to_column(self, a: Multivector) -> ExactMatrix:
        return ExactMatrix.column(self.dim, a.coeffs)

    def to_multivector(self, col: ExactMatrix) -> Multivector:
        if col.shape != (self.dim, 1):
            raise ValueError("expected a column vector")
        return Multivector(self.n, col.column_dict(0))

    def _blade_matrix(self, fn) -> ExactMatrix:
        cols = [fn(self.mv(m)).coeffs for m in range(self.dim)]
        return ExactMatrix.from_columns(self.dim, cols)

    # -- bidegree projectors -------------------------------------------------
    def bidegree_pairs(self) -> list[tuple[int, int]]:
        out = []
        for k in range(2 * self.n + 1):
            for m in degree_spectrum(self.n, k):
                out.append(((k + m) // 2, (k - m) // 2))
        return out

    def projectors(self, picture: str) -> dict[tuple[int, int], ExactMatrix]:
        """Full-dimension projector matrices onto each bidegree."""
        if picture not in self._proj:
            jd = self.Jd_ext if picture == "ext" else self.Jd_cl
            out = {}
            for p, q in self.bidegree_pairs():
                k = p + q
                delta = p - q
                mat = self.degree_proj[k]
                for m in degree_spectrum(self.n, k):
                    if m == delta:
                        continue
                    mat = (jd @ mat - mat.scale(gq(0, m))).scale(
                        ONE / gq(0, delta - m)
                    )
                out[(p, q)] = mat
            self._proj[picture] = out
        return self._proj[picture]

    def projector_blocks(self, picture: str) -> dict[tuple[int, int], ExactMatrix]:
        """Projector restricted to its own degree block (small matrices)."""
        if picture not in self._proj_blocks:
            full = self.projectors(picture)
            out = {}
            for (p, q), mat in full.items():
                idx = self.degree_indices[p + q]
                out[(p, q)] = _submatrix(mat, idx, idx)
            self._proj_blocks[picture] = out
        return self._proj_blocks[picture]


def _submatrix(m: ExactMatrix, rows: np.ndarray, cols: np.ndarray) -> ExactMatrix:
    grid = np.ix_(rows, cols)
    return ExactMatrix(m.re[grid].copy(), m.im[grid].copy(), m.den)


@functools.lru_cache(maxsize=None)
def blade_structure(n: int) -> BladeStructure:
    return BladeStructure(n)


def _n_from_dim(dim: int) -> int:
    n = 0
    d = dim
    while d > 1:
        d //= 4
        n += 1
    if 4**n != dim:
        raise ValueError(f"dimension {dim} is not a power of 4")
    return n


# ---------------------------------------------------------------------------
# operator construction
# ---------------------------------------------------------------------------

def compute_parity(matrix, bs: BladeStructure) -> str:
    if isinstance(matrix, FloatMatrix):
        data = matrix.data
        ee = np.any(data[np.ix_(bs.even_mask, bs.even_mask)]) or np.any(
            data[np.ix_(bs.odd_mask, bs.odd_mask)]
        )
        eo = np.any(data[np.ix_(bs.even_mask, bs.odd_mask)]) or np.any(
            data[np.ix_(bs.odd_mask, bs.even_mask)]
        )
    else:
        def block_nonzero(rows, cols):
            grid = np.ix_(rows, cols)
            return bool(np.any(matrix.re[grid]) or np.any(matrix.im[grid]))

        ee = block_nonzero(bs.even_mask, bs.even_mask) or block_nonzero(
            bs.odd_mask, bs.odd_mask
        )
        eo = block_nonzero(bs.even_mask, bs.odd_mask) or block_nonzero(
            bs.odd_mask, bs.even_mask
        )
    if ee and eo:
        return "mixed"
    if eo:
        return "odd"
    return "even"


def make_operator(name, matrix, picture, bidegree=None) -> LinearOperator:
    if picture not in PICTURES:
        raise ValueError(f"unknown picture {picture!r}")
    bs = blade_structure(_n_from_dim(matrix.shape[0]))
    return LinearOperator(name, matrix, picture, compute_parity(matrix, bs), bidegree)


def operator_from_blade_action(n, fn, name, picture, bidegree=None) -> LinearOperator:
    """Build an operator column-by-column from its action on basis blades."""
    bs = blade_structure(n)
    cols = []
    for mask in range(bs.dim):
        out = fn(bs.mv(mask))
        cols.append(out.coeffs if out is not None else {})
    return make_operator(name, ExactMatrix.from_columns(bs.dim, cols), picture, bidegree)


def apply_operator(op: LinearOperator, a: Multivector) -> Multivector:
    bs = blade_structure(a.n)
    if not isinstance(op.matrix, ExactMatrix):
        raise StructuralError("apply_operator requires an exact matrix")
    return bs.to_multivector(op.matrix @ bs.to_column(a))


# ---------------------------------------------------------------------------
# operator calculus
# ---------------------------------------------------------------------------

def _parity_sign(p: str, q: str) -> int:
    return -1 if (p == "odd" and q == "odd") else 1


def supercommutator(a: LinearOperator, b: LinearOperator) -> LinearOperator:
    """Graded commutator [a, b] = ab - (-1)^{|a||b|} ba."""
    if a.picture != b.picture:
        raise StructuralError(
            f"cannot commute {a.name} ({a.picture}) with {b.name} ({b.picture})"
        )
    if a.parity == "mixed" or b.parity == "mixed":
        raise StructuralError(
            f"supercommutator needs definite parity, got"
            f" {a.name}:{a.parity}, {b.name}:{b.parity}"
        )
    sign = _parity_sign(a.parity, b.parity)
    ab = a.matrix @ b.matrix
    ba = b.matrix @ a.matrix
    mat = ab - ba if sign == 1 else ab + ba
    bid = None
    if a.bidegree is not None and b.bidegree is not None:
        bid = (a.bidegree[0] + b.bidegree[0], a.bidegree[1] + b.bidegree[1])
    return make_operator(f"[{a.name},{b.name}]", mat, a.picture, bid)


def compose(a: LinearOperator, b: LinearOperator) -> LinearOperator:
    if a.picture != b.picture:
        raise StructuralError("cannot compose operators from different pictures")
    bid = None
    if a.bidegree is not None and b.bidegree is not None:
        bid = (a.bidegree[0] + b.bidegree[0], a.bidegree[1] + b.bidegree[1])
    return make_operator(f"({a.name}.{b.name})", a.matrix @ b.matrix, a.picture, bid)


def adjoint(op: LinearOperator) -> LinearOperator:
    bid = None if op.bidegree is None else (-op.bidegree[0], -op.bidegree[1])
    return make_operator(f"{op.name}*", op.matrix.adjoint(), op.picture, bid)


def conjugate(op: LinearOperator) -> LinearOperator:
    """J-conjugation P^c: J_a^{-1} P J_a in the operator's own picture."""
    bs = blade_structure(_n_from_dim(op.dim))
    if isinstance(op.matrix, FloatMatrix):
        j = FloatMatrix.from_exact(bs.Ja_ext if op.picture == "ext" else bs.Ja_cl)
        jinv = FloatMatrix.from_exact(
            bs.Ja_ext_inv if op.picture == "ext" else bs.Ja_cl_inv
        )
    else:
        j = bs.Ja_ext if op.picture == "ext" else bs.Ja_cl
        jinv = bs.Ja_ext_inv if op.picture == "ext" else bs.Ja_cl_inv
    return make_operator(f"{op.name}^c", jinv @ (op.matrix @ j), op.picture, op.bidegree)


def bar(op: LinearOperator) -> LinearOperator:
    """Entrywise conjugation (conj . P . conj); swaps declared bidegree."""
    bid = None if op.bidegree is None else (op.bidegree[1], op.bidegree[0])
    return make_operator(f"bar({op.name})", op.matrix.bar(), op.picture, bid)


def transport(op: LinearOperator) -> LinearOperator:
    """Musical transport: same coefficient matrix, other picture."""
    other = "cl" if op.picture == "ext" else "ext"
    return LinearOperator(f"{op.name}~", op.matrix, other, op.parity, op.bidegree)


def scale_op(op: LinearOperator, c) -> LinearOperator:
    return make_operator(f"({c})*{op.name}", op.matrix.scale(c), op.picture, op.bidegree)


def add_ops(*ops: LinearOperator) -> LinearOperator:
    first = ops[0]
    mat = first.matrix
    for o in ops[1:]:
        if o.picture != first.picture:
            raise StructuralError("cannot add operators from different pictures")
        mat = mat + o.matrix
    name = "+".join(o.name for o in ops)
    return make_operator(f"({name})", mat, first.picture)


# ---------------------------------------------------------------------------
# bidegree measurement
# ---------------------------------------------------------------------------

def _block_map(matrix: ExactMatrix, bs: BladeStructure):
    """Nonzero degree blocks of a matrix: {(l, k): submatrix}."""
    out = {}
    for k, cols in bs.degree_indices.items():
        if len(cols) == 0:
            continue
        for l, rows in bs.degree_indices.items():
            grid = np.ix_(rows, cols)
            if np.any(matrix.re[grid]) or np.any(matrix.im[grid]):
                out[(l, k)] = ExactMatrix(
                    matrix.re[grid].copy(), matrix.im[grid].copy(), matrix.den
                )
    return out


def operator_bidegree_components(op: LinearOperator) -> dict[tuple[int, int], ExactMatrix]:
    """Decompose P = sum of components with pure bidegree shift (a, b).

    Keys are shifts; values are degree-block sandwiches Pi_{p+a,q+b} P Pi_{p,q}
    summed over sources and reassembled to full dimension.
    """
    if isinstance(op.matrix, FloatMatrix):
        return _bidegree_components_float(op)
    bs = blade_structure(_n_from_dim(op.dim))
    blocks = _block_map(op.matrix, bs)
    proj = bs.projector_blocks(op.picture)
    pairs_by_degree: dict[int, list[tuple[int, int]]] = {}
    for p, q in bs.bidegree_pairs():
        pairs_by_degree.setdefault(p + q, []).append((p, q))
    acc: dict[tuple[int, int], dict] = {}
    for (l, k), blk in blocks.items():
        for (p, q) in pairs_by_degree[k]:
            y = blk @ proj[(p, q)]
            if y.is_zero():
                continue
            for (r, s) in pairs_by_degree[l]:
                z = proj[(r, s)] @ y
                if z.is_zero():
                    continue
                shift = (r - p, s - q)
                slot = acc.setdefault(shift, {})
                key = (l, k)
                slot[key] = slot[key] + z if key in slot else z
    out = {}
    for shift, blockmap in acc.items():
        out[shift] = _assemble_blocks(blockmap, bs)
    return out


def _assemble_blocks(blockmap, bs: BladeStructure) -> ExactMatrix:
    den = 1
    for b in blockmap.values():
        den = math.lcm(den, b.den)
    re = np.zeros((bs.dim, bs.dim), dtype=object)
    im = np.zeros((bs.dim, bs.dim), dtype=object)
    for (l, k), b in blockmap.items():
        rows = bs.degree_indices[l]
        cols = bs.degree_indices[k]
        f = den // b.den
        grid = np.ix_(rows, cols)
        re[grid] = b.re.astype(object) * f
        im[grid] = b.im.astype(object) * f
    return ExactMatrix(re, im, den)


def _bidegree_components_float(op: LinearOperator, tol: float = 1e-12):
    bs = blade_structure(_n_from_dim(op.dim))
    proj = {
        pq: FloatMatrix.from_exact(m)
        for pq, m in bs.projectors(op.picture).items()
    }
    out: dict[tuple[int, int], FloatMatrix] = {}
    for (p, q), pr in proj.items():
        y = op.matrix @ pr
        if y.max_norm() <= tol:
            continue
        for (r, s), pl in proj.items():
            z = pl @ y
            if z.max_norm() <= tol:
                continue
            shift = (r - p, s - q)
            out[shift] = out[shift] + z if shift in out else z
    return out


def measured_bidegree(op: LinearOperator) -> set[tuple[int, int]]:
    """Set of bidegree shifts (a, b) on which P has a nonzero component."""
    if isinstance(op.matrix, FloatMatrix):
        return set(_bidegree_components_float(op))
    return set(operator_bidegree_components(op))


def bidegree_decompose(op: LinearOperator) -> dict[tuple[int, int], LinearOperator]:
    return {
        shift: make_operator(f"{op.name}[{shift[0]},{shift[1]}]", mat, op.picture, shift)
        for shift, mat in operator_bidegree_components(op).items()
    }


# ---------------------------------------------------------------------------
# multiplication operators
# ---------------------------------------------------------------------------

def ext_mult(phi: Multivector, name: str, bidegree=None) -> LinearOperator:
    """Left exterior multiplication E_phi."""
    return operator_from_blade_action(
        phi.n, lambda b: wedge(phi, b), name, "ext", bidegree
    )


def int_mult(phi: Multivector, name: str, bidegree=None) -> LinearOperator:
    """Interior multiplication, defined as the adjoint of E_phi."""
    e = ext_mult(phi, f"E[{name}]")
    bid = bidegree
    return make_operator(name, e.matrix.adjoint(), "ext", bid)


def contract_op(phi: Multivector, name: str, bidegree=None) -> LinearOperator:
    """Bilinear contraction by phi (no conjugation of phi's coefficients)."""
    return operator_from_blade_action(
        phi.n, lambda b: contract(phi, b), name, "ext", bidegree
    )


def r_xi(xi: Multivector, name: str, bidegree=None) -> LinearOperator:
    """r_xi(phi) = -sum_A (e_A _| xi) ^ (e_A _| phi).

    For xi of pure bidegree (r, s) this has bidegree (r-1, s-1); it is the
    cross-term operator in the Clifford multiplication expansion.
    """
    n = xi.n
    pieces = []
    for a in range(1, 2 * n + 1):
        ea = frame(n, a)
        c = contract(ea, xi)
        if not c.is_zero():
            pieces.append((a, c))

    def act(b: Multivector) -> Multivector:
        out = Multivector.zero(n)
        for a, c in pieces:
            out = out + wedge(c, contract(frame(n, a), b))
        return -out

    return operator_from_blade_action(n, act, name, "ext", bidegree)


def k_xi(xi: Multivector, name: str) -> LinearOperator:
    """K_xi(phi) = sum_C (e_C _| xi) ^ (J e_C _| phi)."""
    n = xi.n
    pieces = []
    for c_idx in range(1, 2 * n + 1):
        ec = frame(n, c_idx)
        piece = contract(ec, xi)
        if not piece.is_zero():
            pieces.append((j_vector(ec, "cl"), piece))

    def act(b: Multivector) -> Multivector:
        out = Multivector.zero(n)
        for jec, piece in pieces:
            out = out + wedge(piece, contract(jec, b))
        return out

    return operator_from_blade_action(n, act, name, "ext")


def derivation_rebuild(op: LinearOperator) -> LinearOperator:
    """Extend op's degree-<=1 action as a (graded) derivation over wedge.

    The operand must kill scalars.  Its parity decides the sign rule:
    even -> derivation, odd -> antiderivation.  Comparing the rebuild with
    the original operator verifies the derivation property as a single
    matrix identity.  The wedge rule also certifies Clifford derivations:
    a degree-0 map whose degree-1 block is skew extends identically over
    both products (the contraction corrections cancel in pairs).
    """
    if op.parity == "mixed":
        raise StructuralError("derivation rebuild needs a definite parity")
    bs = blade_structure(_n_from_dim(op.dim))
    n = bs.n
    if not isinstance(op.matrix, ExactMatrix):
        raise StructuralError("derivation rebuild requires an exact matrix")
    unit_col = op.matrix.column_dict(0)
    if unit_col:
        raise StructuralError(f"{op.name} does not kill scalars; not a derivation")
    action = {}
    for i in range(1, 2 * n + 1):
        col = op.matrix.column_dict(1 << (i - 1))
        action[i] = Multivector(n, col)
    odd = op.parity == "odd"

    def act(b: Multivector) -> Multivector:
        if not b.coeffs:
            return Multivector.zero(n)
        (mask,) = b.coeffs
        idx = blade_indices(mask)
        out = Multivector.zero(n)
        for pos, i in enumerate(idx):
            prefix = Multivector(n, {mask_from(idx[:pos]): ONE})
            suffix = Multivector(n, {mask_from(idx[pos + 1:]): ONE})
            term = wedge(prefix, wedge(action[i], suffix))
            if odd and pos % 2 == 1:
                term = -term
            out = out + term
        return out

    return operator_from_blade_action(n, act, f"rebuild({op.name})", op.picture)


def mask_from(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << (i - 1)
    return m
