"""Operator layer: parity, supercommutator, conjugations, rebuild, Lefschetz."""
import random

import numpy as np
import pytest

from kahlerid import gq
from kahlerid.algebra import AdaptedStructure, Multivector, coframe, frame, wedge
from kahlerid.matrices import ExactMatrix
from kahlerid.operators import (
    LinearOperator,
    StructuralError,
    add_ops,
    adjoint,
    apply_operator,
    bar,
    blade_structure,
    compose,
    conjugate,
    derivation_rebuild,
    ext_mult,
    int_mult,
    make_operator,
    measured_bidegree,
    operator_bidegree_components,
    r_xi,
    scale_op,
    supercommutator,
    transport,
)


# -- structure ------------------------------------------------------------------

def test_blade_structure_shapes():
    bs = blade_structure(2)
    assert bs.dim == 16
    assert sorted(bs.degree_indices) == [0, 1, 2, 3, 4]
    assert len(bs.degree_indices[2]) == 6
    om = AdaptedStructure(2).omega()
    assert bs.to_multivector(bs.to_column(om)) == om


def test_parity_detection():
    E1 = ext_mult(coframe(2, 1), "E1")
    assert E1.parity == "odd"
    L = ext_mult(AdaptedStructure(2).omega(), "L")
    assert L.parity == "even"
    mixed = add_ops(E1, L)
    assert mixed.parity == "mixed"


def test_supercommutator_requires_definite_parity():
    E1 = ext_mult(coframe(2, 1), "E1")
    L = ext_mult(AdaptedStructure(2).omega(), "L")
    mixed = add_ops(E1, L)
    with pytest.raises(StructuralError):
        supercommutator(mixed, L)


def test_picture_mismatch_raises():
    E1 = ext_mult(coframe(2, 1), "E1")
    F1 = LinearOperator("F1", E1.matrix, "cl", E1.parity, E1.bidegree)
    with pytest.raises(StructuralError):
        supercommutator(E1, F1)
    with pytest.raises(StructuralError):
        compose(E1, F1)
    with pytest.raises(StructuralError):
        add_ops(E1, F1)


# -- Lefschetz sl2 -----------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3])
def test_lefschetz_weight_operator(n):
    """[L, Lam] acts on degree k as (k - n) id; [Lam, L] as (n - k) id."""
    bs = blade_structure(n)
    L = ext_mult(AdaptedStructure(n).omega(), "L", (1, 1))
    Lam = adjoint(L)
    H = supercommutator(L, Lam)
    H_op = supercommutator(Lam, L)
    for k in range(2 * n + 1):
        for idx in bs.degree_indices[k]:
            blade = bs.to_multivector(ExactMatrix.column(bs.dim, {idx: gq(1)}))
            assert apply_operator(H, blade) == blade.scale(gq(k - n))
            assert apply_operator(H_op, blade) == blade.scale(gq(n - k))


def test_lefschetz_bidegrees():
    L = ext_mult(AdaptedStructure(2).omega(), "L", (1, 1))
    assert measured_bidegree(L) == {(1, 1)}
    assert measured_bidegree(adjoint(L)) == {(-1, -1)}
    assert adjoint(L).bidegree == (-1, -1)


# -- adjoint / conjugation ----------------------------------------------------------

def test_adjoint_involution_and_antilinearity():
    E1 = ext_mult(coframe(2, 1), "E1")
    assert adjoint(adjoint(E1)).matrix == E1.matrix
    c = gq(2, 3)
    assert adjoint(scale_op(E1, c)).matrix == scale_op(adjoint(E1), c.conjugate()).matrix


def test_int_mult_is_adjoint_of_ext_mult():
    for i in (1, 2, 3, 4):
        E = ext_mult(coframe(2, i), "E")
        assert int_mult(coframe(2, i), "I").matrix == adjoint(E).matrix


def test_conjugation_scalar_on_pure_bidegree(ws):
    # P^c = i^{q-p} P for P concentrated in bidegree (p, q)
    from kahlerid.scalars import i_power
    ops = ws("nil6").ops
    mu, delta = ops["mu"], ops["del"]
    assert conjugate(mu).matrix == scale_op(mu, i_power(-3)).matrix  # (p,q) = (2,-1)
    assert conjugate(delta).matrix == scale_op(delta, i_power(-1)).matrix  # (1,0)


def test_bar_swaps_bidegree(ws):
    mu = ws("nil6").ops["mu"]
    mubar = ws("nil6").ops["mubar"]
    assert bar(mu).matrix == mubar.matrix
    assert bar(mu).bidegree == (-1, 2)


def test_transport_flips_picture(ws):
    D = ws("kt4").ops["D"]
    t = transport(D)
    assert t.picture == "ext"
    assert transport(t).picture == "cl"
    assert transport(t).matrix == D.matrix


# -- bidegree decomposition ---------------------------------------------------------

def test_d_bidegree_components(ws):
    d = ws("nil6").ops["d"]
    comps = operator_bidegree_components(d)
    assert set(comps) == {(2, -1), (1, 0), (0, 1), (-1, 2)}
    total = None
    for mat in comps.values():
        total = mat if total is None else total + mat
    assert total == d.matrix


# -- r operator ---------------------------------------------------------------------

def test_r_xi_sign_convention():
    xi = Multivector.basis(2, 1, 2, 3)
    r = r_xi(xi, "r")
    assert apply_operator(r, coframe(2, 1)) == -wedge(coframe(2, 2), coframe(2, 3))
    # r kills scalars and, for a 3-form, raises degree by one
    assert apply_operator(r, Multivector.unit(2)).is_zero()


# -- graded Jacobi -------------------------------------------------------------------

def test_graded_jacobi_random_triples():
    bs = blade_structure(1)
    rng = random.Random(20240817)
    pm = bs.parity_sign
    half = gq("1/2")

    def rand_pure(parity):
        re = np.array([[rng.randint(-3, 3) for _ in range(4)] for _ in range(4)],
                      dtype=np.int64)
        m = ExactMatrix(re, np.zeros((4, 4), dtype=np.int64), 1)
        sym = pm @ m @ pm
        part = (m + sym) if parity == "even" else (m - sym)
        return make_operator("x", part.scale(half), "ext")

    checked = 0
    sign = {"even": 0, "odd": 1}
    for _ in range(100):
        A, B, C = (rand_pure(rng.choice(["even", "odd"])) for _ in range(3))
        pa, pb, pc = sign[A.parity], sign[B.parity], sign[C.parity]
        total = add_ops(
            scale_op(supercommutator(A, supercommutator(B, C)), gq((-1) ** (pa * pc))),
            scale_op(supercommutator(B, supercommutator(C, A)), gq((-1) ** (pb * pa))),
            scale_op(supercommutator(C, supercommutator(A, B)), gq((-1) ** (pc * pb))),
        )
        assert total.matrix.is_zero()
        checked += 1
    assert checked == 100


# -- derivation rebuild ---------------------------------------------------------------

def test_rebuild_fixes_antiderivation(ws):
    d = ws("nil6").ops["d"]
    assert derivation_rebuild(d).matrix == d.matrix


def test_rebuild_detects_non_derivation(ws):
    proj1 = ws("kt4").ops["proj1_ext"]
    assert derivation_rebuild(proj1).matrix != proj1.matrix


def test_rebuild_even_derivation(ws):
    nab = ws("hopf4").ops["nabla_1"]
    assert derivation_rebuild(nab).matrix == nab.matrix
