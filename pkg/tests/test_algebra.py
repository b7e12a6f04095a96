"""Exterior/Clifford algebra layer: products, J actions, bidegrees, star."""
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kahlerid import gq
from kahlerid.algebra import (
    AdaptedStructure,
    Multivector,
    bidegree_components,
    bidegree_project,
    blade_degree,
    clifford_mul,
    coframe,
    contract,
    degree_spectrum,
    form_eval,
    frame,
    hodge_star,
    inner,
    j_vector,
    three_form_split,
    wedge,
)


def _scalars():
    return st.builds(
        lambda a, b: gq(Fraction(a, 3), Fraction(b, 2)),
        st.integers(-6, 6), st.integers(-4, 4))


def _mv(n):
    dim = 1 << (2 * n)
    return st.dictionaries(st.integers(0, dim - 1), _scalars(), max_size=4).map(
        lambda d: Multivector(n, d))


# -- products -----------------------------------------------------------------

def test_vector_squares_to_minus_norm():
    for n in (1, 2):
        for i in range(1, 2 * n + 1):
            e = frame(n, i)
            assert clifford_mul(e, e) == Multivector.unit(n, -1)


def test_wedge_anticommutes_on_one_forms():
    t1, t2 = coframe(2, 1), coframe(2, 2)
    assert wedge(t2, t1) == -wedge(t1, t2)
    assert wedge(t1, t1).is_zero()


def test_wedge_unit_and_blade():
    assert wedge(Multivector.unit(2, 3), coframe(2, 4)) == Multivector.basis(2, 4, c=3)
    assert wedge(coframe(2, 1), coframe(2, 3)) == Multivector.basis(2, 1, 3)
    # basis() normalizes signs from index order
    assert Multivector.basis(2, 3, 1) == -Multivector.basis(2, 1, 3)


@settings(max_examples=60, deadline=None)
@given(_mv(2), _mv(2))
def test_clifford_vector_is_wedge_minus_contraction(a, phi):
    # Clifford action of a vector: e . phi = e ^ phi - e _| phi
    for i in (1, 2, 3, 4):
        e = frame(2, i)
        assert clifford_mul(e, phi) == wedge(e, phi) - contract(e, phi)
    del a


@settings(max_examples=40, deadline=None)
@given(_mv(2), _mv(2), _mv(2))
def test_products_associative(a, b, c):
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))
    assert clifford_mul(clifford_mul(a, b), c) == clifford_mul(a, clifford_mul(b, c))


@settings(max_examples=60, deadline=None)
@given(_mv(2), _mv(2))
def test_contraction_adjoint_to_wedge(b, c):
    # <alpha ^ b, c> = <b, alpha _| c> for a 1-form alpha
    for i in (1, 2, 3, 4):
        alpha = coframe(2, i)
        assert inner(wedge(alpha, b), c) == inner(b, contract(alpha, c))


def test_omega_self_contraction_counts_pairs():
    for n in (1, 2, 3):
        om = AdaptedStructure(n).omega()
        assert contract(om, om) == Multivector.unit(n, n)


# -- J actions -----------------------------------------------------------------

def test_j_on_vectors_n1():
    assert j_vector(frame(1, 1)) == frame(1, 2)
    assert j_vector(frame(1, 2)) == -frame(1, 1)


def test_j_pullback_on_coframe():
    # J* theta^i = -theta^{i+n}, J* theta^{i+n} = theta^i
    assert j_vector(coframe(2, 1), "ext") == -coframe(2, 3)
    assert j_vector(coframe(2, 3), "ext") == coframe(2, 1)


def test_omega_matches_pairing():
    st2 = AdaptedStructure(2)
    om = st2.omega()
    assert om == wedge(coframe(2, 1), coframe(2, 3)) + wedge(coframe(2, 2), coframe(2, 4))
    assert form_eval(om, frame(2, 1), frame(2, 3)) == gq(1)
    # omega(X, Y) = <JX, Y>
    for a in (1, 2, 3, 4):
        for b in (1, 2, 3, 4):
            assert form_eval(om, frame(2, a), frame(2, b)) == inner(
                j_vector(frame(2, a)), frame(2, b))


# -- bidegree ------------------------------------------------------------------

def test_antiholomorphic_one_form_n1():
    a = coframe(1, 1) - coframe(1, 2).scale(gq(0, 1))
    assert bidegree_project(a, 0, 1) == a
    assert bidegree_project(a, 1, 0).is_zero()
    b = coframe(1, 1) + coframe(1, 2).scale(gq(0, 1))
    assert bidegree_project(b, 1, 0) == b


def test_bidegree_out_of_range_raises():
    with pytest.raises(ValueError):
        bidegree_project(Multivector.basis(2, 1, 2, 3), 3, 0)


def test_bidegree_components_sum_back():
    a = Multivector.basis(2, 1, 2, 3) + Multivector.basis(2, 1, 2).scale(gq(2))
    parts = bidegree_components(a)
    total = Multivector.zero(2)
    for (p, q), comp in parts.items():
        assert p + q == blade_degree(next(iter(comp.coeffs))) or comp.is_zero()
        total = total + comp
    assert total == a


def test_degree_spectrum():
    assert degree_spectrum(2, 0) == [0]
    assert sorted(degree_spectrum(2, 2)) == [-2, 0, 2]  # i(p-q) multipliers p+q=2


def test_three_form_split_nil6(geom):
    g = geom("nil6")
    plus, minus = three_form_split(g.d_omega)
    assert plus + minus == g.d_omega
    comp = bidegree_components(plus)
    assert set(comp) <= {(2, 1), (1, 2)}
    comp_m = bidegree_components(minus)
    assert set(comp_m) <= {(3, 0), (0, 3)}
    assert not plus.is_zero() and not minus.is_zero()


# -- Hodge star ----------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(_mv(2), _mv(2))
def test_star_defining_property(a, b):
    # a ^ *b = <a, conj b> vol on each degree; use pure-degree projections
    st2 = AdaptedStructure(2)
    vol = st2.volume()
    for k in range(5):
        ak = a.degree_part(k)
        bk = b.degree_part(k)
        assert wedge(ak, hodge_star(bk).conj()) == vol.scale(inner(ak, bk))


def test_star_examples():
    assert hodge_star(Multivector.unit(2)) == AdaptedStructure(2).volume()
    assert hodge_star(coframe(1, 1)) == coframe(1, 2)
    assert hodge_star(coframe(1, 2)) == -coframe(1, 1)


# -- evaluation ----------------------------------------------------------------

def test_form_eval_antisymmetry():
    psi = Multivector.basis(2, 1, 2, 3)
    v1, v2, v3 = frame(2, 1), frame(2, 2), frame(2, 3)
    assert form_eval(psi, v1, v2, v3) == gq(1)
    assert form_eval(psi, v2, v1, v3) == gq(-1)
    assert form_eval(psi, v1, v1, v3) == gq(0)
