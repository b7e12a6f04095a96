"""Clifford-side operators on model spaces.

Everything here acts on the Clifford picture: multivectors with the
geometric product v.v = -<v,v>.  The central objects are the Dirac operator
D = sum_A L_{e_A} nabla_{e_A}, the degree-like operator H_c built from
two-sided Clifford multiplication by the fundamental 2-vector, and the
first-order correction sigma_X that measures the failure of the complex
structure to be parallel.
"""
from __future__ import annotations

from fractions import Fraction

from .algebra import (
    Multivector,
    form_eval,
    frame,
    j_vector,
)
from .operators import (
    LinearOperator,
    adjoint,
    apply_operator,
    blade_structure,
    compose,
    conjugate,
    contract_op,
    ext_mult,
    make_operator,
    operator_from_blade_action,
    scale_op,
)
from .models import ModelGeometry, nabla
from .scalars import GaussianRational, gq


def clifford_left(phi: Multivector, name: str, bidegree=None) -> LinearOperator:
    """Left Clifford multiplication L_phi."""
    from .algebra import clifford_mul

    return operator_from_blade_action(
        phi.n, lambda b: clifford_mul(phi, b), name, "cl", bidegree
    )


def clifford_right(phi: Multivector, name: str, bidegree=None) -> LinearOperator:
    """Right Clifford multiplication R_phi."""
    from .algebra import clifford_mul

    return operator_from_blade_action(
        phi.n, lambda b: clifford_mul(b, phi), name, "cl", bidegree
    )


def covariant_derivatives(geom: ModelGeometry) -> tuple[LinearOperator, ...]:
    """(nabla_{e_1}, ..., nabla_{e_2n}) as Clifford-picture operators."""
    m = geom.model
    return tuple(nabla(m, a, geom.connection) for a in range(1, m.dim + 1))


def dirac(geom: ModelGeometry, nablas=None) -> LinearOperator:
    """D = sum_A L_{e_A} nabla_{e_A}."""
    n = geom.n
    nablas = nablas or covariant_derivatives(geom)
    bs = blade_structure(n)
    total = bs.identity.scale(gq(0))
    for a in range(1, 2 * n + 1):
        total = total + (clifford_left(frame(n, a), f"L_e{a}").matrix @ nablas[a - 1].matrix)
    return make_operator("D", total, "cl")


def hc_operator(geom: ModelGeometry) -> LinearOperator:
    """H_c = (1/2i)(L_omega + R_omega), the Clifford-side counterpart of
    the degree-counting commutator on forms."""
    om = geom.omega_clifford
    lw = clifford_left(om, "L_omega")
    rw = clifford_right(om, "R_omega")
    return make_operator("H_c", (lw.matrix + rw.matrix).scale(gq(0, Fraction(-1, 2))), "cl")


def sigma(geom: ModelGeometry, a: int, nablas=None) -> LinearOperator:
    """sigma_{e_a} = [nabla_{e_a}, J_d] + J_a^{-1} [nabla_{J e_a}, J_a].

    An even, degree-preserving operator; it vanishes identically when the
    fundamental form is closed.
    """
    n = geom.n
    nablas = nablas or covariant_derivatives(geom)
    bs = blade_structure(n)
    j, s = geom.structure.pair(a)
    na = nablas[a - 1].matrix
    nja = nablas[j - 1].matrix.scale(GaussianRational(Fraction(s)))
    jd = bs.Jd_cl
    ja = bs.Ja_cl
    part1 = (na @ jd) - (jd @ na)
    part2 = bs.Ja_cl_inv @ ((nja @ ja) - (ja @ nja))
    return make_operator(f"sigma_{a}", part1 + part2, "cl")


def sigma_from_torsion_form(geom: ModelGeometry, a: int) -> LinearOperator:
    """Alternative route on vectors only, extended as an even derivation:
    sigma_X(Y) = sum_B ( (d omega)^+(X, Y, e_B) - (d omega)^+(X, JY, J e_B) ) e_B.
    """
    from .models import _extend_even_derivation

    n = geom.n
    x = frame(n, a)
    plus = geom.d_omega_plus
    action = {}
    for b in range(1, 2 * n + 1):
        y = frame(n, b)
        jy = j_vector(y, "cl")
        acc = {}
        for c in range(1, 2 * n + 1):
            ec = frame(n, c)
            jec = j_vector(ec, "cl")
            v = form_eval(plus, x, y, ec) - form_eval(plus, x, jy, jec)
            if not (v == gq(0)):
                acc[1 << (c - 1)] = v
        action[b] = Multivector(n, acc)
    return _extend_even_derivation(n, action, f"sigma_torsion_{a}", "cl")


def d_sigma(geom: ModelGeometry, sigmas=None) -> LinearOperator:
    """D_sigma = sum_A L_{e_A} sigma_{e_A}."""
    n = geom.n
    sigmas = sigmas or [sigma(geom, a) for a in range(1, 2 * n + 1)]
    bs = blade_structure(n)
    total = bs.identity.scale(gq(0))
    for a in range(1, 2 * n + 1):
        total = total + (clifford_left(frame(n, a), f"L_e{a}").matrix @ sigmas[a - 1].matrix)
    return make_operator("D_sigma", total, "cl")


def d_sigma_split(geom: ModelGeometry, sigmas=None) -> tuple[LinearOperator, LinearOperator]:
    """(D_sigma^ext, D_sigma^int): the wedge and contraction halves of
    D_sigma under e.x = e^x - e_|x, so D_sigma = ext - int."""
    n = geom.n
    sigmas = sigmas or [sigma(geom, a) for a in range(1, 2 * n + 1)]
    bs = blade_structure(n)
    tot_e = bs.identity.scale(gq(0))
    tot_i = bs.identity.scale(gq(0))
    for a in range(1, 2 * n + 1):
        ea = frame(n, a)
        tot_e = tot_e + (ext_mult(ea, f"E_e{a}").matrix @ sigmas[a - 1].matrix)
        tot_i = tot_i + (contract_op(ea, f"I_e{a}").matrix @ sigmas[a - 1].matrix)
    return (
        make_operator("D_sigma_ext", tot_e, "cl"),
        make_operator("D_sigma_int", tot_i, "cl"),
    )


def frame_rotation_check(geom: ModelGeometry, seed: int = 0) -> bool:
    """D is frame-independent: rebuild it from a random signed permutation
    of the orthonormal frame and compare."""
    import random

    rng = random.Random(seed)
    n = geom.n
    dim = 2 * n
    perm = list(range(1, dim + 1))
    rng.shuffle(perm)
    signs = [rng.choice((1, -1)) for _ in range(dim)]
    nablas = covariant_derivatives(geom)
    bs = blade_structure(n)
    total = bs.identity.scale(gq(0))
    for pos, a in enumerate(perm):
        s = Fraction(signs[pos])
        vec = frame(n, a).scale(s)
        # nabla is linear in the direction slot: nabla_{s e_a} = s nabla_{e_a}
        nb = nablas[a - 1].matrix.scale(GaussianRational(s))
        total = total + (clifford_left(vec, "L").matrix @ nb)
    return total == dirac(geom, nablas).matrix


class CliffordZoo:
    """All Clifford-picture operators and elements for one model."""

    def __init__(self, geom: ModelGeometry):
        self.geom = geom
        n = geom.n
        bs = blade_structure(n)
        self.nablas = covariant_derivatives(geom)
        self.sigmas = tuple(sigma(geom, a, self.nablas) for a in range(1, 2 * n + 1))

        om = geom.omega_clifford
        self.L_omega = clifford_left(om, "L_omega")
        self.R_omega = clifford_right(om, "R_omega")
        self.D = dirac(geom, self.nablas)
        self.Dc = conjugate(self.D).renamed("D^c")
        self.Hc = hc_operator(geom)
        self.Jd = make_operator("J_d", bs.Jd_cl, "cl", (0, 0))
        self.Ja = make_operator("J_a", bs.Ja_cl, "cl", (0, 0))
        self.Dsig = d_sigma(geom, self.sigmas)
        self.Dsigc = conjugate(self.Dsig).renamed("D_sigma^c")
        self.Dsig_ext, self.Dsig_int = d_sigma_split(geom, self.sigmas)

        self.unit = Multivector.unit(n)
        self.omega = om
        self.D_omega = apply_operator(self.D, om)
        self.Dc_omega = apply_operator(self.Dc, om)
        self.Dsig_omega = apply_operator(self.Dsig, om)
        self.Dsigc_omega = apply_operator(self.Dsigc, om)
        self.Jd_D_omega = apply_operator(self.Jd, self.D_omega)
        self.Jd_Dc_omega = apply_operator(self.Jd, self.Dc_omega)

        self.L_D_omega = clifford_left(self.D_omega, "L_{D omega}")
        self.L_Dc_omega = clifford_left(self.Dc_omega, "L_{D^c omega}")
        self.L_Jd_D_omega = clifford_left(self.Jd_D_omega, "L_{J_d D omega}")
        self.L_Jd_Dc_omega = clifford_left(self.Jd_Dc_omega, "L_{J_d D^c omega}")
        self.L_Dsig_omega = clifford_left(self.Dsig_omega, "L_{D_sigma omega}")
        self.L_Dsigc_omega = clifford_left(self.Dsigc_omega, "L_{D_sigma^c omega}")
        self.L_d_omega = clifford_left(geom.d_omega, "L_{d omega}")
        self.L_jlee = clifford_left(geom.jstar_lee, "L_{(J* lee)#}")

    def sigma_vector_sum(self) -> Multivector:
        """sum_A sigma_{e_A}(e_A)."""
        n = self.geom.n
        out = Multivector.zero(n)
        for a in range(1, 2 * n + 1):
            out = out + apply_operator(self.sigmas[a - 1], frame(n, a))
        return out
