"""Exterior-side operator zoo and the shared evaluation namespace.

Per model geometry this builds the bidegree parts of d, the Lefschetz
triple (L, Lam, H), the multiplication families lambda / tau / rho driven
by the torsion 3-form, the Lee-form operators, and a bag of auxiliary
matrices (torsion right-hand sides, frame-trace residuals) consumed by
the identity catalog.  Everything is exact.
"""
from __future__ import annotations

from .algebra import (
    Multivector,
    bidegree_project,
    blade_degree,
    blade_indices,
    coframe,
    contract,
    frame,
    mask_of,
    wedge,
)
from .dirac import CliffordZoo, clifford_left, sigma_from_torsion_form
from .matrices import ExactMatrix
from .models import GeometryError, ModelGeometry, nabla_forms
from .operators import (
    LinearOperator,
    adjoint,
    add_ops,
    bidegree_decompose,
    blade_structure,
    conjugate,
    contract_op,
    ext_mult,
    int_mult,
    k_xi,
    make_operator,
    operator_from_blade_action,
    r_xi,
    supercommutator,
)
from .scalars import ZERO, gq

_D_SHIFTS = {(2, -1): "mu", (1, 0): "del", (0, 1): "delbar", (-1, 2): "mubar"}

_HALF = gq("1/2")


def _psi3(psi: Multivector, a, b, c):
    """psi(s_a e_a, s_b e_b, s_c e_c) for a 3-form; args are (index, sign)."""
    (ia, sa), (ib, sb), (ic, sc) = a, b, c
    if ia == ib or ib == ic or ia == ic:
        return ZERO
    idx = [ia, ib, ic]
    sign = sa * sb * sc
    for i in range(2):
        for j in range(2 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return psi.coeff_mask(mask_of(idx)) * sign


def _vector_block(n: int, col_fn, name: str, picture: str) -> LinearOperator:
    """Operator supported on degree 1: e_b -> col_fn(b), zero elsewhere."""

    def act(blade: Multivector) -> Multivector:
        (mask,) = blade.coeffs
        if blade_degree(mask) != 1:
            return Multivector.zero(n)
        return col_fn(blade_indices(mask)[0])

    return operator_from_blade_action(n, act, name, picture)


class ExteriorZoo:
    """Exterior-picture operators for one model geometry."""

    def __init__(self, geom: ModelGeometry):
        self.geom = geom
        n = geom.n
        bs = blade_structure(n)
        om = geom.omega_form

        self.d = geom.d
        self.d_star = adjoint(self.d).renamed("d*")
        self.dc = conjugate(self.d).renamed("d^c")

        parts = bidegree_decompose(self.d)
        bad = set(parts) - set(_D_SHIFTS)
        if bad:
            raise GeometryError(f"d has unexpected bidegree shifts {sorted(bad)}")
        zero = ExactMatrix.zeros(bs.dim)

        def part(shift) -> LinearOperator:
            if shift in parts:
                return parts[shift].renamed(_D_SHIFTS[shift])
            return LinearOperator(_D_SHIFTS[shift], zero, "ext", "odd", shift)

        self.mu = part((2, -1))
        self.del_ = part((1, 0))
        self.delbar = part((0, 1))
        self.mubar = part((-1, 2))

        # pure-bidegree pieces of the torsion 3-form d omega
        def om_part(p, q):
            if p > n or q > n:
                return Multivector.zero(n)
            return bidegree_project(geom.d_omega, p, q)

        self.muomega = om_part(3, 0)
        self.delomega = om_part(2, 1)
        self.delbaromega = om_part(1, 2)
        self.mubaromega = om_part(0, 3)
        if self.delomega + self.delbaromega != geom.d_omega_plus:
            raise GeometryError("(2,1)+(1,2) parts disagree with the 3-form split")
        if self.muomega + self.mubaromega != geom.d_omega_minus:
            raise GeometryError("(3,0)+(0,3) parts disagree with the 3-form split")
        if self.mubaromega != self.muomega.conj():
            raise GeometryError("conjugation does not swap the pure parts of d omega")

        self.L = ext_mult(om, "L", (1, 1))
        self.Lam = adjoint(self.L).renamed("Lam")
        self.H = supercommutator(self.L, self.Lam).renamed("H")

        self.lam_mu = ext_mult(self.muomega, "lam_mu", (3, 0))
        self.lam_del = ext_mult(self.delomega, "lam_del", (2, 1))
        self.lam_delbar = ext_mult(self.delbaromega, "lam_delbar", (1, 2))
        self.lam_mubar = ext_mult(self.mubaromega, "lam_mubar", (0, 3))
        self.lam_plus = add_ops(self.lam_del, self.lam_delbar).renamed("lam_plus")
        self.lam_minus = add_ops(self.lam_mu, self.lam_mubar).renamed("lam_minus")
        self.lam = add_ops(self.lam_plus, self.lam_minus).renamed("lam")
        self.E_domega = ext_mult(geom.d_omega, "E_domega")
        if self.lam.matrix != self.E_domega.matrix:
            raise GeometryError("lambda parts do not sum to E_{d omega}")

        self.tau_mu = supercommutator(self.Lam, self.lam_mu).renamed("tau_mu")
        self.tau_del = supercommutator(self.Lam, self.lam_del).renamed("tau_del")
        self.tau_delbar = supercommutator(self.Lam, self.lam_delbar).renamed("tau_delbar")
        self.tau_mubar = supercommutator(self.Lam, self.lam_mubar).renamed("tau_mubar")
        self.tau_plus = add_ops(self.tau_del, self.tau_delbar).renamed("tau_plus")
        self.tau_minus = add_ops(self.tau_mu, self.tau_mubar).renamed("tau_minus")
        self.tau = supercommutator(self.Lam, self.lam).renamed("tau")
        if self.tau.matrix != add_ops(self.tau_plus, self.tau_minus).matrix:
            raise GeometryError("tau parts do not sum to [Lam, lam]")

        self.rho_mu = r_xi(self.muomega, "rho_mu", (2, -1))
        self.rho_del = r_xi(self.delomega, "rho_del", (1, 0))
        self.rho_delbar = r_xi(self.delbaromega, "rho_delbar", (0, 1))
        self.rho_mubar = r_xi(self.mubaromega, "rho_mubar", (-1, 2))
        self.rho_plus = add_ops(self.rho_del, self.rho_delbar).renamed("rho_plus")
        self.rho_minus = add_ops(self.rho_mu, self.rho_mubar).renamed("rho_minus")
        self.rho = r_xi(geom.d_omega, "rho")
        if self.rho.matrix != add_ops(self.rho_plus, self.rho_minus).matrix:
            raise GeometryError("rho parts do not sum to r_{d omega}")

        self.E_lee = ext_mult(geom.lee_form, "E_lee")
        self.I_lee = int_mult(geom.lee_form, "I_lee")
        self.E_jlee = ext_mult(geom.jstar_lee, "E_jlee")
        self.I_jlee = int_mult(geom.jstar_lee, "I_jlee")
        self.K_domega_plus = k_xi(geom.d_omega_plus, "K_domega_plus")

        # hard gate: tau(1) must reproduce the Lee form
        tau_unit = bs.to_multivector(
            self.tau.matrix @ bs.to_column(Multivector.unit(n))
        )
        if tau_unit != geom.lee_form:
            raise GeometryError("tau(1) does not equal the Lee form")


# ---------------------------------------------------------------------------
# auxiliary catalog operators
# ---------------------------------------------------------------------------

def _kn_targets(geom: ModelGeometry, a: int):
    """Right-hand sides of the covariant-J frame formulas at X = e_a.

    Columns over e_b:
      plain:   <(nabla_X J)Y, Z>       = (dw(X,Y,Z) - dw(X,JY,JZ) + 4<JX,N(Y,Z)>)/2
      twisted: <J^-1(nabla_JX J)Y, Z>  = (dw(JX,Y,JZ) + dw(JX,JY,Z) - 4<JX,N(Y,Z)>)/2
    """
    n = geom.n
    st = geom.structure
    dom = geom.d_omega
    ja, sa = st.pair(a)

    def col(b: int, twisted: bool) -> Multivector:
        jb, sb = st.pair(b)
        out = Multivector.zero(n)
        for c in range(1, 2 * n + 1):
            jc, sc = st.pair(c)
            nval = geom.nijenhuis(b, c).coeff(ja) * sa
            if twisted:
                v = (
                    _psi3(dom, (ja, sa), (b, 1), (jc, sc))
                    + _psi3(dom, (ja, sa), (jb, sb), (c, 1))
                    - nval * 4
                )
            else:
                v = (
                    _psi3(dom, (a, 1), (b, 1), (c, 1))
                    - _psi3(dom, (a, 1), (jb, sb), (jc, sc))
                    + nval * 4
                )
            if v:
                out = out + frame(n, c) * (v * _HALF)
        return out

    plain = _vector_block(n, lambda b: col(b, False), f"kn_{a}", "cl")
    twist = _vector_block(n, lambda b: col(b, True), f"kn_twist_{a}", "cl")
    return plain, twist


def _sigma_flat_oneform(geom: ModelGeometry, a: int) -> LinearOperator:
    """sigma_flat at e_a on 1-forms: theta^c -> sum_b (dw+(X,e_c,e_b) - dw+(X,Je_c,Je_b)) theta^b."""
    n = geom.n
    st = geom.structure
    psi = geom.d_omega_plus

    def col(c: int) -> Multivector:
        jc, sc = st.pair(c)
        out = Multivector.zero(n)
        for b in range(1, 2 * n + 1):
            jb, sb = st.pair(b)
            v = _psi3(psi, (a, 1), (c, 1), (b, 1)) - _psi3(
                psi, (a, 1), (jc, sc), (jb, sb)
            )
            if v:
                out = out + coframe(n, b) * v
        return out

    return _vector_block(n, col, f"sigflat1f_{a}", "ext")


def _tauplusc_oneform(geom: ModelGeometry) -> LinearOperator:
    """Conjugated tau_plus on 1-forms:

    alpha -> -J*lee ^ alpha + 1/2 sum_{A,B,C} dw+(Je_A, e_C, Je_B) alpha(e_C) theta^A ^ theta^B
    """
    n = geom.n
    st = geom.structure
    psi = geom.d_omega_plus
    mjlee = -geom.jstar_lee

    def col(c: int) -> Multivector:
        out = wedge(mjlee, coframe(n, c))
        for a in range(1, 2 * n + 1):
            ja, sa = st.pair(a)
            for b in range(1, 2 * n + 1):
                jb, sb = st.pair(b)
                v = _psi3(psi, (ja, sa), (c, 1), (jb, sb))
                if v:
                    out = out + wedge(coframe(n, a), coframe(n, b)) * (v * _HALF)
        return out

    return _vector_block(n, col, "tauplusc_1f", "ext")


def _threeform_blocks(geom: ModelGeometry, a: int):
    """Degree-1 witnesses for the pure/mixed 3-form symmetry identities.

    tf_mixed_a: Y -> sum_c [psi(e_a,Y,e_c) - psi(Je_a,JY,e_c)
                            - psi(Je_a,Y,Je_c) - psi(e_a,JY,Je_c)] e_c
                with psi the (2,1)+(1,2) part; zero iff the mixed identity
                holds at X = e_a.
    tf2_lhs/mid/rhs_a: the three slot-rotations of J against the
                (3,0)+(0,3) part; the identity asserts all three agree.
    """
    n = geom.n
    st = geom.structure
    psi = geom.d_omega_plus
    xi = geom.d_omega_minus
    ja, sa = st.pair(a)

    def bilinear(name, entry_fn):
        def col(b: int) -> Multivector:
            out = Multivector.zero(n)
            for c in range(1, 2 * n + 1):
                v = entry_fn(b, c)
                if v:
                    out = out + frame(n, c) * v
            return out

        return _vector_block(n, col, name, "cl")

    def mixed(b, c):
        jb, sb = st.pair(b)
        jc, sc = st.pair(c)
        return (
            _psi3(psi, (a, 1), (b, 1), (c, 1))
            - _psi3(psi, (ja, sa), (jb, sb), (c, 1))
            - _psi3(psi, (ja, sa), (b, 1), (jc, sc))
            - _psi3(psi, (a, 1), (jb, sb), (jc, sc))
        )

    def pure_lhs(b, c):
        return _psi3(xi, (ja, sa), (b, 1), (c, 1))

    def pure_mid(b, c):
        jb, sb = st.pair(b)
        return _psi3(xi, (a, 1), (jb, sb), (c, 1))

    def pure_rhs(b, c):
        jc, sc = st.pair(c)
        return _psi3(xi, (a, 1), (b, 1), (jc, sc))

    return {
        f"tf_mixed_{a}": bilinear(f"tf_mixed_{a}", mixed),
        f"tf2_lhs_{a}": bilinear(f"tf2_lhs_{a}", pure_lhs),
        f"tf2_mid_{a}": bilinear(f"tf2_mid_{a}", pure_mid),
        f"tf2_rhs_{a}": bilinear(f"tf2_rhs_{a}", pure_rhs),
    }


def _frame_trace_pair(geom: ModelGeometry, d_idx: int):
    """The two 2-forms of the frame-trace identity at Z = e_d:

    lhs = sum_{A,B} (psi(e_A,Z,e_B) - psi(e_A,JZ,Je_B)) theta^A ^ theta^B
    rhs = 1/2 sum_{A,B} (psi(e_A,Z,e_B) + psi(Je_A,Z,Je_B)) theta^A ^ theta^B
    """
    n = geom.n
    st = geom.structure
    psi = geom.d_omega_plus
    jd, sd = st.pair(d_idx)
    lhs = Multivector.zero(n)
    rhs = Multivector.zero(n)
    for a in range(1, 2 * n + 1):
        ja, sa = st.pair(a)
        for b in range(1, 2 * n + 1):
            jb, sb = st.pair(b)
            tab = wedge(coframe(n, a), coframe(n, b))
            if tab.is_zero():
                continue
            base = _psi3(psi, (a, 1), (d_idx, 1), (b, 1))
            vl = base - _psi3(psi, (a, 1), (jd, sd), (jb, sb))
            vr = (base + _psi3(psi, (ja, sa), (d_idx, 1), (jb, sb))) * _HALF
            if vl:
                lhs = lhs + tab * vl
            if vr:
                rhs = rhs + tab * vr
    return lhs, rhs


# ---------------------------------------------------------------------------
# namespace assembly
# ---------------------------------------------------------------------------

def assemble(geom: ModelGeometry):
    """Build both zoos and the evaluation namespaces.

    Returns (ops, elements, czoo, ezoo) where ops maps names to operators
    and elements maps names to (multivector, picture) pairs.
    """
    n = geom.n
    bs = blade_structure(n)
    cz = CliffordZoo(geom)
    ez = ExteriorZoo(geom)
    st = geom.structure

    ops: dict[str, LinearOperator] = {
        "d": ez.d,
        "d_star": ez.d_star,
        "dc": ez.dc,
        "dc_star": adjoint(ez.dc).renamed("(d^c)*"),
        "mu": ez.mu,
        "del": ez.del_,
        "delbar": ez.delbar,
        "mubar": ez.mubar,
        "L": ez.L,
        "Lam": ez.Lam,
        "H": ez.H,
        "lam_mu": ez.lam_mu,
        "lam_del": ez.lam_del,
        "lam_delbar": ez.lam_delbar,
        "lam_mubar": ez.lam_mubar,
        "lam_plus": ez.lam_plus,
        "lam_minus": ez.lam_minus,
        "lam": ez.lam,
        "tau_mu": ez.tau_mu,
        "tau_del": ez.tau_del,
        "tau_delbar": ez.tau_delbar,
        "tau_mubar": ez.tau_mubar,
        "tau_plus": ez.tau_plus,
        "tau_minus": ez.tau_minus,
        "tau": ez.tau,
        "rho_mu": ez.rho_mu,
        "rho_del": ez.rho_del,
        "rho_delbar": ez.rho_delbar,
        "rho_mubar": ez.rho_mubar,
        "rho_plus": ez.rho_plus,
        "rho_minus": ez.rho_minus,
        "rho": ez.rho,
        "E_domega": ez.E_domega,
        "E_domega_plus": ext_mult(geom.d_omega_plus, "E_domega_plus"),
        "E_lee": ez.E_lee,
        "I_lee": ez.I_lee,
        "E_jlee": ez.E_jlee,
        "I_jlee": ez.I_jlee,
        "C_lee": contract_op(geom.lee_form, "C_lee"),
        "K_domega_plus": ez.K_domega_plus,
        "tauplusc_1f": _tauplusc_oneform(geom),
        "Ja_ext": make_operator("J_a", bs.Ja_ext, "ext", (0, 0)),
        "Jd_ext": make_operator("J_d", bs.Jd_ext, "ext", (0, 0)),
        "Ja_ext_inv": make_operator("J_a^-1", bs.Ja_ext_inv, "ext", (0, 0)),
        "par_ext": make_operator("par", bs.parity_sign, "ext", (0, 0)),
        "id_ext": make_operator("id", bs.identity, "ext", (0, 0)),
        "proj1_ext": make_operator("proj1", bs.degree_proj[1], "ext", (0, 0)),
        "star_ext": make_operator("star", bs.hodge, "ext"),
        # Clifford side
        "D": cz.D,
        "Dc": cz.Dc,
        "Hc": cz.Hc,
        "L_omega": cz.L_omega,
        "R_omega": cz.R_omega,
        "Jd_cl": cz.Jd,
        "Ja_cl": cz.Ja,
        "Ja_cl_inv": make_operator("J_a^-1", bs.Ja_cl_inv, "cl", (0, 0)),
        "Dsig": cz.Dsig,
        "Dsigc": cz.Dsigc,
        "Dsig_ext": cz.Dsig_ext,
        "Dsig_int": cz.Dsig_int,
        "L_D_omega": cz.L_D_omega,
        "L_Dc_omega": cz.L_Dc_omega,
        "L_Jd_D_omega": cz.L_Jd_D_omega,
        "L_Jd_Dc_omega": cz.L_Jd_Dc_omega,
        "L_Dsig_omega": cz.L_Dsig_omega,
        "L_Dsigc_omega": cz.L_Dsigc_omega,
        "L_d_omega": cz.L_d_omega,
        "L_jlee": cz.L_jlee,
        "par_cl": make_operator("par", bs.parity_sign, "cl", (0, 0)),
        "id_cl": make_operator("id", bs.identity, "cl", (0, 0)),
        "proj1_cl": make_operator("proj1", bs.degree_proj[1], "cl", (0, 0)),
    }

    # multiplication operators attached to the named 3-form pieces
    xis = [
        ("muomega", ez.muomega),
        ("delomega", ez.delomega),
        ("delbaromega", ez.delbaromega),
        ("mubaromega", ez.mubaromega),
        ("domega", geom.d_omega),
    ]
    lam_mat = ez.Lam.matrix
    for nm, mv in xis + [("domega_plus", geom.d_omega_plus), ("lee", geom.lee_form)]:
        ops[f"K_{nm}"] = k_xi(mv, f"K_{nm}")
        lam_mv = bs.to_multivector(lam_mat @ bs.to_column(mv))
        ops[f"ELam_{nm}"] = ext_mult(lam_mv, f"ELam_{nm}")
        ops[f"Lcl_{nm}"] = clifford_left(mv, f"Lcl_{nm}")
    for nm, mv in xis:
        ops[f"C_{nm}"] = contract_op(mv, f"C_{nm}")

    for a in range(1, 2 * n + 1):
        ops[f"nabla_{a}"] = cz.nablas[a - 1]
        ops[f"nablaf_{a}"] = nabla_forms(geom.model, a, geom.connection)
        ops[f"sigma_{a}"] = cz.sigmas[a - 1]
        ops[f"sigmat_{a}"] = sigma_from_torsion_form(geom, a)
        ops[f"Lcl_e_{a}"] = clifford_left(frame(n, a), f"Lcl_e_{a}")
        kn, kn_twist = _kn_targets(geom, a)
        ops[f"kn_{a}"] = kn
        ops[f"kn_twist_{a}"] = kn_twist
        ops[f"sigflat1f_{a}"] = _sigma_flat_oneform(geom, a)
        ops.update(_threeform_blocks(geom, a))

    elements: dict[str, tuple[Multivector, str]] = {
        "omega": (geom.omega_form, "ext"),
        "domega": (geom.d_omega, "ext"),
        "domega_plus": (geom.d_omega_plus, "ext"),
        "domega_minus": (geom.d_omega_minus, "ext"),
        "muomega": (ez.muomega, "ext"),
        "delomega": (ez.delomega, "ext"),
        "delbaromega": (ez.delbaromega, "ext"),
        "mubaromega": (ez.mubaromega, "ext"),
        "lee": (geom.lee_form, "ext"),
        "jstar_lee": (geom.jstar_lee, "ext"),
        "dstar_omega": (geom.dstar_omega, "ext"),
        "unit": (cz.unit, "cl"),
        "omega_cl": (geom.omega_clifford, "cl"),
        "D_omega": (cz.D_omega, "cl"),
        "Dc_omega": (cz.Dc_omega, "cl"),
        "Dsig_omega": (cz.Dsig_omega, "cl"),
        "Dsigc_omega": (cz.Dsigc_omega, "cl"),
        "Jd_D_omega": (cz.Jd_D_omega, "cl"),
        "Jd_Dc_omega": (cz.Jd_Dc_omega, "cl"),
        "sigma_vector_sum": (cz.sigma_vector_sum(), "cl"),
        "jstar_lee_cl": (geom.jstar_lee, "cl"),
    }
    for a in range(1, 2 * n + 1):
        lhs, rhs = _frame_trace_pair(geom, a)
        elements[f"tf_b_lhs_{a}"] = (lhs, "ext")
        elements[f"tf_b_rhs_{a}"] = (rhs, "ext")

    return ops, elements, cz, ez
