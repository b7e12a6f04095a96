"""Lie-algebra models: validation, CE differential, connection, Nijenhuis."""
from fractions import Fraction

import pytest

from kahlerid import gq
from kahlerid.algebra import Multivector, coframe, frame, j_vector, wedge
from kahlerid.models import (
    ModelFormatError,
    ModelValidationError,
    builtin_models,
    ce_differential,
    from_brackets,
    geometry,
    get_model,
    levi_civita,
    load_model_dict,
    load_model_file,
    nabla,
    nabla_forms,
    nijenhuis,
    resolve_model,
    validate_model,
)
from kahlerid.operators import apply_operator, derivation_rebuild


# -- validation ----------------------------------------------------------------

def test_builtins_validate():
    for name, m in builtin_models().items():
        report = validate_model(m)
        assert report.ok, f"{name}: {report.summary()}"


def test_jacobi_witness():
    # [e1,e2]=e3 and [e3,e4]=e1 is traceless but fails Jacobi on (1,2,4)
    m = from_brackets("bad", 2, {(1, 2): {3: 1}, (3, 4): {1: 1}})
    report = validate_model(m)
    assert not report.ok
    names = {f.invariant for f in report.failures}
    assert names == {"jacobi"}
    # jacobiator of (e1, e2, e4) sticks out along e1
    assert any(f.indices == (1, 2, 4, 1) for f in report.failures)


def test_unimodularity_witness():
    m = from_brackets("bad", 2, {(1, 2): {2: 1}})
    report = validate_model(m)
    assert not report.ok
    assert {f.invariant for f in report.failures} == {"unimodularity"}
    assert "tr ad_e1" in report.failures[0].detail


def test_antisymmetry_and_range_witnesses():
    m = from_brackets("bad", 1, {(1, 1): {2: 1}, (1, 2): {5: 1}})
    report = validate_model(m)
    names = {f.invariant for f in report.failures}
    assert "antisymmetry" in names
    assert "index-range" in names


def test_geometry_rejects_invalid_model():
    m = from_brackets("bad", 2, {(1, 2): {2: 1}})
    with pytest.raises(ModelValidationError) as exc:
        geometry(m)
    assert not exc.value.report.ok


# -- CE differential -------------------------------------------------------------

def test_kt4_differential():
    m = get_model("kt4")  # [e1, e2] = e3
    d = ce_differential(m)
    assert apply_operator(d, coframe(2, 3)) == -wedge(coframe(2, 1), coframe(2, 2))
    for i in (1, 2, 4):
        assert apply_operator(d, coframe(2, i)).is_zero()
    assert (d.matrix @ d.matrix).is_zero()
    assert d.parity == "odd"


def test_differential_is_antiderivation():
    d = ce_differential(get_model("nil6"))
    assert derivation_rebuild(d).matrix == d.matrix


def test_abelian_differential_vanishes():
    assert ce_differential(get_model("t4")).is_zero()


# -- Levi-Civita connection -------------------------------------------------------

def test_koszul_values_kt4():
    conn = levi_civita(get_model("kt4"))
    half = Fraction(1, 2)
    assert conn.coeff(1, 2, 3) == half        # nabla_{e1} e2 = e3/2
    assert conn.coeff(1, 3, 2) == -half       # nabla_{e1} e3 = -e2/2
    assert conn.coeff(2, 3, 1) == half
    assert conn.coeff(3, 1, 2) == -half
    assert conn.coeff(2, 1, 3) == -half
    assert conn.coeff(1, 4, 1) == 0


@pytest.mark.parametrize("name", ["kt4", "hopf4", "nil6"])
def test_connection_is_levi_civita(name):
    # defining properties: metric compatibility and zero torsion
    m = get_model(name)
    conn = levi_civita(m)
    dim = m.dim
    for a in range(1, dim + 1):
        for b in range(1, dim + 1):
            for c in range(1, dim + 1):
                assert conn.coeff(a, b, c) == -conn.coeff(a, c, b)
    for a in range(1, dim + 1):
        for b in range(a + 1, dim + 1):
            torsion = conn.derivative(a, b) - conn.derivative(b, a)
            assert torsion == m.bracket_frame(a, b)


def test_nabla_is_derivation_and_transports():
    m = get_model("hopf4")
    for a in (1, 2, 3, 4):
        op = nabla(m, a)
        assert derivation_rebuild(op).matrix == op.matrix
        assert op.parity == "even"


def test_nabla_forms_value_kt4():
    # (nabla_{e1} theta^3)(e_b) = -theta^3(nabla_{e1} e_b) gives -theta^2/2
    op = nabla_forms(get_model("kt4"), 1)
    assert apply_operator(op, coframe(2, 3)) == coframe(2, 2).scale(gq(Fraction(-1, 2)))


# -- Nijenhuis tensor --------------------------------------------------------------

def test_nijenhuis_values():
    assert nijenhuis(get_model("kt4"), 1, 2) == frame(2, 3).scale(gq(Fraction(-1, 4)))
    assert nijenhuis(get_model("nil6"), 1, 2) == frame(3, 4).scale(gq(Fraction(1, 4)))


@pytest.mark.parametrize("name", ["hopf4", "iwa6"])
def test_integrable_models_have_zero_nijenhuis(name):
    m = get_model(name)
    for a in range(1, m.dim + 1):
        for b in range(1, m.dim + 1):
            assert nijenhuis(m, a, b).is_zero()
    assert geometry(m).integrable


def test_nijenhuis_symmetries_nil6():
    m = get_model("nil6")
    for a in (1, 2, 5):
        for b in (3, 4, 6):
            assert nijenhuis(m, a, b) == -nijenhuis(m, b, a)
            # N(Y, JZ) = -J N(Y, Z)
            jz = j_vector(frame(3, b))
            (idx, coeff), = jz.coeffs.items()
            target = nijenhuis(m, a, idx.bit_length()).scale(coeff)
            assert target == -j_vector(nijenhuis(m, a, b))


# -- derived geometry ---------------------------------------------------------------

def test_geometry_flags():
    flags = {
        name: (g.integrable, g.almost_kahler, g.lee_zero)
        for name, g in ((n, geometry(m)) for n, m in builtin_models().items())
    }
    assert flags["t4"] == (True, True, True)
    assert flags["kt4"] == (False, True, True)
    assert flags["hopf4"] == (True, False, False)
    assert flags["iwa6"] == (True, False, True)
    assert flags["nil6"] == (False, False, True)


def test_hopf4_lee_form():
    g = geometry(get_model("hopf4"))
    assert g.lee_form == coframe(2, 4)
    assert g.jstar_lee == j_vector(coframe(2, 4), "ext")
    # lee = omega _| d omega and lee = -J*(d* omega)
    from kahlerid.algebra import contract
    assert contract(g.omega_form, g.d_omega) == g.lee_form
    assert -j_vector(g.dstar_omega, "ext") == g.lee_form


def test_nil6_d_omega_has_all_four_parts():
    from kahlerid.algebra import bidegree_components
    g = geometry(get_model("nil6"))
    parts = bidegree_components(g.d_omega)
    assert {k for k, v in parts.items() if not v.is_zero()} == {
        (3, 0), (2, 1), (1, 2), (0, 3)}


# -- JSON interchange ----------------------------------------------------------------

def _spec_of(m):
    return {
        "name": m.name, "n": m.n,
        "brackets": [{"a": a, "b": b, "c": c, "v": str(v)}
                     for (a, b, c, v) in m.entries],
    }


def test_json_roundtrip(tmp_path):
    import json
    base = get_model("nil6")
    path = tmp_path / "nil6.json"
    path.write_text(json.dumps(_spec_of(base)))
    loaded = load_model_file(path)
    assert loaded.entries == base.entries
    assert loaded.n == base.n


def test_json_rejects_float_values():
    spec = {"name": "x", "n": 1, "brackets": [{"a": 1, "b": 2, "c": 1, "v": 0.5}]}
    with pytest.raises(ModelFormatError):
        load_model_dict(spec)


def test_json_rejects_bad_index_order():
    spec = {"name": "x", "n": 1, "brackets": [{"a": 2, "b": 1, "c": 1, "v": "1"}]}
    with pytest.raises(ModelFormatError):
        load_model_dict(spec)


def test_json_rejects_out_of_range():
    spec = {"name": "x", "n": 1, "brackets": [{"a": 1, "b": 3, "c": 1, "v": "1"}]}
    with pytest.raises(ModelFormatError):
        load_model_dict(spec)


def test_json_rejects_missing_keys():
    with pytest.raises(ModelFormatError):
        load_model_dict({"name": "x", "n": 1})
    with pytest.raises(ModelFormatError):
        load_model_dict({"name": "x", "brackets": []})


def test_json_accepts_fraction_strings():
    spec = {"name": "x", "n": 2,
            "brackets": [{"a": 1, "b": 2, "c": 3, "v": "-3/4"}]}
    m = load_model_dict(spec)
    assert m.structure(1, 2, 3) == Fraction(-3, 4)
    assert m.structure(2, 1, 3) == Fraction(3, 4)


def test_resolve_model(tmp_path):
    import json
    assert resolve_model("kt4").name == "kt4"
    path = tmp_path / "m.json"
    path.write_text(json.dumps(_spec_of(get_model("t2"))))
    assert resolve_model(str(path)).entries == get_model("t2").entries
    with pytest.raises(ModelFormatError):
        resolve_model("nope")
