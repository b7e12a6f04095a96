"""Finite-dimensional model spaces: unimodular Lie algebras with inner frame.

A model is a real Lie algebra of dimension 2n with orthonormal frame
e_1..e_2n and structure constants [e_A, e_B] = sum_C c^C_{AB} e_C, carrying
the adapted almost complex structure J e_i = e_{i+n}.  Invariant forms are
identified with the exterior algebra of the dual; the Chevalley-Eilenberg
differential, the Levi-Civita connection in the invariant frame, and the
Nijenhuis tensor are all exact rational computations.

Unimodularity (tr ad_X = 0) is required: it makes the matrix adjoint of d
coincide with the formal codifferential, which the whole operator calculus
relies on.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    AdaptedStructure,
    Multivector,
    blade_indices,
    coframe,
    contract,
    frame,
    hodge_star,
    j_vector,
    three_form_split,
    wedge,
)
from .matrices import ExactMatrix
from .operators import (
    LinearOperator,
    StructuralError,
    apply_operator,
    blade_structure,
    make_operator,
    operator_from_blade_action,
)
from .scalars import GaussianRational, ONE, ZERO


class ModelFormatError(ValueError):
    """Malformed model description (bad JSON shape, indices, or values)."""


class ModelValidationError(ValueError):
    """Structure constants violate a Lie-algebra invariant."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__(report.summary())


class GeometryError(RuntimeError):
    """An internal cross-check failed while deriving model geometry."""


# ---------------------------------------------------------------------------
# models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LieModel:
    name: str
    n: int
    entries: tuple[tuple[int, int, int, Fraction], ...]

    @property
    def dim(self) -> int:
        return 2 * self.n

    def structure(self, a: int, b: int, c: int) -> Fraction:
        """c^c_{ab} with antisymmetric completion over stored entries."""
        tot = Fraction(0)
        for (x, y, z, v) in self.entries:
            if z != c:
                continue
            if (x, y) == (a, b):
                tot += v
            elif (x, y) == (b, a):
                tot -= v
        return tot

    def bracket_frame(self, a: int, b: int) -> Multivector:
        out = {}
        for (x, y, z, v) in self.entries:
            if (x, y) == (a, b):
                out[z] = out.get(z, Fraction(0)) + v
            elif (x, y) == (b, a):
                out[z] = out.get(z, Fraction(0)) - v
        return Multivector(
            self.n, {1 << (z - 1): GaussianRational(v) for z, v in out.items() if v}
        )

    def bracket(self, x: Multivector, y: Multivector) -> Multivector:
        """Bilinear extension of the frame bracket to degree-1 elements."""
        out = Multivector.zero(self.n)
        for ma, ca in x.coeffs.items():
            for mb, cb in y.coeffs.items():
                (a,) = blade_indices(ma)
                (b,) = blade_indices(mb)
                if a == b:
                    continue
                out = out + self.bracket_frame(a, b).scale(ca * cb)
        return out


def from_brackets(name: str, n: int, brackets: dict) -> LieModel:
    """brackets: {(a, b): {c: value}} with a < b, 1-based indices."""
    entries = []
    for (a, b), targets in sorted(brackets.items()):
        for c, v in sorted(targets.items()):
            entries.append((a, b, c, Fraction(v)))
    return LieModel(name, n, tuple(entries))


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationFailure:
    invariant: str
    indices: tuple[int, ...]
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    model: str
    ok: bool
    failures: tuple[ValidationFailure, ...]

    def summary(self) -> str:
        if self.ok:
            return f"model {self.model}: all Lie-algebra invariants hold"
        lines = [f"model {self.model}: {len(self.failures)} invariant failure(s)"]
        for f in self.failures:
            lines.append(f"  {f.invariant} at {f.indices}: {f.detail}")
        return "\n".join(lines)


def validate_model(m: LieModel) -> ValidationReport:
    failures: list[ValidationFailure] = []
    dim = m.dim

    for (a, b, c, v) in m.entries:
        for idx in (a, b, c):
            if not 1 <= idx <= dim:
                failures.append(
                    ValidationFailure(
                        "index-range", (a, b, c), f"index {idx} outside 1..{dim}"
                    )
                )
        if a == b and v:
            failures.append(
                ValidationFailure(
                    "antisymmetry", (a, b, c), f"[e_{a}, e_{a}] must vanish, got {v}"
                )
            )
    if failures:
        return ValidationReport(m.name, False, tuple(failures))

    seen: dict[tuple[int, int, int], Fraction] = {}
    for (a, b, c, v) in m.entries:
        if (a, b, c) in seen:
            failures.append(
                ValidationFailure("duplicate-entry", (a, b, c), "entry stored twice")
            )
        seen[(a, b, c)] = v
    for (a, b, c), v in seen.items():
        w = seen.get((b, a, c))
        if w is not None and v != -w:
            failures.append(
                ValidationFailure(
                    "antisymmetry",
                    (a, b, c),
                    f"c^{c}_{{{a}{b}}} = {v} but c^{c}_{{{b}{a}}} = {w}",
                )
            )
    if failures:
        return ValidationReport(m.name, False, tuple(failures))

    # Jacobi: [[A,B],C] + [[B,C],A] + [[C,A],B] = 0
    for a in range(1, dim + 1):
        for b in range(a + 1, dim + 1):
            for c in range(b + 1, dim + 1):
                tot = (
                    m.bracket(m.bracket_frame(a, b), frame(m.n, c))
                    + m.bracket(m.bracket_frame(b, c), frame(m.n, a))
                    + m.bracket(m.bracket_frame(c, a), frame(m.n, b))
                )
                if not tot.is_zero():
                    d_idx = blade_indices(next(iter(tot.coeffs)))[0]
                    failures.append(
                        ValidationFailure(
                            "jacobi",
                            (a, b, c, d_idx),
                            f"jacobiator component {tot.coeffs[1 << (d_idx - 1)]}"
                            f" along e_{d_idx}",
                        )
                    )

    # unimodularity: sum_A c^A_{AB} = 0 for each B
    for b in range(1, dim + 1):
        tr = sum(m.structure(a, b, a) for a in range(1, dim + 1))
        if tr:
            failures.append(
                ValidationFailure(
                    "unimodularity", (b,), f"tr ad_e{b} = {-tr} must vanish"
                )
            )

    return ValidationReport(m.name, not failures, tuple(failures))


# ---------------------------------------------------------------------------
# Chevalley-Eilenberg differential
# ---------------------------------------------------------------------------

def ce_differential(m: LieModel) -> LinearOperator:
    """d on invariant forms: d t^C = -sum_{A<B} c^C_{AB} t^A ^ t^B."""
    n = m.n
    dim = m.dim
    dtheta: dict[int, Multivector] = {}
    for c in range(1, dim + 1):
        acc: dict[int, GaussianRational] = {}
        for a in range(1, dim + 1):
            for b in range(a + 1, dim + 1):
                v = m.structure(a, b, c)
                if v:
                    mask = (1 << (a - 1)) | (1 << (b - 1))
                    acc[mask] = acc.get(mask, ZERO) - GaussianRational(v)
        dtheta[c] = Multivector(n, acc)

    def act(blade: Multivector) -> Multivector:
        if not blade.coeffs:
            return Multivector.zero(n)
        (mask,) = blade.coeffs
        idx = blade_indices(mask)
        out = Multivector.zero(n)
        for pos, i in enumerate(idx):
            pre = Multivector(n, {_mask(idx[:pos]): ONE})
            suf = Multivector(n, {_mask(idx[pos + 1:]): ONE})
            term = wedge(pre, wedge(dtheta[i], suf))
            out = out + (term if pos % 2 == 0 else -term)
        return out

    return operator_from_blade_action(n, act, "d", "ext")


def _mask(indices) -> int:
    mm = 0
    for i in indices:
        mm |= 1 << (i - 1)
    return mm


# ---------------------------------------------------------------------------
# Levi-Civita connection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConnectionTable:
    """Christoffel table: nabla_{e_A} e_B = sum_C gamma[(A,B,C)] e_C."""

    n: int
    gamma: tuple[tuple[tuple[int, int, int], Fraction], ...]

    def coeff(self, a: int, b: int, c: int) -> Fraction:
        for key, v in self.gamma:
            if key == (a, b, c):
                return v
        return Fraction(0)

    def derivative(self, a: int, b: int) -> Multivector:
        out = {}
        for (x, y, z), v in self.gamma:
            if (x, y) == (a, b) and v:
                out[1 << (z - 1)] = GaussianRational(v)
        return Multivector(self.n, out)


def levi_civita(m: LieModel) -> ConnectionTable:
    """Koszul formula in an orthonormal invariant frame:
    2 <nabla_{e_A} e_B, e_C> = c^C_{AB} - c^A_{BC} + c^B_{CA}.
    """
    dim = m.dim
    rows = []
    for a in range(1, dim + 1):
        for b in range(1, dim + 1):
            for c in range(1, dim + 1):
                v = (
                    m.structure(a, b, c)
                    - m.structure(b, c, a)
                    + m.structure(c, a, b)
                ) / 2
                if v:
                    rows.append(((a, b, c), v))
    return ConnectionTable(m.n, tuple(rows))


def _extend_even_derivation(n, action, name, picture) -> LinearOperator:
    """Degree-0 derivation over wedge from its action on index vectors."""

    def act(blade: Multivector) -> Multivector:
        if not blade.coeffs:
            return Multivector.zero(n)
        (mask,) = blade.coeffs
        idx = blade_indices(mask)
        out = Multivector.zero(n)
        for pos, i in enumerate(idx):
            pre = Multivector(n, {_mask(idx[:pos]): ONE})
            suf = Multivector(n, {_mask(idx[pos + 1:]): ONE})
            out = out + wedge(pre, wedge(action[i], suf))
        return out

    return operator_from_blade_action(n, act, name, picture)


def nabla(m: LieModel, a: int, connection: ConnectionTable | None = None) -> LinearOperator:
    """nabla_{e_a} on polyvectors/Clifford elements (derivation extension)."""
    conn = connection or levi_civita(m)
    action = {b: conn.derivative(a, b) for b in range(1, m.dim + 1)}
    return _extend_even_derivation(m.n, action, f"nabla_{a}", "cl")


def nabla_forms(m: LieModel, a: int, connection: ConnectionTable | None = None) -> LinearOperator:
    """nabla_{e_a} on forms: (nabla alpha)(Y) = -alpha(nabla Y) on invariants."""
    conn = connection or levi_civita(m)
    action = {}
    for c in range(1, m.dim + 1):
        acc = {}
        for b in range(1, m.dim + 1):
            v = conn.coeff(a, b, c)
            if v:
                acc[1 << (b - 1)] = GaussianRational(-v)
        action[c] = Multivector(m.n, acc)
    return _extend_even_derivation(m.n, action, f"nabla_forms_{a}", "ext")


# ---------------------------------------------------------------------------
# Nijenhuis tensor
# ---------------------------------------------------------------------------

def nijenhuis(m: LieModel, a: int, b: int) -> Multivector:
    """N(X,Y) = 1/4 ([JX,JY] - J[JX,Y] - J[X,JY] - [X,Y]) on frame vectors."""
    x = frame(m.n, a)
    y = frame(m.n, b)
    jx = j_vector(x, "cl")
    jy = j_vector(y, "cl")
    out = (
        m.bracket(jx, jy)
        - j_vector(m.bracket(jx, y), "cl")
        - j_vector(m.bracket(x, jy), "cl")
        - m.bracket(x, y)
    )
    return out.scale(Fraction(1, 4))


# ---------------------------------------------------------------------------
# geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelGeometry:
    model: LieModel
    structure: AdaptedStructure
    connection: ConnectionTable
    d: LinearOperator
    omega_form: Multivector
    omega_clifford: Multivector
    d_omega: Multivector
    d_omega_plus: Multivector
    d_omega_minus: Multivector
    lee_form: Multivector
    jstar_lee: Multivector
    dstar_omega: Multivector
    nijenhuis_table: dict
    integrable: bool
    almost_kahler: bool
    lee_zero: bool

    @property
    def n(self) -> int:
        return self.model.n

    def nijenhuis(self, a: int, b: int) -> Multivector:
        if a == b:
            return Multivector.zero(self.n)
        if (a, b) in self.nijenhuis_table:
            return self.nijenhuis_table[(a, b)]
        return -self.nijenhuis_table[(b, a)]


def geometry(m: LieModel) -> ModelGeometry:
    report = validate_model(m)
    if not report.ok:
        raise ModelValidationError(report)

    n = m.n
    bs = blade_structure(n)
    st = AdaptedStructure(n)
    d = ce_differential(m)

    d2 = d.matrix @ d.matrix
    if not d2.is_zero():
        raise GeometryError(f"model {m.name}: d^2 != 0 despite Jacobi passing")

    # matrix adjoint of d must be the formal codifferential -*d*
    codiff = -(bs.hodge @ (d.matrix @ bs.hodge))
    if d.matrix.adjoint() != codiff:
        raise GeometryError(
            f"model {m.name}: matrix adjoint of d is not -*d* (codifferential)"
        )

    omega = st.omega()
    d_omega = apply_operator(d, omega)
    plus, minus = three_form_split(d_omega)

    lee = contract(omega, plus)
    lee_full = contract(omega, d_omega)
    dstar_omega_vec = bs.to_multivector(d.matrix.adjoint() @ bs.to_column(omega))
    lee_via_dstar = -j_vector(dstar_omega_vec, "ext")
    if lee != lee_full:
        raise GeometryError(
            f"model {m.name}: omega _| d_omega disagrees with omega _| d_omega_plus"
        )
    if lee != lee_via_dstar:
        raise GeometryError(
            f"model {m.name}: Lee form cross-check -J*(d* omega) failed"
        )

    nij = {}
    integrable = True
    for a in range(1, m.dim + 1):
        for b in range(a + 1, m.dim + 1):
            val = nijenhuis(m, a, b)
            nij[(a, b)] = val
            if not val.is_zero():
                integrable = False

    return ModelGeometry(
        model=m,
        structure=st,
        connection=levi_civita(m),
        d=d,
        omega_form=omega,
        omega_clifford=omega,
        d_omega=d_omega,
        d_omega_plus=plus,
        d_omega_minus=minus,
        lee_form=lee,
        jstar_lee=j_vector(lee, "ext"),
        dstar_omega=dstar_omega_vec,
        nijenhuis_table=nij,
        integrable=integrable,
        almost_kahler=d_omega.is_zero(),
        lee_zero=lee.is_zero(),
    )


# ---------------------------------------------------------------------------
# built-in models
# ---------------------------------------------------------------------------

def _builtin_defs():
    return {
        "t2": (1, {}, "abelian, n=1"),
        "t4": (2, {}, "abelian, n=2"),
        "t6": (3, {}, "abelian, n=3"),
        "kt4": (
            2,
            {(1, 2): {3: 1}},
            "nilpotent n=2: almost Kahler (d omega = 0) with N != 0",
        ),
        "hopf4": (
            2,
            {(1, 2): {3: 1}, (2, 3): {1: 1}, (1, 3): {2: -1}},
            "su(2) x R, n=2: integrable with nonzero Lee form",
        ),
        "iwa6": (
            3,
            {(1, 2): {3: 1}, (4, 5): {3: -1}, (1, 5): {6: 1}, (2, 4): {6: -1}},
            "complex Heisenberg, n=3: integrable, d omega != 0",
        ),
        "nil6": (
            3,
            {(1, 2): {4: -1}, (1, 3): {5: -1}, (2, 3): {6: -1}},
            "nilpotent n=3: all four bidegree parts of d omega nonzero",
        ),
    }


def builtin_models() -> dict[str, LieModel]:
    return {
        name: from_brackets(name, n, brackets)
        for name, (n, brackets, _) in _builtin_defs().items()
    }


def builtin_descriptions() -> dict[str, str]:
    return {name: desc for name, (_, _, desc) in _builtin_defs().items()}


def get_model(name: str) -> LieModel:
    models = builtin_models()
    if name not in models:
        raise ModelFormatError(
            f"unknown model {name!r}; built-ins: {', '.join(sorted(models))}"
        )
    return models[name]


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

def _parse_value(v, where: str) -> Fraction:
    if isinstance(v, bool):
        raise ModelFormatError(f"{where}: value must be rational, got boolean")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as e:
            raise ModelFormatError(f"{where}: bad rational string {v!r}: {e}") from e
    if isinstance(v, float):
        raise ModelFormatError(
            f"{where}: floats are not accepted; use an integer or a 'p/q' string"
        )
    raise ModelFormatError(f"{where}: value must be int or 'p/q' string, got {type(v).__name__}")


def load_model_dict(data: dict) -> LieModel:
    if not isinstance(data, dict):
        raise ModelFormatError("model description must be a JSON object")
    for key in ("name", "n", "brackets"):
        if key not in data:
            raise ModelFormatError(f"missing required key {key!r}")
    name = data["name"]
    if not isinstance(name, str) or not name:
        raise ModelFormatError("'name' must be a nonempty string")
    n = data["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ModelFormatError("'n' must be a positive integer")
    brackets = data["brackets"]
    if not isinstance(brackets, list):
        raise ModelFormatError("'brackets' must be a list")
    dim = 2 * n
    entries = []
    seen = set()
    for pos, row in enumerate(brackets):
        where = f"brackets[{pos}]"
        if not isinstance(row, dict):
            raise ModelFormatError(f"{where}: expected an object")
        for key in ("a", "b", "c", "v"):
            if key not in row:
                raise ModelFormatError(f"{where}: missing key {key!r}")
        a, b, c = row["a"], row["b"], row["c"]
        for label, idx in (("a", a), ("b", b), ("c", c)):
            if isinstance(idx, bool) or not isinstance(idx, int):
                raise ModelFormatError(f"{where}: index {label} must be an integer")
            if not 1 <= idx <= dim:
                raise ModelFormatError(
                    f"{where}: index {label}={idx} outside 1..{dim} (invariant: index-range)"
                )
        if a >= b:
            raise ModelFormatError(
                f"{where}: requires a < b, got a={a}, b={b} (invariant: antisymmetry;"
                " store each bracket once with a < b)"
            )
        if (a, b, c) in seen:
            raise ModelFormatError(
                f"{where}: duplicate entry for (a={a}, b={b}, c={c})"
            )
        seen.add((a, b, c))
        v = _parse_value(row["v"], where)
        if v:
            entries.append((a, b, c, v))
    return LieModel(name, n, tuple(entries))


def load_model_file(path) -> LieModel:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as e:
        raise ModelFormatError(f"cannot read model file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"model file {path} is not valid JSON: {e}") from e
    return load_model_dict(data)


def resolve_model(spec: str) -> LieModel:
    """A built-in name, or a path to a JSON model file."""
    if spec in builtin_models():
        return get_model(spec)
    if spec.endswith(".json") or "/" in spec:
        return load_model_file(spec)
    raise ModelFormatError(
        f"unknown model {spec!r}; use a built-in name"
        f" ({', '.join(sorted(builtin_models()))}) or a path to a JSON file"
    )
