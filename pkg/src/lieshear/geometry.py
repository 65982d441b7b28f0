"""Geometric structure verification on Lie algebras, exact over the rationals.

Complex structures are real endomorphisms J with J^2 = -Id; the holomorphic
type machinery is realized real-linearly (Nijenhuis tensor, (1,1)-projection)
so everything stays inside exact arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .exterior import KForm, Vector, interior, pullback, wedge
from .lie import LieAlgebra

Matrix = tuple[tuple[Fraction, ...], ...]


def _as_matrix(rows: Sequence[Sequence], n: int, what: str) -> Matrix:
    m = tuple(tuple(Fraction(x) for x in row) for row in rows)
    if len(m) != n or any(len(row) != n for row in m):
        raise ValueError(f"{what} must be {n}x{n}")
    return m


@dataclass(frozen=True)
class Metric:
    """Symmetric Gram matrix of the frame; definiteness decided exactly."""

    gram: Matrix

    def __init__(self, gram: Sequence[Sequence]):
        m = _as_matrix(gram, len(gram), "metric")
        if not linalg.is_symmetric(m):
            raise ValueError("metric must be symmetric")
        object.__setattr__(self, "gram", m)

    @property
    def dim(self) -> int:
        return len(self.gram)

    @classmethod
    def standard(cls, dim: int) -> "Metric":
        return cls(linalg.identity(dim))

    def is_positive_definite(self) -> bool:
        return linalg.is_positive_definite(self.gram)


@dataclass(frozen=True)
class ComplexStructure:
    """Endomorphism J of the frame with J^2 = -Id (dimension must be even)."""

    j: Matrix

    def __init__(self, j: Sequence[Sequence]):
        m = _as_matrix(j, len(j), "J")
        if len(m) % 2:
            raise ValueError("complex structure needs even dimension")
        square = linalg.mat_mul(m, m)
        if square != [[-Fraction(i == k) for k in range(len(m))] for i in range(len(m))]:
            raise ValueError("J^2 must be -Id")
        object.__setattr__(self, "j", m)

    @property
    def dim(self) -> int:
        return len(self.j)

    @classmethod
    def standard(cls, dim: int) -> "ComplexStructure":
        """E_1 -> E_2, E_2 -> -E_1, pairing consecutive frame directions."""
        m = [[Fraction(0)] * dim for _ in range(dim)]
        for k in range(0, dim, 2):
            m[k + 1][k] = Fraction(1)
            m[k][k + 1] = Fraction(-1)
        return cls(m)

    def apply(self, v: Vector) -> Vector:
        return Vector(linalg.mat_vec(self.j, v.components))


def is_closed(g: LieAlgebra, form: KForm) -> bool:
    if not g.jacobi_check().passed:
        raise ValueError("closure test requires the Jacobi identity")
    return g.d(form).is_zero()


def symplectic_check(g: LieAlgebra, omega: KForm) -> bool:
    """Closed and nondegenerate: d(omega) = 0 and omega^(n/2) != 0."""
    if g.dim % 2:
        raise ValueError("symplectic check needs even dimension")
    if omega.dim != g.dim or not (omega.degree == 2 or omega.is_zero()):
        raise ValueError("omega must be a two-form on the algebra")
    if not is_closed(g, omega):
        return False
    power = omega
    for _ in range(g.dim // 2 - 1):
        power = wedge(power, omega)
    return not power.is_zero()


@dataclass(frozen=True)
class NijenhuisResult:
    values: tuple[tuple[tuple[int, int], Vector], ...]  # N(E_i, E_j) for i < j
    integrable: bool

    def value(self, i: int, j: int) -> Vector:
        for (a, b), v in self.values:
            if (a, b) == (i, j):
                return v
        raise KeyError((i, j))


def nijenhuis(g: LieAlgebra, js: ComplexStructure) -> NijenhuisResult:
    """N(v,w) = [Jv,Jw] - J[Jv,w] - J[v,Jw] - [v,w] on all frame pairs."""
    if js.dim != g.dim:
        raise ValueError(f"dimension mismatch: {js.dim} vs {g.dim}")
    values = []
    integrable = True
    for i in range(1, g.dim + 1):
        for j in range(i + 1, g.dim + 1):
            v, w = Vector.basis(g.dim, i), Vector.basis(g.dim, j)
            jv, jw = js.apply(v), js.apply(w)
            n = (
                g.bracket(jv, jw)
                - js.apply(g.bracket(jv, w))
                - js.apply(g.bracket(v, jw))
                - g.bracket(v, w)
            )
            if not n.is_zero():
                integrable = False
            values.append(((i, j), n))
    return NijenhuisResult(values=tuple(values), integrable=integrable)


def type_components(js: ComplexStructure, f2: KForm) -> tuple[KForm, KForm]:
    """Split a two-form into ((2,0)+(0,2), (1,1)) parts relative to J.

    The (1,1) part is (F + F(J., J.))/2; the remainder is J-anti-invariant.
    """
    if f2.dim != js.dim:
        raise ValueError(f"dimension mismatch: {f2.dim} vs {js.dim}")
    if not (f2.degree == 2 or f2.is_zero()):
        raise ValueError("type decomposition needs a two-form")
    pulled = pullback(js.j, f2)
    half = Fraction(1, 2)
    f11 = half * (f2 + pulled)
    anti = half * (f2 - pulled)
    assert anti + f11 == f2
    return anti, f11


@dataclass(frozen=True)
class KahlerReport:
    passed: bool
    checks: dict[str, bool]


def kahler_check(g: LieAlgebra, metric: Metric, js: ComplexStructure, omega: KForm) -> KahlerReport:
    """Positive metric, J-compatibility, omega = metric(J., .), closedness, integrability."""
    if g.dim % 2:
        raise ValueError("Kaehler check needs even dimension")
    if {metric.dim, js.dim, omega.dim} != {g.dim}:
        raise ValueError("metric, J and omega must live on the algebra's dimension")
    jt = linalg.transpose(js.j)
    compat = linalg.mat_mul(jt, linalg.mat_mul(metric.gram, js.j))
    omega_matrix = linalg.mat_mul(jt, metric.gram)  # omega(v, w) = metric(Jv, w)
    omega_expected = KForm(
        g.dim,
        2,
        {
            (1 << (i - 1)) | (1 << (j - 1)): omega_matrix[i - 1][j - 1]
            for i in range(1, g.dim + 1)
            for j in range(i + 1, g.dim + 1)
            if omega_matrix[i - 1][j - 1]
        },
    )
    checks = {
        "metric_positive_definite": metric.is_positive_definite(),
        "metric_j_invariant": compat == [list(r) for r in metric.gram],
        "omega_equals_metric_j": omega == omega_expected,
        "omega_closed": is_closed(g, omega),
        "nijenhuis_vanishes": nijenhuis(g, js).integrable,
    }
    return KahlerReport(passed=all(checks.values()), checks=checks)


@dataclass(frozen=True)
class HalfFlatReport:
    passed: bool
    co_symplectic: bool          # d(omega^2) = 0
    rho_minus_closed: bool
    omega_rho_compatible: bool   # omega ^ rho_- = 0, reported but not gating


def half_flat_check(g: LieAlgebra, omega: KForm, rho_minus: KForm) -> HalfFlatReport:
    if g.dim != 6:
        raise ValueError("half-flat structures live in dimension 6")
    if not (omega.degree == 2 or omega.is_zero()) or not (rho_minus.degree == 3 or rho_minus.is_zero()):
        raise ValueError("need a two-form omega and a three-form rho_-")
    co = g.d(wedge(omega, omega)).is_zero()
    rho = g.d(rho_minus).is_zero()
    return HalfFlatReport(
        passed=co and rho,
        co_symplectic=co,
        rho_minus_closed=rho,
        omega_rho_compatible=wedge(omega, rho_minus).is_zero(),
    )


def g2_cocal_check(g: LieAlgebra, psi: KForm) -> bool:
    """Co-calibration: closure of the four-form (positivity is not decided)."""
    if g.dim != 7:
        raise ValueError("co-calibrated structures live in dimension 7")
    if not (psi.degree == 4 or psi.is_zero()):
        raise ValueError("psi must be a four-form")
    return is_closed(g, psi)


@dataclass(frozen=True)
class PhiStabilityReport:
    b_matrix: Matrix
    definiteness: str  # "positive" | "negative" | "indefinite-or-degenerate"

    @property
    def stable(self) -> bool:
        return self.definiteness in ("positive", "negative")


def phi_stability(phi: KForm) -> PhiStabilityReport:
    """Nondegeneracy of a three-form in dimension 7 via B(v,w) vol = (v.phi)^(w.phi)^phi."""
    if phi.dim != 7:
        raise ValueError("stability test is for three-forms in dimension 7")
    if not (phi.degree == 3 or phi.is_zero()):
        raise ValueError("phi must be a three-form")
    full = (1 << 7) - 1
    contractions = [interior(Vector.basis(7, i), phi) for i in range(1, 8)]
    b = [
        [wedge(wedge(contractions[i], contractions[j]), phi).terms.get(full, Fraction(0)) for j in range(7)]
        for i in range(7)
    ]
    if linalg.is_positive_definite(b):
        kind = "positive"
    elif linalg.is_positive_definite([[-x for x in row] for row in b]):
        kind = "negative"
    else:
        kind = "indefinite-or-degenerate"
    return PhiStabilityReport(b_matrix=tuple(tuple(row) for row in b), definiteness=kind)


def preserves_closure(g: LieAlgebra, x: Vector, f0: KForm, sigma: KForm) -> bool:
    """A closed sigma transfers to a closed form exactly when F0 ^ (X . sigma) = 0."""
    if x.dim != g.dim or f0.dim != g.dim or sigma.dim != g.dim:
        raise ValueError("dimension mismatch")
    return wedge(f0, interior(x, sigma)).is_zero()


STRUCTURE_KINDS = ("symplectic", "kahler", "half-flat", "g2-cocal", "g2-phi")


@dataclass(frozen=True)
class StructureSpec:
    """A named structure and its defining tensors, checkable against an algebra."""

    kind: str
    forms: dict[str, KForm]
    metric: Metric | None = None
    j: ComplexStructure | None = None

    def __post_init__(self):
        if self.kind not in STRUCTURE_KINDS:
            raise ValueError(f"unknown structure kind {self.kind!r}")
        needed = {
            "symplectic": ("omega",),
            "kahler": ("omega",),
            "half-flat": ("omega", "rho_minus"),
            "g2-cocal": ("psi",),
            "g2-phi": ("phi",),
        }[self.kind]
        missing = [name for name in needed if name not in self.forms]
        if missing:
            raise ValueError(f"{self.kind} structure needs forms: {', '.join(missing)}")
        if self.kind == "kahler" and (self.metric is None or self.j is None):
            raise ValueError("kahler structure needs a metric and a complex structure")

    def check(self, g: LieAlgebra):
        """Run the appropriate verifier; returns its report (or bare verdict)."""
        if self.kind == "symplectic":
            return symplectic_check(g, self.forms["omega"])
        if self.kind == "kahler":
            assert self.metric is not None and self.j is not None
            return kahler_check(g, self.metric, self.j, self.forms["omega"])
        if self.kind == "half-flat":
            return half_flat_check(g, self.forms["omega"], self.forms["rho_minus"])
        if self.kind == "g2-cocal":
            return g2_cocal_check(g, self.forms["psi"])
        phi = self.forms["phi"]
        if g.dim != 7:
            raise ValueError("g2-phi check needs a dimension-7 algebra")
        return phi_stability(phi)
