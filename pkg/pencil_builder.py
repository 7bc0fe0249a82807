"""
Surfaces built from pencils of surfaces and their natural Jacobian syzygies
"""
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

import config
from groebner_engine import radical_membership
from poly_core import (DifferentialForm, IncompatibleOperandsError, Polynomial, content_gcd,
                       differential, wedge)

# 3-form component -> syzygy slot, with the alternating signs of
# a^x dy^dz^dt - a^y dx^dz^dt + a^z dx^dy^dt - a^t dx^dy^dz
_THREE_FORM_SLOTS = (((1, 2, 3), 1), ((0, 2, 3), -1), ((0, 1, 3), 1), ((0, 1, 2), -1))


class PencilSpec:
    """
    Pencil alpha*g + beta*h = 0 with the members q_j = alpha_j g + beta_j h of a product surface

    Args:
        g, h: homogeneous of the same degree k >= 2
        members: (alpha_j, beta_j) pairs, pairwise non-proportional, at least 2
    """

    def __init__(self, g: Polynomial, h: Polynomial, members: Sequence[Tuple[object, object]]):
        _check_pencil(g, h)
        members = [(Fraction(a), Fraction(b)) for a, b in members]
        if len(members) < 2:
            raise ValueError(f"A pencil surface needs at least 2 members, got {len(members)}")
        for i, (a, b) in enumerate(members):
            if a == 0 and b == 0:
                raise ValueError(f"Member {i} is (0, 0)")
            for j in range(i):
                a2, b2 = members[j]
                if a * b2 - b * a2 == 0:
                    raise ValueError(f"Members {j} and {i} are proportional: {members[j]} ~ {members[i]}")
        self.g = g
        self.h = h
        self.members = members

    @property
    def k(self) -> int:
        return self.g.degree

    @property
    def m(self) -> int:
        return len(self.members)

    @property
    def degree(self) -> int:
        return self.k * self.m

    def member(self, j: int) -> Polynomial:
        a, b = self.members[j]
        return self.g.scalar_mul(a) + self.h.scalar_mul(b)

    def base_locus(self) -> List[Polynomial]:
        """Generators of the ideal of B = {g = h = 0}"""
        return [self.g, self.h]

    def to_dict(self) -> dict:
        return {
            "g": str(self.g),
            "h": str(self.h),
            "members": [[str(a), str(b)] for a, b in self.members],
            "k": self.k,
            "m": self.m,
            "degree": self.degree,
        }

    def __repr__(self):
        return f"PencilSpec(k={self.k}, m={self.m}, g={self.g}, h={self.h})"


class SyzygyQuadruple:
    """Jacobian syzygy (a^x, a^y, a^z, a^t) with a^x f_x + a^y f_y + a^z f_z + a^t f_t = 0"""

    def __init__(self, components: Sequence[Polynomial], label: str = ""):
        components = tuple(components)
        if len(components) != 4:
            raise ValueError(f"A syzygy quadruple has 4 components, got {len(components)}")
        for c in components[1:]:
            components[0]._check(c)
        degrees = {c.degree for c in components if not c.is_zero}
        if len(degrees) > 1 or not all(c.is_homogeneous for c in components):
            raise ValueError(f"Syzygy components are not homogeneous of one degree: {sorted(degrees)}")
        self.components = components
        self.label = label

    @property
    def degree(self) -> int:
        """Common degree of the components, -1 for the zero syzygy"""
        return max(c.degree for c in self.components)

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)

    @property
    def variables(self):
        return self.components[0].variables

    @property
    def field(self):
        return self.components[0].field

    def content(self) -> Tuple[Polynomial, "SyzygyQuadruple"]:
        """(gcd of the components, primitive part)"""
        common, parts = content_gcd(self.components)
        return common, SyzygyQuadruple(parts, f"{self.label}/content" if self.label else "")

    def scale(self, factor: Polynomial) -> "SyzygyQuadruple":
        return SyzygyQuadruple([factor * c for c in self.components], self.label)

    def __add__(self, other: "SyzygyQuadruple") -> "SyzygyQuadruple":
        return SyzygyQuadruple([a + b for a, b in zip(self.components, other.components)])

    def __eq__(self, other):
        if not isinstance(other, SyzygyQuadruple):
            return NotImplemented
        return self.components == other.components

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "degree": self.degree,
            "components": [str(c) for c in self.components],
        }

    def __repr__(self):
        name = f"{self.label} = " if self.label else ""
        return f"SyzygyQuadruple({name}({', '.join(str(c) for c in self.components)}))"


def _check_pencil(g: Polynomial, h: Polynomial):
    g._check(h)
    if g.variables.n != 4:
        raise ValueError(f"Pencils live in 4 variables, got {g.variables}")
    for name, p in (("g", g), ("h", h)):
        if p.is_zero or not p.is_homogeneous:
            raise ValueError(f"{name} must be a nonzero homogeneous polynomial")
    if g.degree != h.degree:
        raise ValueError(f"deg g = {g.degree} and deg h = {h.degree} differ")
    if g.degree < 2:
        raise ValueError(f"Pencil generators need degree >= 2, got {g.degree}")


def build_pencil_surface(spec: PencilSpec) -> Polynomial:
    """f = product of the pencil members"""
    f = Polynomial.constant(1, spec.g.variables, spec.g.field)
    for j in range(spec.m):
        f = f * spec.member(j)
    return f


def pencil_power_sum(g: Polynomial, h: Polynomial, m: int) -> Polynomial:
    """
    g^m + h^m

    Over C this is the product of the members g - zeta h with zeta^m = -1;
    it is built directly so the pencil stays over the rationals.
    """
    _check_pencil(g, h)
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    return g ** m + h ** m


def pencil_two_form(g: Polynomial, h: Polynomial) -> DifferentialForm:
    """omega(P) = dg ^ dh"""
    _check_pencil(g, h)
    return wedge(differential(g), differential(h))


def three_form_to_syzygy(omega: DifferentialForm, label: str = "") -> SyzygyQuadruple:
    if omega.grade != 3 or omega.variables.n != 4:
        raise ValueError("Only 3-forms in 4 variables correspond to syzygy quadruples")
    zero = Polynomial.zero(omega.variables, omega.field)
    components = []
    for key, sign in _THREE_FORM_SLOTS:
        value = omega.components.get(key, zero)
        components.append(value if sign > 0 else -value)
    return SyzygyQuadruple(components, label)


def pencil_syzygies(g: Polynomial, h: Polynomial) -> List[SyzygyQuadruple]:
    """
    rho^v from the 3-forms dv ^ dg ^ dh, v = x, y, z, t

    Each has degree 2k - 2 and is a Jacobian syzygy of every polynomial in g and h.
    """
    omega = pencil_two_form(g, h)
    result = []
    for name in g.variables:
        form = wedge(DifferentialForm.coordinate(name, g.variables, g.field), omega)
        result.append(three_form_to_syzygy(form, f"rho^{name}"))
    return result


def verify_syzygy(f: Polynomial, rho: SyzygyQuadruple) -> bool:
    """sum rho_i * df/dv_i == 0"""
    if rho.variables != f.variables or rho.field != f.field:
        raise IncompatibleOperandsError("Syzygy and polynomial live in different rings")
    total = Polynomial.zero(f.variables, f.field)
    for component, name in zip(rho.components, f.variables):
        total = total + component * f.partial_derivative(name)
    return total.is_zero


def _coefficient_matrix(syzygies: Sequence[SyzygyQuadruple]) -> DomainMatrix:
    field = syzygies[0].field
    columns = sorted({(slot, m) for rho in syzygies
                      for slot, c in enumerate(rho.components) for m in c.term_dict()})
    rows = [[rho.components[slot].coefficient(m) for slot, m in columns] for rho in syzygies]
    return DomainMatrix(rows, (len(syzygies), len(columns)), field.domain)


def syzygy_rank(syzygies: Sequence[SyzygyQuadruple]) -> int:
    """Dimension of the span of the syzygies over the coefficient field"""
    if all(rho.is_zero for rho in syzygies):
        return 0
    return _coefficient_matrix(syzygies).rank()


def plane_from_dependency(syzygies: Sequence[SyzygyQuadruple]) -> Optional[Polynomial]:
    """
    Linear form c^x x + c^y y + c^z z + c^t t from a relation sum c^v rho^v = 0

    Returns None when the four pencil syzygies are independent.
    """
    if len(syzygies) != 4:
        raise ValueError("Expected the four pencil syzygies rho^x, rho^y, rho^z, rho^t")
    variables, field = syzygies[0].variables, syzygies[0].field
    if all(rho.is_zero for rho in syzygies):
        return None
    kernel = _coefficient_matrix(syzygies).transpose().nullspace()
    if kernel.shape[0] == 0:
        return None
    domain = field.domain
    vector = kernel.to_Matrix().row(0)
    ell = Polynomial.zero(variables, field)
    for name, value in zip(variables, vector):
        coefficient = field.to_fraction(domain.from_sympy(value))
        ell = ell + Polynomial.variable(name, variables, field).scalar_mul(coefficient)
    return ell.monic()


def plane_containment_check(g: Polynomial, h: Polynomial, ell: Polynomial) -> bool:
    """True iff ell lies in the radical of (g, h), i.e. B is contained in the plane ell = 0"""
    if ell.is_zero or ell.degree != 1 or not ell.is_homogeneous:
        raise ValueError(f"ell must be a nonzero linear form, got {ell}")
    return radical_membership(ell, [g, h])


def predicted_type(rho_1: SyzygyQuadruple, rho_y: SyzygyQuadruple, rho_z: SyzygyQuadruple, degree: int) -> int:
    """deg rho_1 + deg rho^y + deg rho^z + 1 - d"""
    return rho_1.degree + rho_y.degree + rho_z.degree + 1 - degree


class PencilReport:
    """Everything the pencil command prints for one (g, h, m)"""

    def __init__(self, g: Polynomial, h: Polynomial, m: int, f: Polynomial, two_form: DifferentialForm,
                 syzygies: List[SyzygyQuadruple], contents: List[Polynomial], rank: int,
                 plane: Optional[Polynomial], plane_contains_base: Optional[bool],
                 all_verified: bool, predicted_t: Optional[int]):
        self.g = g
        self.h = h
        self.m = m
        self.f = f
        self.two_form = two_form
        self.syzygies = syzygies
        self.contents = contents
        self.rank = rank
        self.plane = plane
        self.plane_contains_base = plane_contains_base
        self.all_verified = all_verified
        self.predicted_t = predicted_t
        self.measured_t: Optional[int] = None

    @property
    def m_verified(self) -> bool:
        return self.m in config.PENCIL_VERIFIED_M

    def to_dict(self) -> dict:
        return {
            "schema": config.REPORT_SCHEMA,
            "g": str(self.g),
            "h": str(self.h),
            "m": self.m,
            "degree": self.f.degree,
            "two_form": {"".join(self.g.variables.names[i] for i in key): str(c)
                         for key, c in sorted(self.two_form.components.items())},
            "syzygies": [rho.to_dict() for rho in self.syzygies],
            "contents": [str(c) for c in self.contents],
            "rank": self.rank,
            "plane": str(self.plane) if self.plane is not None else None,
            "plane_contains_base": self.plane_contains_base,
            "all_verified": self.all_verified,
            "predicted_type": self.predicted_t,
            "measured_type": self.measured_t,
            "m_verified": self.m_verified,
        }

    def __repr__(self):
        return f"PencilReport(m={self.m}, rank={self.rank}, predicted_t={self.predicted_t})"


def analyze_pencil(g: Polynomial, h: Polynomial, m: int) -> PencilReport:
    """
    Pencil syzygies of f = g^m + h^m with their contents, rank and plane test

    The predicted type uses the primitive part of the lowest-degree pencil
    syzygy together with rho^y and rho^z.
    """
    f = pencil_power_sum(g, h, m)
    omega = pencil_two_form(g, h)
    syzygies = pencil_syzygies(g, h)
    all_verified = all(verify_syzygy(f, rho) for rho in syzygies)

    contents = []
    primitive = []
    for rho in syzygies:
        if rho.is_zero or g.field.is_modular:
            contents.append(Polynomial.constant(1, g.variables, g.field))
            primitive.append(rho)
            continue
        content, part = rho.content()
        contents.append(content)
        primitive.append(part)

    rank = syzygy_rank(syzygies)
    plane = plane_from_dependency(syzygies) if rank < 4 else None
    contained = plane_containment_check(g, h, plane) if plane is not None else None

    nonzero = [rho for rho in primitive if not rho.is_zero]
    predicted = None
    if len(nonzero) >= 3:
        lowest = min(nonzero, key=lambda rho: rho.degree)
        predicted = predicted_type(lowest, syzygies[1], syzygies[2], f.degree)
    return PencilReport(g, h, m, f, omega, syzygies, contents, rank, plane, contained,
                        all_verified, predicted)


if __name__ == "__main__":
    from poly_parser import parse_polynomial

    g = parse_polynomial("x^3 - yzt")
    h = parse_polynomial("t^3 - xyz")
    for m in config.PENCIL_VERIFIED_M:
        report = analyze_pencil(g, h, m)
        print(f"m = {m}: rank {report.rank}, predicted t(X) = {report.predicted_t}")
        for rho in report.syzygies:
            print(f"  {rho}")
