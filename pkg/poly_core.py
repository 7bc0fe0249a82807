"""
Exact polynomial arithmetic over QQ and GF(p) in 3 or 4 ordered variables
Backed by sympy's sparse polynomial rings, plus differential forms on the same rings.
"""
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

from sympy import isprime
from sympy.combinatorics import Permutation
from sympy.polys.domains import GF, QQ
from sympy.polys.orderings import grevlex
from sympy.polys.rings import ring

import config

Monomial = Tuple[int, ...]


class IncompatibleOperandsError(ValueError):
    """Operands live in different rings (variables or coefficient field differ)"""


class VariableSet:
    """Ordered list of 3 or 4 distinct variable names, fixed for a computation"""

    def __init__(self, names: Sequence[str]):
        names = tuple(names)
        if len(names) not in (3, 4):
            raise ValueError(f"Expected 3 or 4 variables, got {len(names)}")
        if len(set(names)) != len(names):
            raise ValueError(f"Variable names must be distinct: {names}")
        for name in names:
            if not name.isidentifier():
                raise ValueError(f"Invalid variable name: {name!r}")
        self.names = names

    @classmethod
    def surface(cls) -> "VariableSet":
        return cls(config.SURFACE_VARIABLES)

    @classmethod
    def curve(cls) -> "VariableSet":
        return cls(config.CURVE_VARIABLES)

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ValueError(f"Unknown variable '{name}' (ring variables: {', '.join(self.names)})")

    def __iter__(self):
        return iter(self.names)

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, VariableSet) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VariableSet({', '.join(self.names)})"


class CoefficientField:
    """Exact rationals, or the prime field GF(p) used as a fast proxy"""

    def __init__(self, prime: int = None):
        if prime is None:
            self.prime = None
            self.domain = QQ
        else:
            if not isprime(prime):
                raise ValueError(f"Modulus {prime} is not prime")
            self.prime = int(prime)
            self.domain = GF(self.prime)

    @classmethod
    def rationals(cls) -> "CoefficientField":
        return cls()

    @classmethod
    def prime_field(cls, prime: int = None) -> "CoefficientField":
        return cls(prime or config.DEFAULT_PRIME)

    @classmethod
    def from_tag(cls, tag: str = None) -> "CoefficientField":
        """
        Build a field from a CLI tag

        Args:
            tag: 'q' for the rationals, 'fp' or 'fp:<p>' for GF(p) (default: config.DEFAULT_FIELD)

        Returns:
            CoefficientField
        """
        tag = (tag or config.DEFAULT_FIELD).strip().lower()
        if tag in ("q", "qq", "rationals"):
            return cls.rationals()
        if tag == "fp":
            return cls.prime_field()
        if tag.startswith("fp:"):
            try:
                prime = int(tag[3:])
            except ValueError:
                raise ValueError(f"Invalid field tag '{tag}' (expected fp:<prime>)")
            return cls.prime_field(prime)
        raise ValueError(f"Invalid field tag '{tag}' (expected q or fp:<prime>)")

    @property
    def tag(self) -> str:
        return "q" if self.prime is None else f"fp:{self.prime}"

    @property
    def is_modular(self) -> bool:
        return self.prime is not None

    def convert(self, value):
        """Coerce an int, Fraction or domain element into the field"""
        if isinstance(value, Fraction):
            if self.is_modular and value.denominator % self.prime == 0:
                raise ZeroDivisionError(f"{value} has no image in GF({self.prime})")
            return self.domain.quo(self.domain.convert(value.numerator),
                                   self.domain.convert(value.denominator))
        return self.domain.convert(value)

    def to_fraction(self, value) -> Fraction:
        """Exact rational (symmetric residue for GF(p)) of a field element"""
        rational = self.domain.to_sympy(value)
        return Fraction(int(rational.p), int(rational.q))

    def __eq__(self, other):
        return isinstance(other, CoefficientField) and self.prime == other.prime

    def __hash__(self):
        return hash(("field", self.prime))

    def __repr__(self):
        return f"CoefficientField({self.tag})"


@lru_cache(maxsize=None)
def polynomial_ring(variables: VariableSet, field: CoefficientField):
    """sympy sparse ring over the variables, degrevlex x > y > z > t"""
    R = ring(",".join(variables.names), field.domain, grevlex)[0]
    return R


def monomial_degree(monomial: Monomial) -> int:
    return sum(monomial)


class Polynomial:
    """
    Immutable exact polynomial

    Stored as a sympy PolyElement (a sparse dict monomial -> nonzero coefficient).
    Terms iterate in degrevlex order, largest first.
    """

    __slots__ = ("variables", "field", "_element")

    def __init__(self, element, variables: VariableSet, field: CoefficientField):
        self.variables = variables
        self.field = field
        self._element = element

    # --- construction ---

    @classmethod
    def from_terms(cls, terms: Dict[Monomial, object], variables: VariableSet,
                   field: CoefficientField) -> "Polynomial":
        R = polynomial_ring(variables, field)
        converted = {}
        for monomial, coefficient in terms.items():
            if len(monomial) != variables.n:
                raise ValueError(f"Monomial {monomial} does not match {variables}")
            value = field.convert(coefficient)
            if value:
                converted[tuple(monomial)] = value
        return cls(R.from_dict(converted) if converted else R.zero, variables, field)

    @classmethod
    def zero(cls, variables: VariableSet, field: CoefficientField) -> "Polynomial":
        return cls(polynomial_ring(variables, field).zero, variables, field)

    @classmethod
    def constant(cls, value, variables: VariableSet, field: CoefficientField) -> "Polynomial":
        return cls.from_terms({(0,) * variables.n: value}, variables, field)

    @classmethod
    def variable(cls, name: str, variables: VariableSet, field: CoefficientField) -> "Polynomial":
        R = polynomial_ring(variables, field)
        return cls(R.gens[variables.index(name)], variables, field)

    def _wrap(self, element) -> "Polynomial":
        return Polynomial(element, self.variables, self.field)

    @property
    def ring(self):
        return polynomial_ring(self.variables, self.field)

    # --- inspection ---

    def terms(self) -> List[Tuple[Monomial, object]]:
        """(monomial, coefficient) pairs, degrevlex descending"""
        return self._element.terms()

    def term_dict(self) -> Dict[Monomial, object]:
        return dict(self._element)

    @property
    def is_zero(self) -> bool:
        return not self._element

    @property
    def is_constant(self) -> bool:
        return all(not any(m) for m in self._element.keys())

    @property
    def degree(self) -> int:
        """Total degree, -1 for the zero polynomial"""
        if self.is_zero:
            return -1
        return max(monomial_degree(m) for m in self._element.keys())

    @property
    def is_homogeneous(self) -> bool:
        return len({monomial_degree(m) for m in self._element.keys()}) <= 1

    def leading_term(self) -> Tuple[Monomial, object]:
        if self.is_zero:
            raise ValueError("The zero polynomial has no leading term")
        return self._element.terms()[0]

    @property
    def leading_coefficient(self):
        return self.leading_term()[1]

    def coefficient(self, monomial: Monomial):
        return self._element.get(tuple(monomial), self.field.domain.zero)

    # --- arithmetic ---

    def _check(self, other: "Polynomial"):
        if not isinstance(other, Polynomial):
            raise IncompatibleOperandsError(f"Cannot combine Polynomial with {type(other).__name__}")
        if other.variables != self.variables or other.field != self.field:
            raise IncompatibleOperandsError(
                f"Incompatible operands: {self.variables}/{self.field.tag} vs "
                f"{other.variables}/{other.field.tag}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self.variables, self.field)
        self._check(other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        return self._wrap(self._element + other._element)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return self._wrap(self._element - other._element)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return self._wrap(-self._element)

    def __mul__(self, other):
        other = self._coerce(other)
        return self._wrap(self._element * other._element)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"Exponent must be a non-negative integer, got {exponent!r}")
        return self._wrap(self._element ** exponent)

    def scalar_mul(self, value) -> "Polynomial":
        return self._wrap(self._element * self.field.convert(value))

    def partial_derivative(self, name: str) -> "Polynomial":
        generator = self.ring.gens[self.variables.index(name)]
        return self._wrap(self._element.diff(generator))

    def divides(self, other: "Polynomial") -> bool:
        """True when self | other"""
        self._check(other)
        if self.is_zero:
            return other.is_zero
        _, remainder = other._element.div(self._element)
        return not remainder

    def exact_quotient(self, divisor: "Polynomial") -> "Polynomial":
        self._check(divisor)
        return self._wrap(self._element.exquo(divisor._element))

    def monic(self) -> "Polynomial":
        if self.is_zero:
            return self
        return self._wrap(self._element.monic())

    # --- protocol ---

    def __eq__(self, other):
        if isinstance(other, int):
            return self == Polynomial.constant(other, self.variables, self.field)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (self.variables == other.variables and self.field == other.field
                and dict(self._element) == dict(other._element))

    def __hash__(self):
        return hash((self.variables, self.field, frozenset(self._element.items())))

    def __str__(self):
        from poly_parser import format_polynomial
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({self})"


def poly_arith(op: str, a: Polynomial, b) -> Polynomial:
    """
    Dispatch one of add, sub, mul, pow, scalar_mul

    Args:
        op: operation name
        a: left operand
        b: Polynomial, or exponent (pow), or field value (scalar_mul)

    Returns:
        Polynomial
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        return a ** b
    if op == "scalar_mul":
        return a.scalar_mul(b)
    raise ValueError(f"Unknown polynomial operation '{op}'")


def partial_derivative(f: Polynomial, name: str) -> Polynomial:
    return f.partial_derivative(name)


def content_gcd(components: Sequence[Polynomial]) -> Tuple[Polynomial, List[Polynomial]]:
    """
    Split a vector of polynomials into its content and primitive parts

    Args:
        components: polynomials over QQ sharing one ring, at least one nonzero

    Returns:
        (content, primitive_parts) with content monic under degrevlex and
        content * primitive_parts[i] == components[i]
    """
    components = list(components)
    if not components:
        raise ValueError("content_gcd needs at least one component")
    first = components[0]
    for component in components[1:]:
        first._check(component)
    if first.field.is_modular:
        raise ValueError("content_gcd is only supported over the rationals")
    nonzero = [c for c in components if not c.is_zero]
    if not nonzero:
        raise ValueError("The content of an all-zero vector is undefined")

    common = nonzero[0]._element
    for component in nonzero[1:]:
        common = common.gcd(component._element)
    common = common.monic()
    content = first._wrap(common)
    parts = [c if c.is_zero else c._wrap(c._element.exquo(common)) for c in components]
    return content, parts


class DifferentialForm:
    """
    Polynomial differential form of a fixed grade

    Components are keyed by strictly ascending tuples of variable indices;
    the coefficient of dx_i1 ^ ... ^ dx_ig (i1 < ... < ig) is stored once.
    """

    def __init__(self, grade: int, components: Dict[Tuple[int, ...], Polynomial],
                 variables: VariableSet, field: CoefficientField):
        if not 1 <= grade <= variables.n:
            raise ValueError(f"Form grade must be between 1 and {variables.n}, got {grade}")
        cleaned = {}
        for key, coefficient in components.items():
            key = tuple(key)
            if len(key) != grade or list(key) != sorted(set(key)):
                raise ValueError(f"Form key {key} is not a strictly ascending {grade}-subset")
            if any(i < 0 or i >= variables.n for i in key):
                raise ValueError(f"Form key {key} is out of range for {variables}")
            if coefficient.variables != variables or coefficient.field != field:
                raise IncompatibleOperandsError("Form coefficient lives in another ring")
            if not coefficient.is_zero:
                cleaned[key] = coefficient
        self.grade = grade
        self.components = cleaned
        self.variables = variables
        self.field = field

    @classmethod
    def coordinate(cls, name: str, variables: VariableSet, field: CoefficientField) -> "DifferentialForm":
        """The 1-form d(name)"""
        one = Polynomial.constant(1, variables, field)
        return cls(1, {(variables.index(name),): one}, variables, field)

    @property
    def is_zero(self) -> bool:
        return not self.components

    def coefficient(self, names: Iterable[str]) -> Polynomial:
        """Stored coefficient for an ascending list of variable names"""
        key = tuple(self.variables.index(name) for name in names)
        if list(key) != sorted(set(key)):
            raise ValueError(f"Variables {tuple(names)} are not in ascending ring order")
        return self.components.get(key, Polynomial.zero(self.variables, self.field))

    def _check(self, other: "DifferentialForm"):
        if other.variables != self.variables or other.field != self.field:
            raise IncompatibleOperandsError("Forms live in different rings")

    def __add__(self, other: "DifferentialForm") -> "DifferentialForm":
        self._check(other)
        if other.grade != self.grade:
            raise ValueError(f"Cannot add forms of grades {self.grade} and {other.grade}")
        merged = dict(self.components)
        for key, coefficient in other.components.items():
            merged[key] = merged[key] + coefficient if key in merged else coefficient
        return DifferentialForm(self.grade, merged, self.variables, self.field)

    def __neg__(self):
        return self.scale(Polynomial.constant(-1, self.variables, self.field))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor: Polynomial) -> "DifferentialForm":
        return DifferentialForm(self.grade, {k: factor * c for k, c in self.components.items()},
                                self.variables, self.field)

    def __eq__(self, other):
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return (self.grade == other.grade and self.variables == other.variables
                and self.components == other.components)

    def __repr__(self):
        if self.is_zero:
            return f"DifferentialForm({self.grade}, 0)"
        parts = []
        for key in sorted(self.components):
            basis = "^".join(f"d{self.variables.names[i]}" for i in key)
            parts.append(f"({self.components[key]}) {basis}")
        return f"DifferentialForm({self.grade}, {' + '.join(parts)})"


def _merge_sign(left: Tuple[int, ...], right: Tuple[int, ...]) -> int:
    """Sign of the permutation sorting left + right"""
    merged = list(left) + list(right)
    ranks = sorted(range(len(merged)), key=lambda i: merged[i])
    return Permutation(ranks).signature()


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    """
    Exterior product a ^ b

    Args:
        a: form of grade p
        b: form of grade q, same ring, p + q <= n

    Returns:
        form of grade p + q (zero form when nothing survives)
    """
    a._check(b)
    grade = a.grade + b.grade
    if grade > a.variables.n:
        raise ValueError(f"Wedge of grades {a.grade} and {b.grade} exceeds {a.variables.n} variables")
    result: Dict[Tuple[int, ...], Polynomial] = {}
    for left, p in a.components.items():
        for right, q in b.components.items():
            if set(left) & set(right):
                continue
            key = tuple(sorted(left + right))
            term = p * q
            if _merge_sign(left, right) < 0:
                term = -term
            result[key] = result[key] + term if key in result else term
    return DifferentialForm(grade, result, a.variables, a.field)


def differential(f: Polynomial) -> DifferentialForm:
    """df = sum of (df/dv) dv"""
    components = {(i,): f.partial_derivative(name) for i, name in enumerate(f.variables.names)}
    return DifferentialForm(1, components, f.variables, f.field)
