"""
Buchberger Gröbner bases for ideals and submodules of graded free modules
Normal forms, syzygy generators and radical membership on top of sympy's monomial helpers.
"""
import heapq
from itertools import combinations_with_replacement
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from sympy.polys.monomials import (monomial_div, monomial_divides, monomial_gcd,
                                   monomial_lcm, monomial_mul)
from sympy.polys.orderings import grevlex

from poly_core import (CoefficientField, IncompatibleOperandsError, Monomial,
                       Polynomial, VariableSet)

Term = Tuple[int, Monomial]
Vector = Dict[Term, object]


class InhomogeneousInputError(ValueError):
    """A graded-only operation received an inhomogeneous polynomial or vector"""


class SyzygyError(ValueError):
    """A vector passed as a Jacobian syzygy does not annihilate the partials"""


class TermOrder:
    """
    Degrevlex (x > y > z > t) on ring monomials, extended to free modules

    kind 'pot': position over term, e_0 > e_1 > ...
    kind 'schreyer': m*e_i > n*e_j iff m*LT(g_i) > n*LT(g_j) in the parent order,
    ties broken by i < j.
    """

    def __init__(self, kind: str = "pot", leads: Sequence[Term] = None, parent: "TermOrder" = None):
        if kind not in ("pot", "schreyer"):
            raise ValueError(f"Unknown module order '{kind}'")
        if kind == "schreyer" and (leads is None or parent is None):
            raise ValueError("A Schreyer order needs the generator leading terms and a parent order")
        self.kind = kind
        self.leads = list(leads) if leads is not None else None
        self.parent = parent
        self._keys: Dict[Term, tuple] = {}

    @classmethod
    def degrevlex(cls) -> "TermOrder":
        return cls("pot")

    @classmethod
    def position_over_term(cls) -> "TermOrder":
        return cls("pot")

    @classmethod
    def schreyer(cls, leads: Sequence[Term], parent: "TermOrder") -> "TermOrder":
        return cls("schreyer", leads, parent)

    def key(self, comp: int, monomial: Monomial) -> tuple:
        """Flat integer tuple, larger means larger term"""
        term = (comp, monomial)
        cached = self._keys.get(term)
        if cached is not None:
            return cached
        if self.kind == "pot":
            degree, reversed_negatives = grevlex(monomial)
            result = (-comp, degree) + tuple(reversed_negatives)
        else:
            lead_comp, lead_monomial = self.leads[comp]
            result = self.parent.key(lead_comp, monomial_mul(monomial, lead_monomial)) + (-comp,)
        self._keys[term] = result
        return result

    def heap_key(self, comp: int, monomial: Monomial) -> tuple:
        return tuple(-k for k in self.key(comp, monomial))

    def __repr__(self):
        if self.kind == "pot":
            return "TermOrder(degrevlex, position-over-term)"
        return f"TermOrder(schreyer over {len(self.leads)} generators)"


def leading_term(vector: Vector, order: TermOrder) -> Term:
    return max(vector, key=lambda term: order.key(*term))


def add_scaled(target: Vector, source: Vector, factor, multiplier: Monomial):
    """target += factor * multiplier * source, in place"""
    for (comp, monomial), coefficient in source.items():
        key = (comp, monomial_mul(monomial, multiplier))
        old = target.get(key)
        value = factor * coefficient if old is None else old + factor * coefficient
        if value:
            target[key] = value
        elif old is not None:
            del target[key]


def combine(coefficients: Vector, vectors: Sequence[Vector]) -> Vector:
    """sum over (k, m) -> c of c * m * vectors[k]"""
    result: Vector = {}
    for (k, monomial), coefficient in coefficients.items():
        add_scaled(result, vectors[k], coefficient, monomial)
    return result


def reduce_vector(vector: Vector, basis: Sequence[Vector], leads: Sequence[Tuple[Term, object]],
                  by_comp: Dict[int, List[int]], order: TermOrder, domain,
                  quotients: Optional[Vector] = None) -> Vector:
    """
    Full reduction of vector modulo basis

    Args:
        vector: element to reduce
        basis: reducers
        leads: (leading term, leading coefficient) for each reducer
        by_comp: reducer indices grouped by leading component
        order: module order the leading terms refer to
        domain: sympy coefficient domain
        quotients: when given, collects q with vector = sum q_k * basis_k + remainder,
            keyed (k, monomial)

    Returns:
        Remainder, no term divisible by a leading term of basis
    """
    vector = dict(vector)
    remainder: Vector = {}
    heap = [(order.heap_key(*term), term) for term in vector]
    heapq.heapify(heap)
    while heap:
        _, term = heapq.heappop(heap)
        coefficient = vector.get(term)
        if coefficient is None:
            continue
        comp, monomial = term
        hit = None
        for index in by_comp.get(comp, ()):
            if monomial_divides(leads[index][0][1], monomial):
                hit = index
                break
        if hit is None:
            remainder[term] = vector.pop(term)
            continue
        multiplier = monomial_div(monomial, leads[hit][0][1])
        factor = domain.quo(coefficient, leads[hit][1])
        for (g_comp, g_monomial), g_coefficient in basis[hit].items():
            key = (g_comp, monomial_mul(g_monomial, multiplier))
            old = vector.get(key)
            value = -factor * g_coefficient if old is None else old - factor * g_coefficient
            if value:
                if old is None:
                    heapq.heappush(heap, (order.heap_key(*key), key))
                vector[key] = value
            elif old is not None:
                del vector[key]
        if quotients is not None:
            key = (hit, multiplier)
            value = quotients.get(key, domain.zero) + factor
            if value:
                quotients[key] = value
            else:
                quotients.pop(key, None)
    return remainder


class _Buchberger:
    """Pair queue and basis state of one Buchberger run"""

    def __init__(self, order: TermOrder, domain, degree: Callable[[Term], int],
                 ideal: bool = False, track: bool = False):
        self.order = order
        self.domain = domain
        self.degree = degree
        self.ideal = ideal
        self.track = track
        self.basis: List[Vector] = []
        self.leads: List[Tuple[Term, object]] = []
        self.by_comp: Dict[int, List[int]] = {}
        self.reps: List[Vector] = []
        self.input_syzygies: List[Vector] = []
        self._pairs: List[Tuple[int, int, int]] = []
        self._pending = set()

    def _add(self, vector: Vector, rep: Optional[Vector]):
        lead = leading_term(vector, self.order)
        inverse = self.domain.quo(self.domain.one, vector[lead])
        vector = {k: v * inverse for k, v in vector.items()}
        if rep is not None:
            rep = {k: v * inverse for k, v in rep.items()}
        index = len(self.basis)
        comp, monomial = lead
        for other in self.by_comp.get(comp, ()):
            other_monomial = self.leads[other][0][1]
            if self.ideal and not any(monomial_gcd(other_monomial, monomial)):
                continue
            lcm = monomial_lcm(other_monomial, monomial)
            heapq.heappush(self._pairs, (self.degree((comp, lcm)), other, index))
            self._pending.add((other, index))
        self.basis.append(vector)
        self.leads.append((lead, self.domain.one))
        self.by_comp.setdefault(comp, []).append(index)
        self.reps.append(rep)

    def _reduce(self, vector: Vector, rep: Optional[Vector]):
        quotients = {} if self.track else None
        remainder = reduce_vector(vector, self.basis, self.leads, self.by_comp,
                                  self.order, self.domain, quotients)
        if self.track:
            for (k, multiplier), factor in quotients.items():
                add_scaled(rep, self.reps[k], -factor, multiplier)
        return remainder, rep

    def _chain_redundant(self, i: int, j: int, lcm: Monomial) -> bool:
        comp = self.leads[i][0][0]
        for k in self.by_comp.get(comp, ()):
            if k in (i, j) or not monomial_divides(self.leads[k][0][1], lcm):
                continue
            if (min(i, k), max(i, k)) not in self._pending and (min(j, k), max(j, k)) not in self._pending:
                return True
        return False

    def s_vector(self, i: int, j: int) -> Tuple[Vector, Optional[Vector]]:
        (comp, m_i), (_, m_j) = self.leads[i][0], self.leads[j][0]
        lcm = monomial_lcm(m_i, m_j)
        left, right = monomial_div(lcm, m_i), monomial_div(lcm, m_j)
        vector: Vector = {}
        add_scaled(vector, self.basis[i], self.domain.one, left)
        add_scaled(vector, self.basis[j], -self.domain.one, right)
        rep = None
        if self.track:
            rep = {}
            add_scaled(rep, self.reps[i], self.domain.one, left)
            add_scaled(rep, self.reps[j], -self.domain.one, right)
        return vector, rep

    def run(self, vectors: Sequence[Vector], rank_zero: Monomial):
        for position, vector in enumerate(vectors):
            rep = {(position, rank_zero): self.domain.one} if self.track else None
            remainder, rep = self._reduce(vector, rep)
            if remainder:
                self._add(remainder, rep)
            elif self.track:
                self.input_syzygies.append(rep)

        while self._pairs:
            _, i, j = heapq.heappop(self._pairs)
            self._pending.discard((i, j))
            lcm = monomial_lcm(self.leads[i][0][1], self.leads[j][0][1])
            if self._chain_redundant(i, j, lcm):
                continue
            vector, rep = self.s_vector(i, j)
            remainder, rep = self._reduce(vector, rep)
            if remainder:
                self._add(remainder, rep)
        return self

    def reduced(self) -> List[Vector]:
        """Minimal basis, each element fully reduced by the others, monic"""
        keep = []
        for i, ((comp, monomial), _) in enumerate(self.leads):
            redundant = False
            for j in self.by_comp[comp]:
                if j == i:
                    continue
                other = self.leads[j][0][1]
                if monomial_divides(other, monomial) and (other != monomial or j < i):
                    redundant = True
                    break
            if not redundant:
                keep.append(i)
        basis = [self.basis[i] for i in keep]
        leads = [self.leads[i] for i in keep]
        result = []
        for position, vector in enumerate(basis):
            others = basis[:position] + basis[position + 1:]
            other_leads = leads[:position] + leads[position + 1:]
            by_comp: Dict[int, List[int]] = {}
            for index, ((comp, _), _) in enumerate(other_leads):
                by_comp.setdefault(comp, []).append(index)
            result.append(reduce_vector(vector, others, other_leads, by_comp, self.order, self.domain))
        return result


class FreeModuleElement:
    """
    Element of a graded free module S(-a_0) (+) ... (+) S(-a_{r-1})

    terms maps (component, monomial) to a nonzero coefficient.
    """

    __slots__ = ("terms", "rank", "shifts", "variables", "field")

    def __init__(self, terms: Vector, rank: int, variables: VariableSet, field: CoefficientField,
                 shifts: Sequence[int] = None):
        self.terms = {k: v for k, v in terms.items() if v}
        self.rank = rank
        self.shifts = tuple(shifts) if shifts is not None else (0,) * rank
        self.variables = variables
        self.field = field
        if len(self.shifts) != rank:
            raise ValueError(f"Expected {rank} shifts, got {len(self.shifts)}")

    @classmethod
    def from_components(cls, components: Sequence[Polynomial], shifts: Sequence[int] = None) -> "FreeModuleElement":
        if not components:
            raise ValueError("A module element needs at least one component")
        first = components[0]
        terms: Vector = {}
        for index, component in enumerate(components):
            first._check(component)
            for monomial, coefficient in component.term_dict().items():
                terms[(index, monomial)] = coefficient
        return cls(terms, len(components), first.variables, first.field, shifts)

    @classmethod
    def from_polynomial(cls, polynomial: Polynomial) -> "FreeModuleElement":
        return cls.from_components([polynomial])

    def component(self, index: int) -> Polynomial:
        return Polynomial.from_terms({m: c for (i, m), c in self.terms.items() if i == index},
                                     self.variables, self.field)

    def components(self) -> List[Polynomial]:
        return [self.component(i) for i in range(self.rank)]

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_homogeneous(self) -> bool:
        return len({sum(m) + self.shifts[i] for i, m in self.terms}) <= 1

    @property
    def degree(self) -> Optional[int]:
        """Module degree deg(component_i) + shift_i, None for zero"""
        if self.is_zero:
            return None
        return max(sum(m) + self.shifts[i] for i, m in self.terms)

    def leading_term(self, order: TermOrder = None) -> Tuple[Term, object]:
        if self.is_zero:
            raise ValueError("The zero vector has no leading term")
        lead = leading_term(self.terms, order or TermOrder.position_over_term())
        return lead, self.terms[lead]

    def _check(self, other: "FreeModuleElement"):
        if (other.rank, other.variables, other.field) != (self.rank, self.variables, self.field):
            raise IncompatibleOperandsError("Module elements live in different free modules")

    def _wrap(self, terms: Vector) -> "FreeModuleElement":
        return FreeModuleElement(terms, self.rank, self.variables, self.field, self.shifts)

    def __add__(self, other: "FreeModuleElement") -> "FreeModuleElement":
        self._check(other)
        terms = dict(self.terms)
        add_scaled(terms, other.terms, self.field.domain.one, (0,) * self.variables.n)
        return self._wrap(terms)

    def __sub__(self, other: "FreeModuleElement") -> "FreeModuleElement":
        return self + (-other)

    def __neg__(self):
        return self._wrap({k: -v for k, v in self.terms.items()})

    def scale(self, factor) -> "FreeModuleElement":
        """Multiply by a Polynomial or a field scalar"""
        if not isinstance(factor, Polynomial):
            factor = Polynomial.constant(factor, self.variables, self.field)
        terms: Vector = {}
        for monomial, coefficient in factor.term_dict().items():
            add_scaled(terms, self.terms, coefficient, monomial)
        return self._wrap(terms)

    def dot(self, polynomials: Sequence[Polynomial]) -> Polynomial:
        """sum of component_i * polynomials[i]"""
        if len(polynomials) != self.rank:
            raise ValueError(f"Expected {self.rank} polynomials, got {len(polynomials)}")
        total = Polynomial.zero(self.variables, self.field)
        for component, polynomial in zip(self.components(), polynomials):
            total = total + component * polynomial
        return total

    def __eq__(self, other):
        if not isinstance(other, FreeModuleElement):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    def __hash__(self):
        return hash((self.rank, frozenset(self.terms.items())))

    def to_dict(self) -> dict:
        return {
            "components": [str(c) for c in self.components()],
            "shifts": list(self.shifts),
            "degree": self.degree,
        }

    def __repr__(self):
        return f"FreeModuleElement({', '.join(str(c) for c in self.components())})"


class GroebnerBasis:
    """Gröbner basis of a submodule (rank 1 for ideals) under a fixed TermOrder"""

    def __init__(self, generators: List[FreeModuleElement], order: TermOrder, reduced: bool = True):
        self.generators = generators
        self.order = order
        self.reduced = reduced
        self.leads = [g.leading_term(order) for g in generators]
        self.by_comp: Dict[int, List[int]] = {}
        for index, ((comp, _), _) in enumerate(self.leads):
            self.by_comp.setdefault(comp, []).append(index)

    @property
    def vectors(self) -> List[Vector]:
        return [g.terms for g in self.generators]

    def leading_monomials(self) -> List[Term]:
        return [lead for lead, _ in self.leads]

    def normal_form(self, element: FreeModuleElement) -> FreeModuleElement:
        remainder = reduce_vector(element.terms, self.vectors, self.leads, self.by_comp,
                                  self.order, element.field.domain)
        return element._wrap(remainder)

    def contains(self, element: FreeModuleElement) -> bool:
        return self.normal_form(element).is_zero

    @property
    def is_unit(self) -> bool:
        """True when the basis generates the whole ring"""
        return any(not any(monomial) for (_, monomial), _ in self.leads)

    def polynomials(self) -> List[Polynomial]:
        return [g.component(0) for g in self.generators]

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __getitem__(self, index):
        return self.generators[index]

    def __repr__(self):
        return f"GroebnerBasis({len(self.generators)} generators, {self.order})"


def _as_elements(gens) -> List[FreeModuleElement]:
    elements = [g if isinstance(g, FreeModuleElement) else FreeModuleElement.from_polynomial(g) for g in gens]
    if not elements:
        raise ValueError("Need at least one generator")
    first = elements[0]
    for element in elements[1:]:
        first._check(element)
        if element.shifts != first.shifts:
            raise IncompatibleOperandsError("Generators use different twists of the ambient module")
    return elements


def _require_homogeneous(elements: Sequence[FreeModuleElement]):
    for index, element in enumerate(elements):
        if not element.is_homogeneous:
            raise InhomogeneousInputError(f"Generator {index} is not homogeneous: {element}")


def _degree_function(shifts: Sequence[int]) -> Callable[[Term], int]:
    return lambda term: sum(term[1]) + shifts[term[0]]


def groebner_basis(gens, order: TermOrder = None) -> GroebnerBasis:
    """
    Reduced Gröbner basis of the submodule (or ideal) generated by gens

    Args:
        gens: homogeneous FreeModuleElements of one ambient module, or Polynomials
        order: module order (default: degrevlex, position over term)

    Returns:
        GroebnerBasis with reduced_flag set
    """
    elements = _as_elements(gens)
    _require_homogeneous(elements)
    order = order or TermOrder.position_over_term()
    first = elements[0]
    run = _Buchberger(order, first.field.domain, _degree_function(first.shifts),
                      ideal=first.rank == 1).run([e.terms for e in elements], (0,) * first.variables.n)
    vectors = [v for v in run.reduced() if v]
    generators = [FreeModuleElement(v, first.rank, first.variables, first.field, first.shifts) for v in vectors]
    return GroebnerBasis(generators, order, reduced=True)


def normal_form(element, gb: GroebnerBasis) -> FreeModuleElement:
    if isinstance(element, Polynomial):
        element = FreeModuleElement.from_polynomial(element)
    return gb.normal_form(element)


def is_groebner_basis(gb: GroebnerBasis) -> bool:
    """Buchberger criterion: every S-pair reduces to zero"""
    vectors = gb.vectors
    if not vectors:
        return True
    domain = gb.generators[0].field.domain
    for comp, indices in gb.by_comp.items():
        for a, i in enumerate(indices):
            for j in indices[a + 1:]:
                (_, m_i), c_i = gb.leads[i]
                (_, m_j), c_j = gb.leads[j]
                lcm = monomial_lcm(m_i, m_j)
                vector: Vector = {}
                add_scaled(vector, vectors[i], domain.quo(domain.one, c_i), monomial_div(lcm, m_i))
                add_scaled(vector, vectors[j], -domain.quo(domain.one, c_j), monomial_div(lcm, m_j))
                if reduce_vector(vector, vectors, gb.leads, gb.by_comp, gb.order, domain):
                    return False
    return True


def syzygy_generators(gens, order: TermOrder = None) -> List[FreeModuleElement]:
    """
    Generators of the module of relations among gens

    Every S-pair of a Gröbner basis of gens is divided to zero; the quotients give
    the Schreyer syzygies of the basis, which are pulled back to gens through the
    tracked representation. Inputs that reduce to zero contribute their own relation.

    Returns:
        homogeneous elements rho of S^len(gens), twisted by the generator degrees,
        each with sum rho_i * gens_i = 0
    """
    elements = _as_elements(gens)
    _require_homogeneous(elements)
    order = order or TermOrder.position_over_term()
    first = elements[0]
    domain = first.field.domain
    zero = (0,) * first.variables.n
    run = _Buchberger(order, domain, _degree_function(first.shifts), ideal=first.rank == 1,
                      track=True).run([e.terms for e in elements], zero)

    relations: List[Vector] = list(run.input_syzygies)
    for comp, indices in run.by_comp.items():
        for a, i in enumerate(indices):
            for j in indices[a + 1:]:
                vector, _ = run.s_vector(i, j)
                quotients: Vector = {}
                remainder = reduce_vector(vector, run.basis, run.leads, run.by_comp, order, domain, quotients)
                if remainder:
                    raise RuntimeError("S-pair of a completed basis failed to reduce to zero")
                lcm = monomial_lcm(run.leads[i][0][1], run.leads[j][0][1])
                sigma = {(k, m): -c for (k, m), c in quotients.items()}
                add_scaled(sigma, {(i, zero): domain.one}, domain.one, monomial_div(lcm, run.leads[i][0][1]))
                add_scaled(sigma, {(j, zero): domain.one}, -domain.one, monomial_div(lcm, run.leads[j][0][1]))
                relation = combine(sigma, run.reps)
                if relation:
                    relations.append(relation)

    common = next((e.degree for e in elements if e.degree is not None), 0)
    shifts = [e.degree if e.degree is not None else common for e in elements]
    result = []
    seen = set()
    for relation in relations:
        element = FreeModuleElement(relation, len(elements), first.variables, first.field, shifts)
        if element.is_zero or element in seen:
            continue
        seen.add(element)
        result.append(element)
    return result


def radical_membership(ell: Polynomial, ideal_gens: Sequence[Polynomial]) -> bool:
    """
    Decide ell in sqrt(ideal_gens) with the Rabinowitsch trick

    Adjoins a fresh variable w and checks 1 in (ideal_gens, 1 - w*ell).
    """
    if ell.is_zero:
        raise ValueError("radical_membership needs a nonzero polynomial")
    for g in ideal_gens:
        ell._check(g)
    domain = ell.field.domain
    n = ell.variables.n
    vectors: List[Vector] = []
    for g in ideal_gens:
        if not g.is_zero:
            vectors.append({(0, m + (0,)): c for m, c in g.term_dict().items()})
    rabinowitsch: Vector = {(0, (0,) * (n + 1)): domain.one}
    for m, c in ell.term_dict().items():
        rabinowitsch[(0, m + (1,))] = -c
    vectors.append(rabinowitsch)
    run = _Buchberger(TermOrder.degrevlex(), domain, lambda term: sum(term[1]), ideal=True)
    run.run(vectors, (0,) * (n + 1))
    return any(not any(monomial) for (_, monomial), _ in run.leads)


def monomials_of_degree(n: int, degree: int) -> List[Monomial]:
    if degree < 0:
        return []
    result = []
    for combo in combinations_with_replacement(range(n), degree):
        exponents = [0] * n
        for index in combo:
            exponents[index] += 1
        result.append(tuple(exponents))
    return result


def standard_monomial_count(gb: GroebnerBasis, degree: int) -> int:
    """dim (S/I)_degree: monomials of the degree outside the leading-term ideal"""
    if gb.generators and gb.generators[0].rank != 1:
        raise ValueError("standard_monomial_count works on ideals")
    if not gb.generators:
        raise ValueError("Empty Gröbner basis")
    n = gb.generators[0].variables.n
    leads = [monomial for (_, monomial), _ in gb.leads]
    return sum(1 for m in monomials_of_degree(n, degree)
               if not any(monomial_divides(lead, m) for lead in leads))
