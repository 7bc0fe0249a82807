"""
Graded free resolution of the Jacobian algebra M(f) = S/J_f

Schreyer frame from a Gröbner basis of J_f, rebased onto the partial derivatives,
then minimalized by unit-entry cancellation. Betti data is read off the twists.
"""
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix
from sympy.polys.monomials import monomial_div, monomial_divides, monomial_lcm

from groebner_engine import (FreeModuleElement, TermOrder, add_scaled, groebner_basis,
                             leading_term, reduce_vector, standard_monomial_count,
                             syzygy_generators)
from hilbert_engine import graded_dim
from poly_core import CoefficientField, Polynomial, VariableSet

Column = Dict[int, Polynomial]


class MalformedResolutionError(ValueError):
    """Resolution data does not have the shape 0 -> ... -> S^n(1-d) -> S"""


class GradedFreeModule:
    """Direct sum of twists S(-a); shifts holds the a's"""

    def __init__(self, shifts: Sequence[int] = ()):
        self.shifts = tuple(shifts)

    @property
    def rank(self) -> int:
        return len(self.shifts)

    def canonical(self) -> "GradedFreeModule":
        return GradedFreeModule(sorted(self.shifts))

    def __eq__(self, other):
        return isinstance(other, GradedFreeModule) and sorted(self.shifts) == sorted(other.shifts)

    def __repr__(self):
        return f"GradedFreeModule({list(self.shifts)})"


class BettiData:
    """
    Graded Betti numbers of M(f) relative to 1 - d

    d_seq: second syzygy twists minus (d - 1), ascending
    c_seq: third, b_seq: fourth (empty for plane curves)
    """

    def __init__(self, degree: int, d_seq: Sequence[int], c_seq: Sequence[int] = (),
                 b_seq: Sequence[int] = (), n_vars: int = 4):
        if n_vars not in (3, 4):
            raise ValueError(f"Betti data needs 3 or 4 variables, got {n_vars}")
        if n_vars == 3 and b_seq:
            raise ValueError("Plane curve resolutions have no fourth step")
        self.degree = degree
        self.d_seq = tuple(sorted(d_seq))
        self.c_seq = tuple(sorted(c_seq))
        self.b_seq = tuple(sorted(b_seq))
        self.n_vars = n_vars

    @property
    def p(self) -> int:
        return len(self.d_seq)

    @property
    def q(self) -> int:
        return len(self.c_seq)

    @property
    def r(self) -> int:
        return len(self.b_seq)

    @property
    def has_positive_entries(self) -> bool:
        return all(v >= 1 for v in self.d_seq + self.c_seq + self.b_seq)

    def shift_lists(self) -> List[List[int]]:
        """Twists of F_0, F_1, ... as S(-a) -> a"""
        offset = self.degree - 1
        lists = [[0], [offset] * self.n_vars]
        for seq in (self.d_seq, self.c_seq, self.b_seq):
            if not seq:
                break
            lists.append([offset + v for v in seq])
        return lists

    def to_dict(self) -> dict:
        data = {"d": list(self.d_seq), "c": list(self.c_seq)}
        if self.n_vars == 4:
            data["b"] = list(self.b_seq)
        data.update({"p": self.p, "q": self.q})
        if self.n_vars == 4:
            data["r"] = self.r
        return data

    def __eq__(self, other):
        if not isinstance(other, BettiData):
            return NotImplemented
        return (self.degree, self.d_seq, self.c_seq, self.b_seq, self.n_vars) == \
               (other.degree, other.d_seq, other.c_seq, other.b_seq, other.n_vars)

    def __repr__(self):
        return f"BettiData(d={self.degree}, d_seq={list(self.d_seq)}, c_seq={list(self.c_seq)}, b_seq={list(self.b_seq)})"


class GradedResolution:
    """
    Chain F_len -> ... -> F_1 -> F_0 = S

    maps[k - 1] is d_k : F_k -> F_{k-1}, stored column by column as
    {row index: nonzero Polynomial}.
    """

    def __init__(self, modules: List[GradedFreeModule], maps: List[List[Column]],
                 variables: VariableSet, field: CoefficientField,
                 minimal: bool = False, rebased: bool = False):
        if len(maps) != len(modules) - 1:
            raise ValueError(f"{len(modules)} modules need {len(modules) - 1} maps, got {len(maps)}")
        self.modules = modules
        self.maps = maps
        self.variables = variables
        self.field = field
        self.minimal = minimal
        self.rebased = rebased

    @property
    def n_vars(self) -> int:
        return self.variables.n

    @property
    def length(self) -> int:
        return len(self.maps)

    @property
    def ranks(self) -> List[int]:
        return [m.rank for m in self.modules]

    def shift_lists(self) -> List[List[int]]:
        return [list(m.shifts) for m in self.modules]

    def entry(self, k: int, row: int, col: int) -> Polynomial:
        return self.maps[k - 1][col].get(row, Polynomial.zero(self.variables, self.field))

    def column(self, k: int, col: int) -> FreeModuleElement:
        """Image of the col-th basis vector of F_k, as an element of F_{k-1}"""
        target = self.modules[k - 1]
        terms = {}
        for row, polynomial in self.maps[k - 1][col].items():
            for monomial, coefficient in polynomial.term_dict().items():
                terms[(row, monomial)] = coefficient
        return FreeModuleElement(terms, target.rank, self.variables, self.field, target.shifts)

    def to_dict(self) -> dict:
        from poly_parser import format_resolution

        return {
            "ranks": self.ranks,
            "shifts": self.shift_lists(),
            "minimal": self.minimal,
            "text": format_resolution(self),
        }

    def __repr__(self):
        return f"GradedResolution(ranks={self.ranks}, minimal={self.minimal})"


def _column_from_vector(vector, variables: VariableSet, field: CoefficientField) -> Column:
    grouped: Dict[int, dict] = {}
    for (comp, monomial), coefficient in vector.items():
        grouped.setdefault(comp, {})[monomial] = coefficient
    return {row: Polynomial.from_terms(terms, variables, field) for row, terms in grouped.items()}


def _coordinates_in(targets: Sequence[Polynomial], basis: Sequence[Polynomial]) -> Optional[List[list]]:
    """
    T with targets[i] = sum_a T[i][a] * basis[a], or None when basis is
    dependent or a target is outside its span
    """
    field = basis[0].field
    domain = field.domain
    monomials = sorted({m for p in list(basis) + list(targets) for m in p.term_dict()})
    columns = list(basis) + list(targets)
    rows = [[p.coefficient(m) for p in columns] for m in monomials]
    matrix = DomainMatrix(rows, (len(monomials), len(columns)), domain)
    reduced, pivots = matrix.rref()
    if tuple(pivots) != tuple(range(len(basis))):
        return None
    dense = reduced.to_Matrix()
    return [[domain.from_sympy(dense[a, len(basis) + i]) for a in range(len(basis))]
            for i in range(len(targets))]


def _frame_level(vectors, leads, order: TermOrder, domain, zero):
    """
    Schreyer syzygies of one frame level

    Returns the syzygy vectors (one per divisibility-minimal pair) with their
    leading terms, sorted by (component, lex-descending monomial).
    """
    by_comp: Dict[int, List[int]] = {}
    for index, ((comp, _), _) in enumerate(leads):
        by_comp.setdefault(comp, []).append(index)

    syzygies = []
    for comp, indices in by_comp.items():
        for a, i in enumerate(indices):
            (_, m_i), c_i = leads[i]
            candidates = []
            for j in indices[a + 1:]:
                (_, m_j), c_j = leads[j]
                lcm = monomial_lcm(m_i, m_j)
                candidates.append((monomial_div(lcm, m_i), j, lcm))
            for multiplier, j, lcm in candidates:
                if any(other != multiplier and monomial_divides(other, multiplier) or
                       other == multiplier and k < j
                       for other, k, _ in candidates):
                    continue
                (_, m_j), c_j = leads[j]
                partner = monomial_div(lcm, m_j)
                s_vector = {}
                add_scaled(s_vector, vectors[i], c_j, multiplier)
                add_scaled(s_vector, vectors[j], -c_i, partner)
                quotients = {}
                remainder = reduce_vector(s_vector, vectors, leads, by_comp, order, domain, quotients)
                if remainder:
                    raise RuntimeError("Frame S-vector did not reduce to zero; level is not a Gröbner basis")
                sigma = {key: -value for key, value in quotients.items()}
                add_scaled(sigma, {(i, zero): domain.one}, c_j, multiplier)
                add_scaled(sigma, {(j, zero): domain.one}, -c_i, partner)
                syzygies.append(((i, multiplier), sigma))

    syzygies.sort(key=lambda item: (item[0][0], tuple(-e for e in item[0][1])))
    return syzygies


def free_resolution(jacobian_gens: Sequence[Polynomial]) -> GradedResolution:
    """
    Graded free resolution of S/J, J generated by the partial derivatives

    Args:
        jacobian_gens: n homogeneous polynomials of one degree d - 1 >= 2 (zeros allowed)

    Returns:
        GradedResolution, usually not minimal, length <= n; when the generators are
        linearly independent its first map is exactly the generator row
    """
    gens = list(jacobian_gens)
    nonzero = [g for g in gens if not g.is_zero]
    if not nonzero:
        raise ValueError("All Jacobian generators vanish")
    first = nonzero[0]
    for g in gens:
        first._check(g)
        if not g.is_zero and (not g.is_homogeneous or g.degree != first.degree):
            raise ValueError(f"Jacobian generators must be homogeneous of one degree d - 1; got {g}")
    if first.degree < 2:
        raise ValueError(f"Generators of degree {first.degree} do not come from a surface of degree >= 3")
    variables, field = first.variables, first.field
    domain = field.domain
    zero = (0,) * variables.n

    gb = groebner_basis(nonzero)
    level0 = sorted((g.terms for g in gb), key=lambda v: tuple(-e for e in leading_term(v, gb.order)[1]))
    order = TermOrder.degrevlex()
    vectors = level0
    shifts = [sum(leading_term(v, order)[1]) for v in vectors]
    modules = [GradedFreeModule([0]), GradedFreeModule(shifts)]
    maps = [[_column_from_vector(v, variables, field) for v in vectors]]

    while True:
        leads = [(lead, v[lead]) for v in vectors for lead in [leading_term(v, order)]]
        syzygies = _frame_level(vectors, leads, order, domain, zero)
        if not syzygies:
            break
        order = TermOrder.schreyer([lead for lead, _ in leads], order)
        next_shifts = [sum(m) + shifts[i] for (i, m), _ in syzygies]
        vectors = [sigma for _, sigma in syzygies]
        modules.append(GradedFreeModule(next_shifts))
        maps.append([_column_from_vector(v, variables, field) for v in vectors])
        shifts = next_shifts

    resolution = GradedResolution(modules, maps, variables, field)
    return _rebase_on_generators(resolution, gens)


def _rebase_on_generators(resolution: GradedResolution, gens: List[Polynomial]) -> GradedResolution:
    """Swap the degree d-1 Gröbner elements of F_1 for the generators themselves"""
    if any(g.is_zero for g in gens):
        return resolution
    low = gens[0].degree
    d1 = resolution.maps[0]
    old_low = [i for i, s in enumerate(resolution.modules[1].shifts) if s == low]
    if len(old_low) != len(gens):
        return resolution
    transform = _coordinates_in([d1[i][0] for i in old_low], gens)
    if transform is None:
        return resolution

    field = resolution.field
    n = len(gens)
    others = [i for i in range(resolution.modules[1].rank) if i not in old_low]
    new_index = {old: n + position for position, old in enumerate(others)}
    low_position = {old: position for position, old in enumerate(old_low)}

    new_d1 = [{0: g} for g in gens] + [d1[i] for i in others]
    new_modules = list(resolution.modules)
    new_modules[1] = GradedFreeModule([low] * n + [resolution.modules[1].shifts[i] for i in others])
    new_maps = [new_d1] + resolution.maps[1:]

    if len(resolution.maps) > 1:
        new_d2 = []
        for column in resolution.maps[1]:
            rebuilt: Column = {}
            for row, entry in column.items():
                if row in low_position:
                    weights = transform[low_position[row]]
                    for a in range(n):
                        if weights[a]:
                            piece = entry.scalar_mul(weights[a])
                            rebuilt[a] = rebuilt[a] + piece if a in rebuilt else piece
                else:
                    rebuilt[new_index[row]] = entry
            new_d2.append({r: e for r, e in rebuilt.items() if not e.is_zero})
        new_maps[1] = new_d2

    return GradedResolution(new_modules, new_maps, resolution.variables, field, rebased=True)


def _find_unit(maps: List[List[Column]], modules: List[GradedFreeModule]) -> Optional[Tuple[int, int, int]]:
    best = None
    for k, columns in enumerate(maps, start=1):
        source = modules[k].shifts
        for col, column in enumerate(columns):
            for row, entry in column.items():
                if entry.is_constant and not entry.is_zero:
                    candidate = (source[col], k, col, row)
                    if best is None or candidate < best:
                        best = candidate
    return None if best is None else best[1:]


def _drop_row(columns: List[Column], row: int) -> List[Column]:
    return [{(r if r < row else r - 1): e for r, e in column.items() if r != row} for column in columns]


def minimalize(resolution: GradedResolution) -> GradedResolution:
    """
    Cancel unit entries, lowest degree first, until no entry has a constant term

    Returns:
        minimal GradedResolution with each module's twists sorted ascending
    """
    field = resolution.field
    domain = field.domain
    maps = [[dict(column) for column in columns] for columns in resolution.maps]
    modules = [list(m.shifts) for m in resolution.modules]

    while True:
        pivot = _find_unit(maps, [GradedFreeModule(s) for s in modules])
        if pivot is None:
            break
        k, col, row = pivot
        columns = maps[k - 1]
        pivot_column = columns[col]
        unit = pivot_column[row].coefficient((0,) * resolution.variables.n)
        inverse = domain.quo(domain.one, unit)
        for j, column in enumerate(columns):
            if j == col or row not in column:
                continue
            factor = column[row].scalar_mul(inverse)
            for r, entry in pivot_column.items():
                value = column[r] - factor * entry if r in column else -(factor * entry)
                if value.is_zero:
                    column.pop(r, None)
                else:
                    column[r] = value
        del columns[col]
        maps[k - 1] = _drop_row(columns, row)
        if k >= 2:
            del_target = maps[k - 2]
            del del_target[row]
        if k < len(maps):
            maps[k] = _drop_row(maps[k], col)
        del modules[k][col]
        del modules[k - 1][row]

    while len(modules) > 1 and not modules[-1]:
        modules.pop()
        maps.pop()

    for k in range(1, len(modules)):
        permutation = sorted(range(len(modules[k])), key=lambda i: modules[k][i])
        if permutation == list(range(len(permutation))):
            continue
        modules[k] = [modules[k][i] for i in permutation]
        maps[k - 1] = [maps[k - 1][i] for i in permutation]
        if k < len(maps):
            renumber = {old: new for new, old in enumerate(permutation)}
            maps[k] = [{renumber[r]: e for r, e in column.items()} for column in maps[k]]

    return GradedResolution([GradedFreeModule(s) for s in modules], maps, resolution.variables,
                            field, minimal=True, rebased=resolution.rebased)


def betti_from_shifts(shift_lists: Sequence[Sequence[int]], degree: int, n_vars: int = 4) -> BettiData:
    """
    BettiData from the twists of a minimal resolution of S/J_f

    A first module of rank below n (linearly dependent partials) is padded
    back to S^n(1-d) with degree-0 relations, so d_seq gains zeros.
    """
    lists = [list(s) for s in shift_lists]
    if not lists or sorted(lists[0]) != [0]:
        raise MalformedResolutionError("Resolution must start at the ring S itself")
    if len(lists) < 2 or not lists[1]:
        raise MalformedResolutionError("Resolution has no first step S^n(1-d)")
    offset = degree - 1
    if any(s != offset for s in lists[1]):
        raise MalformedResolutionError(
            f"First step must be S^{n_vars}(-{offset}), got twists {sorted(lists[1])}")
    if len(lists[1]) > n_vars:
        raise MalformedResolutionError(f"First step has rank {len(lists[1])} > {n_vars}")
    if len(lists) - 1 > n_vars:
        raise MalformedResolutionError(f"Resolution of length {len(lists) - 1} exceeds {n_vars} variables")
    padding = [0] * (n_vars - len(lists[1]))
    steps = [[s - offset for s in shifts] for shifts in lists[2:]]
    steps += [[]] * (3 - len(steps))
    return BettiData(degree, padding + steps[0], steps[1], steps[2], n_vars=n_vars)


def extract_betti(resolution: GradedResolution, degree: int) -> BettiData:
    if not resolution.minimal:
        raise MalformedResolutionError("Betti numbers are read off a minimal resolution; minimalize first")
    return betti_from_shifts(resolution.shift_lists(), degree, resolution.n_vars)


def jacobian_resolution(f: Polynomial) -> GradedResolution:
    """Minimal resolution of M(f), first map the row of partials when they are independent"""
    partials = [f.partial_derivative(v) for v in f.variables]
    return minimalize(free_resolution(partials))


def verify_composition(resolution: GradedResolution) -> bool:
    """d_k o d_{k+1} = 0 for every consecutive pair"""
    for k in range(1, resolution.length):
        lower = resolution.maps[k - 1]
        for column in resolution.maps[k]:
            image: Dict[int, Polynomial] = {}
            for row, entry in column.items():
                for target, value in lower[row].items():
                    piece = entry * value
                    image[target] = image[target] + piece if target in image else piece
            if any(not value.is_zero for value in image.values()):
                return False
    return True


def verify_graded(resolution: GradedResolution) -> bool:
    """Entry (row, col) of d_k is homogeneous of degree shift_k[col] - shift_{k-1}[row]"""
    for k, columns in enumerate(resolution.maps, start=1):
        source, target = resolution.modules[k].shifts, resolution.modules[k - 1].shifts
        for col, column in enumerate(columns):
            for row, entry in column.items():
                if not entry.is_homogeneous or entry.degree != source[col] - target[row]:
                    return False
    return True


def verify_minimal(resolution: GradedResolution) -> bool:
    return all(not entry.is_constant for columns in resolution.maps
               for column in columns for entry in column.values())


def resolution_hilbert_function(resolution: GradedResolution, degree: int) -> int:
    n = resolution.n_vars
    total = 0
    for k, module in enumerate(resolution.modules):
        sign = -1 if k % 2 else 1
        total += sign * sum(graded_dim(-shift, degree, n) for shift in module.shifts)
    return total


def verify_exactness(resolution: GradedResolution, gens: Sequence[Polynomial], k_max: int) -> bool:
    """Hilbert function of the resolution against standard monomial counts of GB(J), k = 0..k_max"""
    gb = groebner_basis([g for g in gens if not g.is_zero])
    return all(resolution_hilbert_function(resolution, k) == standard_monomial_count(gb, k)
               for k in range(k_max + 1))


def koszul_syzygies(partials: Sequence[Polynomial]) -> List[FreeModuleElement]:
    """theta_ij = f_j e_i - f_i e_j, i < j"""
    n = len(partials)
    zero = Polynomial.zero(partials[0].variables, partials[0].field)
    shift = next((p.degree for p in partials if not p.is_zero), 0)
    result = []
    for i in range(n):
        for j in range(i + 1, n):
            components = [zero] * n
            components[i] = partials[j]
            components[j] = -partials[i]
            element = FreeModuleElement.from_components(components, [shift] * n)
            if not element.is_zero:
                result.append(element)
    return result


def _minimal_subset(elements: Sequence[FreeModuleElement]) -> List[FreeModuleElement]:
    """Drop, lowest degree first, every element already in the span of those kept"""
    kept: List[FreeModuleElement] = []
    for element in sorted((e for e in elements if not e.is_zero), key=lambda e: e.degree):
        if kept and groebner_basis(kept, TermOrder.position_over_term()).contains(element):
            continue
        kept.append(element)
    return kept


def ar_generators(f: Polynomial, resolution: GradedResolution = None) -> List[FreeModuleElement]:
    """
    Minimal generators of AR(f) as vectors over the partials

    Read from d_2 when the resolution is rebased on the partials. Otherwise (a zero
    partial, or a basis change that could not be undone) the Schreyer relations are
    recomputed and thinned to a minimal subset, so the degrees still match d_seq.
    """
    partials = [f.partial_derivative(v) for v in f.variables]
    resolution = resolution or jacobian_resolution(f)
    if resolution.rebased and resolution.length >= 2:
        return [resolution.column(2, j) for j in range(resolution.modules[2].rank)]
    return _minimal_subset(syzygy_generators(partials))


def ar_generators_and_mdr(f: Polynomial, resolution: GradedResolution = None) -> Tuple[List[int], Optional[int]]:
    """
    Degrees of the minimal generators of AR(f) and mdr(f)

    mdr is the least degree of a generator whose class modulo the Koszul
    syzygies is nonzero; None when every relation is Koszul.
    """
    resolution = resolution or jacobian_resolution(f)
    degree = f.degree
    betti = extract_betti(resolution, degree)
    partials = [f.partial_derivative(v) for v in f.variables]
    koszul = koszul_syzygies(partials)
    generators = ar_generators(f, resolution)
    if not generators:
        return list(betti.d_seq), None
    if not koszul:
        return list(betti.d_seq), min(g.degree - (degree - 1) for g in generators)
    koszul_basis = groebner_basis(koszul)
    mdr = None
    for generator in sorted(generators, key=lambda g: g.degree):
        if generator.is_zero:
            continue
        relation_degree = generator.degree - (degree - 1)
        if mdr is not None and relation_degree >= mdr:
            break
        if not koszul_basis.contains(generator):
            mdr = relation_degree
    return list(betti.d_seq), mdr
