"""
Surface and plane curve analysis
Jacobian ideal -> minimal resolution -> Betti numbers -> Hilbert polynomial,
Tjurina bounds, type, gap vectors, mdr and the syzygy determinant test.
"""
import time
import warnings
from itertools import permutations
from math import comb
from typing import Dict, List, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict, Field
from sympy.combinatorics import Permutation

import config
from groebner_engine import InhomogeneousInputError, SyzygyError
from hilbert_engine import (SIGMA_EMPTY, SIGMA_TWO_OR_MORE, SIGMA_ZERO,
                            NonReducedInputError, classify_and_polynomial,
                            count_identity_holds, is_smooth_pattern, lem2_cross_check,
                            power_sum, sum_identity_holds)
from poly_core import Polynomial, VariableSet
from poly_parser import format_resolution, rational_to_json
from resolution_engine import (BettiData, ar_generators_and_mdr,
                               extract_betti, free_resolution, minimalize,
                               verify_composition, verify_exactness, verify_graded,
                               verify_minimal)

RationalJson = Union[int, Dict[str, int]]


class AnalysisOptions(BaseModel):
    """Switches for analyze_surface"""
    assume_nodal: bool = False  # Input is asserted nodal; enables the mdr lower bound
    compute_mdr: bool = True  # Reduce AR(f) generators modulo the Koszul relations
    verify: Optional[bool] = None  # Resolution checks (default: config.VERIFY_INVARIANTS)


class BettiRecord(BaseModel):
    d: List[int]
    c: List[int]
    b: List[int]
    p: int
    q: int
    r: int


class IdentityRecord(BaseModel):
    count_check: bool  # p + r = q + 3
    sum_check: bool  # sum d - sum c + sum b = d - 1
    sum_value: int
    square_check: bool  # (d-1)^2 + S2 = 0
    square_value: int
    cube_value: int  # S3 = sum d^3 - sum c^3 + sum b^3
    cube_tau: Optional[int] = None  # ((d-1)^3 - S3) / 6 when the square check holds
    smooth_pattern: bool
    p_at_least_three: bool
    positive_entries: bool


class HilbertRecord(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    A_half: Optional[RationalJson] = None
    B: Optional[RationalJson] = None
    A: Optional[int] = None
    tau: Optional[int] = None
    k0: Optional[int] = None
    A_even: bool = True
    B_integral: bool = True


class OracleRecord(BaseModel):
    cubic: int
    quadratic: int
    linear: int
    constant: int
    leading_vanish: bool
    linear_matches: bool
    constant_matches: bool


class WindowRecord(BaseModel):
    lower: int
    upper: int
    value: int
    satisfied: bool


class BoundsRecord(BaseModel):
    dupw: Optional[WindowRecord] = None
    cor_printed: Optional[WindowRecord] = None
    cor_derived: Optional[WindowRecord] = None
    cor_discrepancy: Optional[bool] = None
    suspension_bound: Optional[int] = None
    suspension_satisfied: Optional[bool] = None
    nodal_bound: Optional[int] = None
    nodal_satisfied: Optional[bool] = None


class TypeRecord(BaseModel):
    t: Optional[int] = None
    alpha: List[int] = []
    beta: List[int] = []
    gap_sum_matches: Optional[bool] = None


class CheckRecord(BaseModel):
    composition: bool
    graded: bool
    minimal: bool
    exactness: bool


class SurfaceReport(BaseModel):
    """Everything derived from the minimal resolution of M(f) for a surface"""
    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(config.REPORT_SCHEMA, alias="schema")
    degree: int
    field: str
    modular: bool
    betti: BettiRecord
    identities: IdentityRecord
    sigma_dimension: str
    tau: Optional[int] = None
    hilbert_polynomial: Optional[HilbertRecord] = None
    coefficient_oracle: Optional[OracleRecord] = None
    bounds: BoundsRecord = BoundsRecord()
    type_record: TypeRecord = Field(TypeRecord(), alias="type")
    mdr: Optional[int] = None
    koszul_generators: Optional[int] = None
    resolution_text: str
    checks: Optional[CheckRecord] = None
    elapsed_seconds: Optional[float] = None


class CurveBettiRecord(BaseModel):
    d: List[int]
    c: List[int]
    p: int
    q: int


class CurveReport(BaseModel):
    """Minimal resolution data of the Milnor algebra of a plane curve"""
    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(config.REPORT_SCHEMA, alias="schema")
    degree: int
    field: str
    modular: bool
    betti: CurveBettiRecord
    count_check: bool  # p' = q' + 2
    sum_check: bool  # sum d' - sum c' = d - 1
    epsilon: List[int]
    epsilon_positive: bool
    type_c: int = Field(alias="type")
    type_matches_epsilon: bool
    classification: str
    tau: int
    exponents: Optional[List[int]] = None
    free_check: bool  # tau = (d-1)^2 - d'_1 (d - d'_1 - 1)
    tjurina_maximal_bound: Optional[int] = None
    tjurina_maximal: Optional[bool] = None
    suspension_lower_bound_attained: bool  # tau = (d - d'_1 - 1)(d - 1)
    resolution_text: str
    elapsed_seconds: Optional[float] = None


def jacobian_generators(f: Polynomial) -> List[Polynomial]:
    """
    Partial derivatives of f in ring order

    Args:
        f: homogeneous polynomial of degree >= 3 (4 variables, or 3 in curve mode)

    Returns:
        [f_x, f_y, f_z, f_t] (or [f_x, f_y, f_z])
    """
    if f.is_zero or not f.is_homogeneous:
        raise InhomogeneousInputError(f"f must be a nonzero homogeneous polynomial: {f}")
    if f.degree < 3:
        raise ValueError(f"f must have degree >= 3, got {f.degree}")
    return [f.partial_derivative(v) for v in f.variables]


def suspension(f_curve: Polynomial, d: int) -> Polynomial:
    """f(x, y, z, t) = f'(x, y, z) + t^d"""
    if f_curve.variables.n != 3:
        raise ValueError("Suspension takes a polynomial in 3 variables")
    if f_curve.is_zero or not f_curve.is_homogeneous or f_curve.degree != d:
        raise ValueError(f"Suspension needs a homogeneous polynomial of degree {d}, got degree {f_curve.degree}")
    extra = next(v for v in config.SURFACE_VARIABLES + ("t", "w", "u") if v not in f_curve.variables.names)
    variables = VariableSet(f_curve.variables.names + (extra,))
    terms = {m + (0,): c for m, c in f_curve.term_dict().items()}
    terms[(0, 0, 0, d)] = terms.get((0, 0, 0, d), 0) + 1
    return Polynomial.from_terms(terms, variables, f_curve.field)


def nodal_mdr_bound(d: int) -> int:
    """Lower bound 2d - floor(d/2) - 3 for mdr of a nodal surface, d >= 5"""
    if d < config.NODAL_MIN_DEGREE:
        raise ValueError(f"The nodal mdr bound needs d >= {config.NODAL_MIN_DEGREE}, got {d}")
    return 2 * d - d // 2 - 3


def syzygy_components(rho) -> List[Polynomial]:
    components = getattr(rho, "components", rho)
    return list(components() if callable(components) else components)


def is_jacobian_syzygy(f: Polynomial, rho) -> bool:
    components = syzygy_components(rho)
    partials = [f.partial_derivative(v) for v in f.variables]
    if len(components) != len(partials):
        return False
    total = Polynomial.zero(f.variables, f.field)
    for a, partial in zip(components, partials):
        total = total + a * partial
    return total.is_zero


def _determinant(rows: Sequence[Sequence[Polynomial]]) -> Polynomial:
    size = len(rows)
    total = Polynomial.zero(rows[0][0].variables, rows[0][0].field)
    for permutation in permutations(range(size)):
        term = Polynomial.constant(1, total.variables, total.field)
        for i, j in enumerate(permutation):
            term = term * rows[i][j]
            if term.is_zero:
                break
        if term.is_zero:
            continue
        total = total + term if Permutation(list(permutation)).signature() > 0 else total - term
    return total


class DeterminantTest(BaseModel):
    determinant: str
    independent: bool
    divisible_by_f: Optional[bool] = None
    degree_sum: int  # 1 + deg rho_1 + deg rho_2 + deg rho_3
    t_lower_bound_applies: bool


def syzygy_determinant_test(f: Polynomial, rho1, rho2, rho3) -> DeterminantTest:
    """
    Euler row (x, y, z, t) above three Jacobian syzygies; g = det

    g != 0 iff the syzygies are independent over the fraction field, and then
    f | g, forcing 1 + deg rho_1 + deg rho_2 + deg rho_3 >= d.
    """
    rows = [[Polynomial.variable(v, f.variables, f.field) for v in f.variables]]
    degrees = []
    for index, rho in enumerate((rho1, rho2, rho3), start=1):
        if not is_jacobian_syzygy(f, rho):
            raise SyzygyError(f"rho_{index} is not a Jacobian syzygy of f")
        components = syzygy_components(rho)
        rows.append(components)
        degrees.append(max(c.degree for c in components))
    g = _determinant(rows)
    independent = not g.is_zero
    divisible = f.divides(g) if independent else None
    degree_sum = 1 + sum(degrees)
    return DeterminantTest(
        determinant=str(g),
        independent=independent,
        divisible_by_f=divisible,
        degree_sum=degree_sum,
        t_lower_bound_applies=bool(independent and divisible and degree_sum >= f.degree),
    )


def _window(lower: int, upper: int, value: int) -> WindowRecord:
    return WindowRecord(lower=lower, upper=upper, value=value, satisfied=lower <= value <= upper)


def type_and_gaps(betti: BettiData) -> TypeRecord:
    """t = d_1 + d_2 + d_3 + 1 - d with gaps alpha_j = c_j - d_{j+3}, beta_k = b_k - c_{p-3+k}"""
    ds, cs, bs = betti.d_seq, betti.c_seq, betti.b_seq
    if betti.p < 3:
        return TypeRecord()
    t = ds[0] + ds[1] + ds[2] + 1 - betti.degree
    alpha = [cs[j] - ds[j + 3] for j in range(min(betti.p - 3, betti.q))]
    beta = [bs[k] - cs[betti.p - 3 + k] for k in range(betti.r) if betti.p - 3 + k < betti.q]
    return TypeRecord(t=t, alpha=alpha, beta=beta, gap_sum_matches=t == sum(alpha) - sum(beta))


def _bounds(betti: BettiData, tau: int, cube: int) -> BoundsRecord:
    d = betti.degree
    d1 = betti.d_seq[0]
    cube_window = (d - 1) ** 3
    dupw = _window((d - 1) ** 3 - d1 * (d - 1) ** 2, (d - 1) ** 3 - d1 * (d - d1 - 1) * (d - 1), tau)
    printed = _window(6 * d1 * (d - d1 - 1) * (d - 1), 6 * d1 * (d - 1) ** 2, cube)
    derived = _window(6 * d1 * (d - d1 - 1) * (d - 1) - 5 * cube_window, 6 * d1 * (d - 1) ** 2 - 5 * cube_window, cube)
    bounds = BoundsRecord(dupw=dupw, cor_printed=printed, cor_derived=derived,
                          cor_discrepancy=printed.satisfied != derived.satisfied)
    if 2 * d1 >= d:
        bound = (d - 1) ** 3 - d1 * (d - d1 - 1) * (d - 1) - comb(2 * d1 + 2 - d, 2) * (d - 1)
        bounds.suspension_bound = bound
        bounds.suspension_satisfied = tau <= bound
    return bounds


def build_surface_report(betti: BettiData, field_tag: str = "q", resolution_text: str = None,
                         strict: bool = True, assume_nodal: bool = False,
                         mdr: Optional[int] = None, checks: CheckRecord = None) -> SurfaceReport:
    """
    Arithmetic part of a surface report, shared by full analysis and Betti verification

    Args:
        betti: Betti data of M(f)
        field_tag: coefficient field the data was computed over
        resolution_text: pretty-printed resolution (default: rebuilt from betti)
        strict: raise NonReducedInputError when the identities fail, else report them
        assume_nodal: fill the nodal mdr bound
        mdr: measured mdr(f), when a polynomial was analyzed
        checks: resolution verification outcome

    Returns:
        SurfaceReport
    """
    d = betti.degree
    s2, s3 = power_sum(betti, 2), power_sum(betti, 3)
    square = (d - 1) ** 2 + s2
    identities = IdentityRecord(
        count_check=count_identity_holds(betti),
        sum_check=sum_identity_holds(betti),
        sum_value=power_sum(betti, 1),
        square_check=square == 0,
        square_value=square,
        cube_value=s3,
        cube_tau=((d - 1) ** 3 - s3) // 6 if square == 0 and ((d - 1) ** 3 - s3) % 6 == 0 else None,
        smooth_pattern=is_smooth_pattern(betti),
        p_at_least_three=betti.p >= 3,
        positive_entries=betti.has_positive_entries,
    )
    if not identities.p_at_least_three:
        warnings.warn(f"Betti data has p = {betti.p} < 3")
    if not identities.positive_entries:
        warnings.warn("Betti data has entries below 1 (linearly dependent partials)")

    text = resolution_text or format_resolution(betti)
    report = SurfaceReport(
        degree=d,
        field=field_tag,
        modular=field_tag != "q",
        betti=BettiRecord(**betti.to_dict()),
        identities=identities,
        sigma_dimension=SIGMA_TWO_OR_MORE,
        resolution_text=text,
        mdr=mdr,
        koszul_generators=sum(1 for v in betti.d_seq if v == d - 1),
        checks=checks,
    )
    report.type_record = type_and_gaps(betti)

    try:
        polynomial = classify_and_polynomial(betti)
    except NonReducedInputError as e:
        if strict:
            e.resolution_text = text
            raise
        return report

    report.sigma_dimension = polynomial.sigma_dimension
    report.hilbert_polynomial = HilbertRecord(
        A_half=rational_to_json(polynomial.a_half) if polynomial.A is not None else None,
        B=rational_to_json(polynomial.B) if polynomial.B is not None else None,
        A=polynomial.A,
        tau=polynomial.tau,
        k0=polynomial.k0,
        A_even=polynomial.A_is_even,
        B_integral=polynomial.B_is_integral,
    )
    report.coefficient_oracle = OracleRecord(**lem2_cross_check(betti, polynomial))

    if polynomial.sigma_dimension in (SIGMA_EMPTY, SIGMA_ZERO):
        report.tau = polynomial.tau
        if betti.p >= 1:
            report.bounds = _bounds(betti, polynomial.tau, s3)
    if assume_nodal and d >= config.NODAL_MIN_DEGREE:
        bound = nodal_mdr_bound(d)
        report.bounds.nodal_bound = bound
        if mdr is not None:
            report.bounds.nodal_satisfied = mdr >= bound > d - 1 and report.koszul_generators == 6
    return report


def build_curve_report(betti: BettiData, field_tag: str = "q", resolution_text: str = None) -> CurveReport:
    """Curve invariants from the Betti data of M(f')"""
    d = betti.degree
    polynomial = classify_and_polynomial(betti)
    ds, cs = betti.d_seq, betti.c_seq
    epsilon = [cs[j] - ds[j + 2] for j in range(betti.q) if j + 2 < betti.p]
    d1 = ds[0] if ds else 0
    t = ds[0] + ds[1] - d + 1 if betti.p >= 2 else None
    if t == 0:
        classification = "free"
    elif t == 1:
        classification = "plus-one-generated"
    else:
        classification = "other"
    tau = polynomial.tau
    report = CurveReport(
        degree=d,
        field=field_tag,
        modular=field_tag != "q",
        betti=CurveBettiRecord(d=list(ds), c=list(cs), p=betti.p, q=betti.q),
        count_check=count_identity_holds(betti),
        sum_check=sum_identity_holds(betti),
        epsilon=epsilon,
        epsilon_positive=all(e >= 1 for e in epsilon),
        type_c=t,
        type_matches_epsilon=t == sum(epsilon),
        classification=classification,
        tau=tau,
        exponents=[ds[0], ds[1]] if betti.q == 0 and betti.p == 2 else None,
        free_check=tau == (d - 1) ** 2 - d1 * (d - d1 - 1),
        suspension_lower_bound_attained=tau == (d - d1 - 1) * (d - 1),
        resolution_text=resolution_text or format_resolution(betti, "R"),
    )
    if 2 * d1 >= d:
        bound = (d - 1) ** 2 - d1 * (d - d1 - 1) - comb(2 * d1 + 2 - d, 2)
        report.tjurina_maximal_bound = bound
        report.tjurina_maximal = tau == bound
    return report


class SurfaceAnalyzer:
    def __init__(self, verbose: bool = True, verify: bool = None, assume_nodal: bool = False,
                 compute_mdr: bool = True):
        """
        Run the Jacobian algebra pipeline and report on it

        Args:
            verbose: print phase progress
            verify: check composition, grading, minimality and exactness (default: config.VERIFY_INVARIANTS)
            assume_nodal: the input is asserted nodal (enables the nodal mdr bound)
            compute_mdr: reduce AR(f) generators modulo Koszul relations to get mdr(f)
        """
        self.verbose = verbose
        self.verify = config.VERIFY_INVARIANTS if verify is None else verify
        self.assume_nodal = assume_nodal
        self.compute_mdr = compute_mdr

    def _log(self, message: str):
        if self.verbose:
            print(message)

    def _resolve(self, f: Polynomial):
        self._log(f"\n[PHASE 1] Jacobian ideal of f (degree {f.degree}, field {f.field.tag})")
        partials = jacobian_generators(f)
        for name, partial in zip(f.variables, partials):
            self._log(f"  f_{name} = {partial}")

        self._log("\n[PHASE 2] Free resolution")
        frame = free_resolution(partials)
        self._log(f"  Schreyer frame ranks: {frame.ranks}")
        resolution = minimalize(frame)
        self._log(f"✓ Minimal ranks: {resolution.ranks}")
        text = format_resolution(resolution)
        self._log(f"  {text}")

        checks = None
        if self.verify:
            shifts = [s for lst in resolution.shift_lists() for s in lst]
            checks = CheckRecord(
                composition=verify_composition(resolution),
                graded=verify_graded(resolution),
                minimal=verify_minimal(resolution),
                exactness=verify_exactness(resolution, partials, max(shifts) + config.HILBERT_MARGIN),
            )
            if all(checks.model_dump().values()):
                self._log("✓ Resolution checks passed (composition, grading, minimality, exactness)")
            else:
                self._log(f"⚠️  Resolution checks failed: {checks.model_dump()}")
                warnings.warn(f"Resolution verification failed: {checks.model_dump()}")
        return resolution, text, checks

    def analyze(self, f: Polynomial) -> SurfaceReport:
        """
        Full surface report for f

        Raises:
            NonReducedInputError: Betti identities fail (dim Σ >= 2); carries the partial data
        """
        if f.variables.n != 4:
            raise ValueError(f"Surface analysis needs 4 variables, got {f.variables}")
        start = time.time()
        if f.field.is_modular:
            warnings.warn(f"Computing over GF({f.field.prime}); Betti numbers may exceed the rational ones")
        resolution, text, checks = self._resolve(f)

        self._log("\n[PHASE 3] Betti numbers")
        betti = extract_betti(resolution, f.degree)
        self._log(f"  d = {list(betti.d_seq)}, c = {list(betti.c_seq)}, b = {list(betti.b_seq)}")

        self._log("\n[PHASE 4] Hilbert polynomial and bounds")
        report = build_surface_report(betti, f.field.tag, text, strict=True,
                                      assume_nodal=self.assume_nodal, checks=checks)
        if report.tau is not None:
            self._log(f"✓ σ-dimension {report.sigma_dimension}, τ = {report.tau}")
        else:
            self._log(f"✓ σ-dimension {report.sigma_dimension}, P(u) = "
                      f"{report.hilbert_polynomial.A_half}u - {report.hilbert_polynomial.B}")
        if report.bounds.cor_discrepancy:
            self._log("⚠️  Printed and derived cubic-sum windows disagree")

        if self.compute_mdr:
            self._log("\n[PHASE 5] Jacobian syzygies")
            _, mdr = ar_generators_and_mdr(f, resolution)
            report.mdr = mdr
            self._log(f"✓ mdr(f) = {mdr if mdr is not None else 'none (all relations Koszul)'}")
            if self.assume_nodal and report.bounds.nodal_bound is not None and mdr is not None:
                bound = report.bounds.nodal_bound
                report.bounds.nodal_satisfied = mdr >= bound > f.degree - 1 and report.koszul_generators == 6
                marker = "✓" if report.bounds.nodal_satisfied else "⚠️ "
                self._log(f"{marker} nodal bound {bound}, measured mdr {mdr}")

        report.elapsed_seconds = round(time.time() - start, 3)
        return report

    def analyze_curve(self, f: Polynomial) -> CurveReport:
        if f.variables.n != 3:
            raise ValueError(f"Curve analysis needs 3 variables, got {f.variables}")
        start = time.time()
        resolution, text, _ = self._resolve(f)
        self._log("\n[PHASE 3] Curve invariants")
        betti = extract_betti(resolution, f.degree)
        try:
            report = build_curve_report(betti, f.field.tag, text)
        except NonReducedInputError as e:
            e.resolution_text = text
            raise
        self._log(f"✓ τ(C) = {report.tau}, t(C) = {report.type_c} ({report.classification})")
        report.elapsed_seconds = round(time.time() - start, 3)
        return report


def analyze_surface(f: Polynomial, options: AnalysisOptions = None) -> SurfaceReport:
    options = options or AnalysisOptions()
    analyzer = SurfaceAnalyzer(verbose=False, verify=options.verify, assume_nodal=options.assume_nodal,
                               compute_mdr=options.compute_mdr)
    return analyzer.analyze(f)


def analyze_curve(f: Polynomial) -> CurveReport:
    return SurfaceAnalyzer(verbose=False).analyze_curve(f)


if __name__ == "__main__":
    import sys

    from poly_parser import parse_polynomial

    text = sys.argv[1] if len(sys.argv) > 1 else "xyz + xyt + xzt + yzt"
    report = SurfaceAnalyzer().analyze(parse_polynomial(text))
    print(f"\nτ = {report.tau}, t(X) = {report.type_record.t}")
