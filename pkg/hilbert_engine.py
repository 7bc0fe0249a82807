"""
Hilbert functions and polynomials of the Jacobian algebra read off Betti data
Dimension counting, σ-dimension classification, Tjurina numbers and the
coefficient oracle used to cross-check them.
"""
import warnings
from fractions import Fraction
from math import comb
from typing import Optional, Tuple

import config

SIGMA_EMPTY = "empty"
SIGMA_ZERO = "zero"
SIGMA_ONE = "one"
SIGMA_TWO_OR_MORE = "two_or_more"


class NonReducedInputError(RuntimeError):
    """
    The count and alternating-sum identities fail: dim Σ >= 2, so the input is not reduced

    Carries whatever was computed before the failure.
    """

    def __init__(self, message: str, betti=None, resolution_text: str = None):
        super().__init__(message)
        self.betti = betti
        self.resolution_text = resolution_text


def graded_dim(a: int, k: int, n_vars: int = 4) -> int:
    """dim S_{k+a} in n_vars variables (0 in negative degree)"""
    if k + a < 0:
        return 0
    return comb(k + a + n_vars - 1, n_vars - 1)


def power_sum(betti, exponent: int) -> int:
    """sum d_i^e - sum c_j^e + sum b_k^e"""
    return (sum(v ** exponent for v in betti.d_seq)
            - sum(v ** exponent for v in betti.c_seq)
            + sum(v ** exponent for v in betti.b_seq))


def count_identity_holds(betti) -> bool:
    """p + r = q + 3 for surfaces, p' = q' + 2 for curves"""
    return betti.p + betti.r == betti.q + betti.n_vars - 1


def sum_identity_holds(betti) -> bool:
    return power_sum(betti, 1) == betti.degree - 1


def hilbert_function_from_resolution(betti, k: int) -> int:
    """
    dim M(f)_k from the minimal resolution

    Args:
        betti: BettiData of M(f)
        k: degree

    Returns:
        dim S_k - n dim S_{k-(d-1)} + sum dim S_{k-(d-1)-d_i} - sum ... (exact)
    """
    n = betti.n_vars
    offset = betti.degree - 1
    total = graded_dim(0, k, n) - n * graded_dim(-offset, k, n)
    total += sum(graded_dim(-offset - v, k, n) for v in betti.d_seq)
    total -= sum(graded_dim(-offset - v, k, n) for v in betti.c_seq)
    total += sum(graded_dim(-offset - v, k, n) for v in betti.b_seq)
    return total


def is_smooth_pattern(betti) -> bool:
    """Koszul Betti numbers of a regular sequence of partials"""
    d = betti.degree
    if betti.n_vars == 3:
        return betti.d_seq == (d - 1,) * 3 and betti.c_seq == (2 * d - 2,)
    return (betti.d_seq == (d - 1,) * 6 and betti.c_seq == (2 * d - 2,) * 4
            and betti.b_seq == (3 * (d - 1),))


class HilbertPolynomial:
    """
    Hilbert polynomial of M(f) with the dimension class of the singular subscheme

    sigma 'empty' or 'zero': constant tau
    sigma 'one': P(u) = (A/2) u - B, B an exact rational
    k0: first degree from which the Hilbert function agrees with P
    """

    def __init__(self, sigma_dimension: str, tau: int = None, A: int = None, B: Fraction = None,
                 k0: int = None):
        self.sigma_dimension = sigma_dimension
        self.tau = tau
        self.A = A
        self.B = Fraction(B) if B is not None else None
        self.k0 = k0

    @property
    def a_half(self) -> Optional[Fraction]:
        return None if self.A is None else Fraction(self.A, 2)

    @property
    def A_is_even(self) -> bool:
        return self.A is None or self.A % 2 == 0

    @property
    def B_is_integral(self) -> bool:
        return self.B is None or self.B.denominator == 1

    def value(self, u: int) -> Fraction:
        if self.sigma_dimension == SIGMA_ONE:
            return self.a_half * u - self.B
        return Fraction(self.tau)

    def __str__(self):
        if self.sigma_dimension == SIGMA_ONE:
            return f"{self.a_half}u - {self.B}" if self.B >= 0 else f"{self.a_half}u + {-self.B}"
        return str(self.tau)

    def to_dict(self) -> dict:
        return {
            "sigma_dimension": self.sigma_dimension,
            "tau": self.tau,
            "A": self.A,
            "B": self.B,
            "k0": self.k0,
        }

    def __repr__(self):
        return f"HilbertPolynomial({self.sigma_dimension}, P(u) = {self})"


def stabilization_index(betti, polynomial: HilbertPolynomial, k_max: int = None) -> int:
    """Smallest k0 with H(k) = P(k) for every sampled k in [k0, k_max]"""
    if k_max is None:
        shifts = [s for lst in betti.shift_lists() for s in lst]
        k_max = max(shifts) + config.HILBERT_MARGIN
    k0 = k_max
    while k0 > 0 and hilbert_function_from_resolution(betti, k0 - 1) == polynomial.value(k0 - 1):
        k0 -= 1
    if hilbert_function_from_resolution(betti, k_max) != polynomial.value(k_max):
        raise RuntimeError(f"Hilbert function has not stabilized by degree {k_max}")
    return k0


def classify_and_polynomial(betti) -> HilbertPolynomial:
    """
    Classify dim Σ and compute the Hilbert polynomial from Betti data alone

    Raises:
        NonReducedInputError: the count or sum identity fails (dim Σ >= 2)
    """
    d = betti.degree
    if not count_identity_holds(betti) or not sum_identity_holds(betti):
        raise NonReducedInputError(
            f"input not reduced (dim Σ >= 2): p={betti.p}, q={betti.q}, r={betti.r}, "
            f"alternating degree sum {power_sum(betti, 1)} != d - 1 = {d - 1}", betti)

    s2 = power_sum(betti, 2)
    s3 = power_sum(betti, 3)
    quadratic = (d - 1) ** 2 + s2

    if betti.n_vars == 3:
        # constant term of the curve Hilbert polynomial
        if quadratic % 2:
            warnings.warn(f"Odd curve Tjurina numerator {quadratic}; Betti data is inconsistent")
        tau = quadratic // 2
        sigma = SIGMA_EMPTY if tau == 0 else SIGMA_ZERO
        polynomial = HilbertPolynomial(sigma, tau=tau)
        polynomial.k0 = stabilization_index(betti, polynomial)
        return polynomial

    if quadratic == 0:
        numerator = (d - 1) ** 3 - s3
        if numerator % 6:
            warnings.warn(f"6τ = {numerator} is not divisible by 6; Betti data is inconsistent")
        tau = numerator // 6
        sigma = SIGMA_EMPTY if tau == 0 else SIGMA_ZERO
        polynomial = HilbertPolynomial(sigma, tau=tau)
    else:
        B = Fraction(d * (d - 3) ** 2 - 4, 3) + Fraction(d - 3, 2) * s2 + Fraction(s3, 6)
        polynomial = HilbertPolynomial(SIGMA_ONE, A=quadratic, B=B)
        if quadratic < 0:
            warnings.warn(f"Negative leading coefficient A = {quadratic}")
        if not polynomial.A_is_even:
            warnings.warn(f"A = {quadratic} is odd; the Hilbert polynomial has a half-integer slope")
        if not polynomial.B_is_integral:
            warnings.warn(f"Hilbert polynomial constant B = {B} is not an integer")
    polynomial.k0 = stabilization_index(betti, polynomial)
    return polynomial


def lem2_oracle(betti, s: int = None) -> Tuple[int, int, int, int]:
    """
    Coefficients (s^3, s^2, s, 1) of 6 dim M(f)_{s+d-1} for large s

    Evaluates the expanded coefficient formulas term by term, independently of
    classify_and_polynomial. Surfaces only.
    """
    if betti.n_vars != 4:
        raise ValueError("The coefficient oracle is stated for surfaces in four variables")
    d = betti.degree
    ds, cs, bs = betti.d_seq, betti.c_seq, betti.b_seq
    cubic = betti.p - betti.q + betti.r - 3
    quadratic = 3 * (d - 1 - sum(ds[:3]) - sum(v - 2 for v in ds[3:])
                     + sum(v - 2 for v in cs) - sum(v - 2 for v in bs))
    linear = (3 * d ** 2 + 6 * d + 2 - 44
              + sum(3 * v ** 2 - 12 * v + 11 for v in ds)
              - sum(3 * v ** 2 - 12 * v + 11 for v in cs)
              + sum(3 * v ** 2 - 12 * v + 11 for v in bs))
    constant = (d ** 3 + 3 * d ** 2 + 2 * d - 24
                - sum(v ** 3 - 6 * v ** 2 + 11 * v - 6 for v in ds)
                + sum(v ** 3 - 6 * v ** 2 + 11 * v - 6 for v in cs)
                - sum(v ** 3 - 6 * v ** 2 + 11 * v - 6 for v in bs))
    if s is not None:
        expected = 6 * hilbert_function_from_resolution(betti, s + d - 1)
        if s > max(ds + cs + bs, default=0) and cubic * s ** 3 + quadratic * s ** 2 + linear * s + constant != expected:
            raise RuntimeError(f"Coefficient oracle disagrees with the Hilbert function at s = {s}")
    return cubic, quadratic, linear, constant


def lem2_cross_check(betti, polynomial: HilbertPolynomial) -> dict:
    """Compare the oracle coefficients with the classified Hilbert polynomial"""
    cubic, quadratic, linear, constant = lem2_oracle(betti)
    d = betti.degree
    if polynomial.sigma_dimension == SIGMA_ONE:
        linear_ok = linear == 3 * polynomial.A
        constant_ok = constant == 3 * polynomial.A * (d - 1) - 6 * polynomial.B
    else:
        linear_ok = linear == 0
        constant_ok = constant == 6 * polynomial.tau
    return {
        "cubic": cubic,
        "quadratic": quadratic,
        "linear": linear,
        "constant": constant,
        "leading_vanish": cubic == 0 and quadratic == 0,
        "linear_matches": linear_ok,
        "constant_matches": constant_ok,
    }
