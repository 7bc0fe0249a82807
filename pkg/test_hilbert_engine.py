from fractions import Fraction

import pytest

from hilbert_engine import (SIGMA_EMPTY, SIGMA_ONE, SIGMA_ZERO, NonReducedInputError,
                            classify_and_polynomial, count_identity_holds, graded_dim,
                            hilbert_function_from_resolution, is_smooth_pattern, lem2_cross_check,
                            lem2_oracle, power_sum, stabilization_index, sum_identity_holds)
from resolution_engine import BettiData

CAYLEY = BettiData(3, [2] * 9, [3] * 8, [4] * 2)
KUMMER = BettiData(4, [3] * 12, [4] * 12, [5] * 3)
CHMUTOV = BettiData(8, [7] * 6 + [9] * 9, [10] * 4 + [11] * 13, [13] * 4 + [15])
EX1 = BettiData(3, [1, 1, 2, 2, 2], [3, 3])
EX2 = BettiData(3, [1] + [2] * 6, [3] * 5, [4])
EX3 = BettiData(6, [1, 2, 3, 3], [4])
EX4 = BettiData(9, [1, 4, 4, 7, 7, 8, 8, 8], [5, 8, 9, 9, 9, 10, 10], [10, 11])
EX4_1 = BettiData(12, [1, 4, 4] + [11] * 5, [5, 12, 12] + [13] * 4, [14, 14])
EX5 = BettiData(16, [5, 5, 6, 6, 6, 12, 12, 12, 12, 13, 13, 15],
                [7, 7, 8, 13, 13, 13, 13, 14, 14, 14, 16, 16], [14, 15, 17])


def test_graded_dim():
    assert graded_dim(0, 0) == 1
    assert graded_dim(0, 2) == 10
    assert graded_dim(-3, 2) == 0
    assert graded_dim(0, 2, n_vars=3) == 6


@pytest.mark.parametrize("betti", [CAYLEY, KUMMER, CHMUTOV, EX1, EX2, EX3, EX4, EX4_1, EX5])
def test_identities_hold_on_worked_examples(betti):
    assert count_identity_holds(betti)
    assert sum_identity_holds(betti)


@pytest.mark.parametrize("betti, tau", [
    (CAYLEY, 4), (KUMMER, 16), (CHMUTOV, 144), (EX1, 6), (EX2, 5),
])
def test_tjurina_numbers(betti, tau):
    assert (betti.degree - 1) ** 2 + power_sum(betti, 2) == 0
    polynomial = classify_and_polynomial(betti)
    assert polynomial.sigma_dimension == SIGMA_ZERO
    assert polynomial.tau == tau
    assert polynomial.value(100) == tau


def test_kummer_cubic_sum():
    assert power_sum(KUMMER, 3) == -69


@pytest.mark.parametrize("betti, a_half, b", [
    (EX3, 16, 27), (EX4, 38, 119), (EX4_1, 81, 491), (EX5, 147, 1382),
])
def test_hilbert_polynomials_of_curve_singularities(betti, a_half, b):
    polynomial = classify_and_polynomial(betti)
    assert polynomial.sigma_dimension == SIGMA_ONE
    assert polynomial.a_half == a_half
    assert polynomial.B == b
    assert polynomial.A_is_even and polynomial.B_is_integral
    assert str(polynomial) == f"{a_half}u - {b}"


def test_hilbert_function_agrees_with_polynomial_from_k0():
    polynomial = classify_and_polynomial(EX4)
    for k in range(polynomial.k0, polynomial.k0 + 10):
        assert hilbert_function_from_resolution(EX4, k) == polynomial.value(k)
    if polynomial.k0 > 0:
        k = polynomial.k0 - 1
        assert hilbert_function_from_resolution(EX4, k) != polynomial.value(k)


def test_smooth_patterns():
    for d in (3, 4, 5):
        smooth = BettiData(d, [d - 1] * 6, [2 * d - 2] * 4, [3 * d - 3])
        assert is_smooth_pattern(smooth)
        polynomial = classify_and_polynomial(smooth)
        assert polynomial.sigma_dimension == SIGMA_EMPTY
        assert polynomial.tau == 0
    assert not is_smooth_pattern(CAYLEY)


def test_curve_tjurina_numbers():
    cusp = classify_and_polynomial(BettiData(3, [1, 2, 2], [3], n_vars=3))
    assert cusp.tau == 2
    triangle = classify_and_polynomial(BettiData(3, [1, 1], n_vars=3))
    assert triangle.tau == 3
    smooth = classify_and_polynomial(BettiData(3, [2, 2, 2], [4], n_vars=3))
    assert smooth.sigma_dimension == SIGMA_EMPTY


def test_failed_identities_mean_non_reduced():
    with pytest.raises(NonReducedInputError) as info:
        classify_and_polynomial(BettiData(3, [0, 0, 0]))
    assert info.value.betti.d_seq == (0, 0, 0)
    with pytest.raises(NonReducedInputError):
        classify_and_polynomial(BettiData(4, [3] * 12, [4] * 12, [5] * 2))


@pytest.mark.parametrize("betti", [CAYLEY, KUMMER, EX3, EX4, EX4_1, EX5])
def test_coefficient_oracle_matches_classification(betti):
    polynomial = classify_and_polynomial(betti)
    check = lem2_cross_check(betti, polynomial)
    assert check["leading_vanish"]
    assert check["linear_matches"]
    assert check["constant_matches"]


def test_coefficient_oracle_against_hilbert_function():
    cubic, quadratic, linear, constant = lem2_oracle(EX4, s=30)
    assert (cubic, quadratic) == (0, 0)
    assert linear == 3 * 76
    assert constant == 3 * 76 * 8 - 6 * 119


def test_oracle_rejects_curves():
    with pytest.raises(ValueError):
        lem2_oracle(BettiData(3, [1, 2, 2], [3], n_vars=3))


def test_stabilization_index_of_cayley():
    polynomial = classify_and_polynomial(CAYLEY)
    assert stabilization_index(CAYLEY, polynomial) == polynomial.k0
    assert hilbert_function_from_resolution(CAYLEY, polynomial.k0) == 4
    assert polynomial.B is None
    assert Fraction(polynomial.value(3)) == 4
