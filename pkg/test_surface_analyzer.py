import pytest

from groebner_engine import InhomogeneousInputError, SyzygyError
from hilbert_engine import SIGMA_ONE, SIGMA_TWO_OR_MORE, SIGMA_ZERO, NonReducedInputError
from pencil_builder import SyzygyQuadruple
from poly_core import CoefficientField, VariableSet
from poly_parser import parse_polynomial
from resolution_engine import BettiData
from surface_analyzer import (AnalysisOptions, SurfaceAnalyzer, analyze_curve, analyze_surface,
                              build_surface_report, jacobian_generators, nodal_mdr_bound, suspension,
                              syzygy_determinant_test, type_and_gaps)

S = VariableSet.surface()
R = VariableSet.curve()
QQ_FIELD = CoefficientField.rationals()


def P(text, variables=S, field=QQ_FIELD):
    return parse_polynomial(text, variables, field)


def test_jacobian_generators_validation():
    assert jacobian_generators(P("x^3 + y^3 + z^3 + t^3"))[3] == P("3t^2")
    with pytest.raises(ValueError):
        jacobian_generators(P("xy + zt"))
    with pytest.raises(InhomogeneousInputError):
        jacobian_generators(P("x^3 + y^2"))


def test_cayley_report():
    report = analyze_surface(P("xyz + xyt + xzt + yzt"))
    assert report.tau == 4
    assert report.sigma_dimension == SIGMA_ZERO
    assert report.resolution_text == "0 -> S(-6)^2 -> S(-5)^8 -> S(-4)^9 -> S(-2)^4 -> S"
    assert (report.bounds.dupw.lower, report.bounds.dupw.upper) == (0, 8)
    assert report.bounds.dupw.satisfied
    assert report.bounds.suspension_bound == 2
    assert report.mdr == 2
    assert report.koszul_generators == 6
    assert report.type_record.t == 4
    assert report.type_record.alpha == [1] * 6
    assert report.type_record.beta == [1, 1]
    assert report.checks is not None and report.checks.exactness


def test_kummer_report_flags_cubic_window_disagreement():
    report = analyze_surface(P("x^4 + y^4 + z^4 + t^4 - y^2z^2 - z^2x^2 - x^2y^2 - x^2t^2 - y^2t^2 - z^2t^2"),
                             AnalysisOptions(compute_mdr=False))
    assert report.tau == 16
    assert report.betti.d == [3] * 12
    assert report.identities.cube_value == -69
    assert (report.bounds.cor_derived.lower, report.bounds.cor_derived.upper) == (-135, 27)
    assert report.bounds.cor_derived.satisfied
    assert not report.bounds.cor_printed.satisfied
    assert report.bounds.cor_discrepancy
    assert report.bounds.suspension_bound == 9


def test_smooth_surface():
    report = analyze_surface(P("x^3 + y^3 + z^3 + t^3"))
    assert report.identities.smooth_pattern
    assert report.tau == 0
    assert report.mdr is None


def test_modular_report_is_flagged():
    f = P("xyz + xyt + xzt + yzt", field=CoefficientField.prime_field())
    with pytest.warns(UserWarning):
        report = analyze_surface(f, AnalysisOptions(compute_mdr=False))
    assert report.modular
    assert report.field == "fp:32003"
    assert report.tau == 4


def test_non_reduced_input_carries_partial_data():
    with pytest.raises(NonReducedInputError) as info:
        analyze_surface(P("x^3"))
    assert info.value.betti is not None
    assert info.value.resolution_text.endswith("-> S")


def test_curve_singularity_surface():
    report = analyze_surface(P("x^5z + y^6 + x^4yt + xy^5"), AnalysisOptions(compute_mdr=False))
    assert report.sigma_dimension == SIGMA_ONE
    assert report.hilbert_polynomial.A_half == 16
    assert report.hilbert_polynomial.B == 27
    assert report.tau is None


def test_suspension_of_cusp_attains_lower_bound():
    f = suspension(P("y^2z - x^3", R), 3)
    assert f == P("y^2z - x^3 + t^3")
    report = analyze_surface(f, AnalysisOptions(compute_mdr=False))
    assert report.tau == 4
    assert report.bounds.dupw.lower == 4


def test_suspension_validation():
    with pytest.raises(ValueError):
        suspension(P("x^3"), 3)
    with pytest.raises(ValueError):
        suspension(P("y^2z - x^3", R), 4)


def test_nodal_mdr_bound():
    assert nodal_mdr_bound(5) == 5
    assert nodal_mdr_bound(8) == 9
    with pytest.raises(ValueError):
        nodal_mdr_bound(4)


def test_nodal_bound_filled_only_when_asserted():
    betti = BettiData(8, [7] * 6 + [9] * 9, [10] * 4 + [11] * 13, [13] * 4 + [15])
    assert build_surface_report(betti).bounds.nodal_bound is None
    report = build_surface_report(betti, assume_nodal=True, mdr=9)
    assert report.bounds.nodal_bound == 9
    assert report.bounds.nodal_satisfied
    assert report.tau == 144
    assert report.bounds.suspension_bound == 147


def test_gap_vectors_of_worked_examples():
    ex4 = type_and_gaps(BettiData(9, [1, 4, 4, 7, 7, 8, 8, 8], [5, 8, 9, 9, 9, 10, 10], [10, 11]))
    assert (ex4.t, ex4.alpha, ex4.beta) == (1, [-2, 1, 1, 1, 1], [0, 1])
    ex4_1 = type_and_gaps(BettiData(12, [1, 4, 4] + [11] * 5, [5, 12, 12] + [13] * 4, [14, 14]))
    assert (ex4_1.t, ex4_1.alpha, ex4_1.beta) == (-2, [-6, 1, 1, 2, 2], [1, 1])
    ex5 = type_and_gaps(BettiData(16, [5, 5, 6, 6, 6, 12, 12, 12, 12, 13, 13, 15],
                                  [7, 7, 8, 13, 13, 13, 13, 14, 14, 14, 16, 16], [14, 15, 17]))
    assert ex5.t == 1
    assert ex5.alpha[8] == -1
    assert ex5.beta[:2] == [0, -1]
    assert ex5.gap_sum_matches


def test_report_from_inconsistent_data_is_not_fatal():
    with pytest.warns(UserWarning):
        report = build_surface_report(BettiData(3, [0, 0, 0]), strict=False)
    assert report.sigma_dimension == SIGMA_TWO_OR_MORE
    assert not report.identities.sum_check
    assert report.tau is None
    with pytest.raises(NonReducedInputError):
        build_surface_report(BettiData(3, [0, 0, 0]), strict=True)


def test_determinant_of_independent_syzygies():
    f = P("x^3 + y^3 + z^3 + t^3")
    zero = P("0")
    theta_xy = [P("3y^2"), P("-3x^2"), zero, zero]
    theta_zt = [zero, zero, P("3t^2"), P("-3z^2")]
    theta_xz = [P("3z^2"), zero, P("-3x^2"), zero]
    result = syzygy_determinant_test(f, theta_xy, theta_zt, theta_xz)
    assert result.independent
    assert result.divisible_by_f
    assert result.degree_sum == 7
    assert result.t_lower_bound_applies


def test_determinant_of_dependent_pencil_syzygies():
    f = P("(x^3 - yzt)^2 + (t^3 - xyz)^2")
    zero = P("0")
    rho_1 = SyzygyQuadruple([zero, P("y"), P("-z"), zero])
    rho_y = SyzygyQuadruple([P("-y(3t^3 + xyz)"), zero, P("y^2z^2 - 9x^2t^2"), P("-y(3x^3 + yzt)")])
    rho_z = SyzygyQuadruple([P("z(3t^3 + xyz)"), P("9x^2t^2 - y^2z^2"), zero, P("z(3x^3 + yzt)")])
    result = syzygy_determinant_test(f, rho_1, rho_y, rho_z)
    assert not result.independent
    assert result.determinant == "0"
    assert not result.t_lower_bound_applies


def test_determinant_rejects_non_syzygies():
    f = P("x^3 + y^3 + z^3 + t^3")
    zero = P("0")
    with pytest.raises(SyzygyError):
        syzygy_determinant_test(f, [P("1"), zero, zero, zero], [zero] * 4, [zero] * 4)


def test_cusp_curve():
    report = analyze_curve(P("y^2z - x^3", R))
    assert report.tau == 2
    assert report.epsilon == [1]
    assert report.type_c == 1
    assert report.classification == "plus-one-generated"
    assert report.type_matches_epsilon
    assert report.suspension_lower_bound_attained
    assert not report.free_check
    assert report.resolution_text == "0 -> R(-5) -> R(-3) (+) R(-4)^2 -> R(-2)^3 -> R"


def test_free_curve():
    report = analyze_curve(P("xyz", R))
    assert report.classification == "free"
    assert report.exponents == [1, 1]
    assert report.free_check
    assert report.tau == 3


def test_tjurina_maximal_curve_bound():
    report = analyze_curve(P("x^3 + y^3 + z^3", R))
    assert report.tau == 0
    assert report.tjurina_maximal_bound == 4 - 2 * 0 - 3
    assert not report.tjurina_maximal


def test_verbose_analyzer_prints_phases(capsys):
    SurfaceAnalyzer(verbose=True, compute_mdr=False).analyze(P("x^3 + y^3 + z^3 + t^3"))
    out = capsys.readouterr().out
    assert "[PHASE 1]" in out and "[PHASE 4]" in out
    assert "✓" in out
