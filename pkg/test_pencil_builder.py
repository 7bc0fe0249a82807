import random

import pytest

from pencil_builder import (PencilSpec, SyzygyQuadruple, analyze_pencil, build_pencil_surface,
                            pencil_power_sum, pencil_syzygies, pencil_two_form, plane_containment_check,
                            plane_from_dependency, predicted_type, syzygy_rank, verify_syzygy)
from poly_core import CoefficientField, VariableSet, differential, wedge
from poly_parser import parse_polynomial

S = VariableSet.surface()
QQ_FIELD = CoefficientField.rationals()
G = "x^3 - yzt"
H = "t^3 - xyz"


def P(text, field=QQ_FIELD):
    return parse_polynomial(text, S, field)


def quadruple(*texts):
    return SyzygyQuadruple([P(t) for t in texts])


def test_two_form_components():
    omega = pencil_two_form(P(G), P(H))
    assert omega.grade == 2
    assert omega.coefficient(["x", "y"]) == P("-z(3x^3 + yzt)")
    assert omega.coefficient(["x", "z"]) == P("-y(3x^3 + yzt)")
    assert pencil_two_form(P(G), P(G)).is_zero


def test_form_identity_for_pencil_polynomials():
    omega = pencil_two_form(P(G), P(H))
    for m in (2, 3):
        f = pencil_power_sum(P(G), P(H), m)
        assert wedge(differential(f), omega).is_zero


def test_pencil_syzygies_reproduce_worked_example():
    rho_x, rho_y, rho_z, rho_t = pencil_syzygies(P(G), P(H))
    assert rho_x == quadruple("0", "y(3t^3 + xyz)", "-z(3t^3 + xyz)", "0")
    assert rho_y == quadruple("-y(3t^3 + xyz)", "0", "y^2z^2 - 9x^2t^2", "-y(3x^3 + yzt)")
    assert rho_z == quadruple("z(3t^3 + xyz)", "9x^2t^2 - y^2z^2", "0", "z(3x^3 + yzt)")
    content, primitive = rho_t.content()
    assert content == P("x^3 + 1/3yzt")
    assert primitive in (quadruple("0", "y", "-z", "0"), quadruple("0", "-y", "z", "0"))


def test_degree_law_and_contents():
    syzygies = pencil_syzygies(P(G), P(H))
    assert all(rho.degree == 4 for rho in syzygies)
    content, primitive = syzygies[0].content()
    assert content == P("xyz + 3t^3")
    assert primitive == quadruple("0", "y", "-z", "0")
    assert syzygies[1].content()[0] == 1
    assert syzygies[2].content()[0] == 1


def test_relation_among_lowest_syzygies():
    rho_1 = quadruple("0", "y", "-z", "0")
    _, rho_y, rho_z, _ = pencil_syzygies(P(G), P(H))
    combined = rho_1.scale(P("y^2z^2 - 9x^2t^2")) + rho_y.scale(P("z")) + rho_z.scale(P("y"))
    assert combined.is_zero


def test_verify_syzygy():
    f = pencil_power_sum(P(G), P(H), 2)
    assert verify_syzygy(f, quadruple("0", "y", "-z", "0"))
    assert verify_syzygy(f, SyzygyQuadruple([f.partial_derivative("y"), -f.partial_derivative("x"), P("0"), P("0")]))
    assert not verify_syzygy(P("x^3 + y^3 + z^3 + t^3"), quadruple("1", "0", "0", "0"))


def test_random_pencils_give_valid_syzygies():
    rng = random.Random(61)
    quadrics = ["x^2", "y^2", "z^2", "t^2", "xy", "zt", "xz", "yt"]
    for _ in range(4):
        g = P(" + ".join(f"{rng.randint(1, 4)}*{m}" for m in rng.sample(quadrics, 3)))
        h = P(" + ".join(f"{rng.randint(1, 4)}*{m}" for m in rng.sample(quadrics, 3)))
        spec = PencilSpec(g, h, [(1, 0), (0, 1), (1, 1)])
        f = build_pencil_surface(spec)
        assert f.degree == spec.degree == 6
        for rho in pencil_syzygies(g, h):
            assert rho.is_zero or rho.degree == 2
            assert verify_syzygy(f, rho)


def test_pencil_spec_validation():
    with pytest.raises(ValueError):
        PencilSpec(P("x^2"), P("y^2"), [(1, 0), (2, 0)])
    with pytest.raises(ValueError):
        PencilSpec(P("x^2"), P("y^3"), [(1, 0), (0, 1)])
    with pytest.raises(ValueError):
        PencilSpec(P("x"), P("y"), [(1, 0), (0, 1)])
    with pytest.raises(ValueError):
        PencilSpec(P("x^2"), P("y^2"), [(1, 0)])


def test_build_pencil_surface_product():
    spec = PencilSpec(P("xz"), P("yz"), [(1, 0), (0, 1)])
    assert build_pencil_surface(spec) == P("xyz^2")
    assert spec.to_dict()["degree"] == 4


def test_rank_four_for_non_planar_base():
    syzygies = pencil_syzygies(P(G), P(H))
    assert syzygy_rank(syzygies) == 4
    assert plane_from_dependency(syzygies) is None
    assert not plane_containment_check(P(G), P(H), P("t"))


def test_rank_three_recovers_plane():
    g, h = P("x^2"), P("y^2 + zt")
    syzygies = pencil_syzygies(g, h)
    assert syzygies[0].is_zero
    assert syzygy_rank(syzygies) == 3
    ell = plane_from_dependency(syzygies)
    assert ell == P("x")
    assert plane_containment_check(g, h, ell)


def test_zero_syzygies_have_rank_zero():
    zero = quadruple("0", "0", "0", "0")
    assert syzygy_rank([zero] * 4) == 0


def test_plane_containment_needs_linear_form():
    with pytest.raises(ValueError):
        plane_containment_check(P(G), P(H), P("x^2"))


def test_predicted_type_family():
    rho_1 = quadruple("0", "y", "-z", "0")
    _, rho_y, rho_z, _ = pencil_syzygies(P(G), P(H))
    for m in (2, 3, 4):
        assert predicted_type(rho_1, rho_y, rho_z, 3 * m) == 10 - 3 * m


def test_analyze_pencil_report():
    report = analyze_pencil(P(G), P(H), 4)
    assert report.all_verified
    assert report.rank == 4
    assert report.predicted_t == -2
    assert report.m_verified
    data = report.to_dict()
    assert data["degree"] == 12
    assert data["syzygies"][0]["label"] == "rho^x"


def test_analyze_pencil_modular_field():
    field = CoefficientField.prime_field()
    report = analyze_pencil(P(G, field), P(H, field), 2)
    assert report.rank == 4
    assert report.all_verified


@pytest.mark.slow
@pytest.mark.parametrize("m", [2, 3, 4])
def test_measured_type_matches_prediction(m):
    from surface_analyzer import AnalysisOptions, analyze_surface

    report = analyze_pencil(P(G), P(H), m)
    surface = analyze_surface(report.f, AnalysisOptions(compute_mdr=False, verify=False))
    assert surface.type_record.t == report.predicted_t == 10 - 3 * m
