import random

import pytest

from groebner_engine import (FreeModuleElement, InhomogeneousInputError, TermOrder, groebner_basis,
                             is_groebner_basis, monomials_of_degree, normal_form, radical_membership,
                             standard_monomial_count, syzygy_generators)
from poly_core import CoefficientField, VariableSet
from poly_parser import parse_polynomial

S = VariableSet.surface()


def P(text, field=None):
    return parse_polynomial(text, S, field or CoefficientField.rationals())


def test_degrevlex_ideal_basis():
    gb = groebner_basis([P("x^2 - y^2"), P("xy")])
    leads = {monomial for _, monomial in gb.leading_monomials()}
    assert leads == {(2, 0, 0, 0), (1, 1, 0, 0), (0, 3, 0, 0)}
    assert is_groebner_basis(gb)
    assert gb.contains(FreeModuleElement.from_polynomial(P("y^3")))
    assert not gb.contains(FreeModuleElement.from_polynomial(P("y^2")))


def test_normal_form_is_canonical():
    gb = groebner_basis([P("x^2 - y^2"), P("xy")])
    assert normal_form(P("x^2 + yz"), gb).component(0) == P("y^2 + yz")
    assert normal_form(P("x^2 - y^2 + xy"), gb).is_zero


def test_inhomogeneous_input_rejected():
    with pytest.raises(InhomogeneousInputError):
        groebner_basis([P("x^2 - y")])


def test_unit_ideal_detection():
    gb = groebner_basis([P("1"), P("x")])
    assert gb.is_unit


def test_random_ideal_bases_satisfy_buchberger_criterion():
    rng = random.Random(7)
    quadrics = monomials_of_degree(4, 2)
    field = CoefficientField.prime_field(101)
    for _ in range(3):
        gens = []
        for _ in range(3):
            terms = {m: rng.randint(-3, 3) for m in rng.sample(quadrics, 4)}
            gens.append(P(" + ".join(f"({c})*{_monomial_text(m)}" for m, c in terms.items()), field))
        gens = [g for g in gens if not g.is_zero]
        gb = groebner_basis(gens)
        assert is_groebner_basis(gb)
        for g in gens:
            assert gb.contains(FreeModuleElement.from_polynomial(g))


def _monomial_text(monomial):
    return "*".join(f"{name}^{e}" for name, e in zip("xyzt", monomial) if e) or "1"


def test_module_basis_with_schreyer_free_order():
    a = FreeModuleElement.from_components([P("y"), P("-x")])
    b = FreeModuleElement.from_components([P("z"), P("-y")])
    gb = groebner_basis([a, b], TermOrder.position_over_term())
    assert is_groebner_basis(gb)
    assert gb.contains(a.scale(P("z")) - b.scale(P("y")))


def test_koszul_syzygies_of_variables():
    gens = [P("x"), P("y"), P("z")]
    relations = syzygy_generators(gens)
    assert len(relations) >= 3
    for relation in relations:
        assert relation.dot(gens).is_zero
        assert relation.degree == 2


def test_syzygies_of_cayley_partials():
    f = P("xyz + xyt + xzt + yzt")
    partials = [f.partial_derivative(v) for v in "xyzt"]
    relations = syzygy_generators(partials)
    assert relations
    assert all(r.dot(partials).is_zero for r in relations)
    assert min(r.degree for r in relations) == 4  # quadratic relations twisted by deg f_x = 2


def test_syzygies_with_dependent_generators():
    gens = [P("x^2"), P("2x^2"), P("y^2")]
    relations = syzygy_generators(gens)
    assert any(r.degree == 2 for r in relations)
    assert all(r.dot(gens).is_zero for r in relations)


@pytest.mark.parametrize("ell, gens, expected", [
    ("x", ["x^2", "xy"], True),
    ("x", ["x^2", "y^2 + zt"], True),
    ("z", ["x^2", "y^2"], False),
    ("t", ["x^3 - yzt", "t^3 - xyz"], False),
    ("x + y", ["(x + y)^3", "z^2"], True),
])
def test_radical_membership(ell, gens, expected):
    assert radical_membership(P(ell), [P(g) for g in gens]) is expected


def test_standard_monomial_count():
    gb = groebner_basis([P("x^2"), P("y^2"), P("z^2"), P("t^2")])
    assert standard_monomial_count(gb, 2) == 6
    assert standard_monomial_count(gb, 4) == 1
    assert standard_monomial_count(gb, 5) == 0
    assert len(monomials_of_degree(4, 2)) == 10


def test_normal_form_is_idempotent():
    f = P("xyz + xyt + xzt + yzt")
    gb = groebner_basis([f.partial_derivative(v) for v in "xyzt"])
    rng = random.Random(11)
    cubics = monomials_of_degree(4, 3)
    for _ in range(20):
        v = P(" + ".join(f"({rng.randint(-4, 4)})*{_monomial_text(m)}" for m in rng.sample(cubics, 5)))
        once = normal_form(v, gb)
        assert normal_form(once, gb) == once
    assert normal_form(P("x^3 + y^3 + z^3 + t^3"),
                       groebner_basis([P("3x^2"), P("3y^2"), P("3z^2"), P("3t^2")])).is_zero


def test_groebner_basis_is_deterministic():
    gens = [P("xy - z^2"), P("x^2 + yt"), P("zt - y^2")]
    first = groebner_basis(gens).polynomials()
    for _ in range(3):
        assert groebner_basis(list(gens)).polynomials() == first


def test_pencil_partials_have_the_linear_syzygy():
    f = P("(x^3 - yzt)^2 + (t^3 - xyz)^2")
    partials = [f.partial_derivative(v) for v in "xyzt"]
    relations = syzygy_generators(partials)
    assert all(r.dot(partials).is_zero for r in relations)

    def is_rho_1(r):
        x_part, y_part, z_part, t_part = r.components()
        return (x_part.is_zero and t_part.is_zero and not y_part.is_zero
                and y_part.monic() == P("y") and z_part * P("y") == -(y_part * P("z")))

    assert any(is_rho_1(r) for r in relations)
