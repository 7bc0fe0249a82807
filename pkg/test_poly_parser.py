import json
from fractions import Fraction

import pytest

from poly_core import CoefficientField, Polynomial, VariableSet
from poly_parser import (PolynomialParseError, betti_from_resolution_text, format_polynomial,
                         format_resolution, parse_polynomial, parse_resolution_text, rational_to_json,
                         serialize_report)
from resolution_engine import BettiData, MalformedResolutionError

S = VariableSet.surface()
QQ_FIELD = CoefficientField.rationals()
CAYLEY_TEXT = "0 -> S(-6)^2 -> S(-5)^8 -> S(-4)^9 -> S(-2)^4 -> S"


def var(name):
    return Polynomial.variable(name, S, QQ_FIELD)


def test_juxtaposition_and_powers():
    x, y, z, t = (var(v) for v in "xyzt")
    assert parse_polynomial("xyz", S, QQ_FIELD) == x * y * z
    assert parse_polynomial("x**2 y", S, QQ_FIELD) == x ** 2 * y
    assert parse_polynomial("2(x + y)^2", S, QQ_FIELD) == 2 * (x + y) ** 2
    assert parse_polynomial("-x^2", S, QQ_FIELD) == -(x ** 2)
    assert parse_polynomial("x - -y", S, QQ_FIELD) == x + y
    assert parse_polynomial("xyz + xyt + xzt + yzt", S, QQ_FIELD).degree == 3
    assert parse_polynomial("t^3 - xyz", S, QQ_FIELD) == t ** 3 - x * y * z


def test_comments_are_skipped():
    text = "# a comment\nx^2 + y^2 # trailing\n"
    assert parse_polynomial(text, S, QQ_FIELD) == var("x") ** 2 + var("y") ** 2


def test_rational_literals():
    f = parse_polynomial("1/2x^2 - 3/4y^2", S, QQ_FIELD)
    assert f.field.to_fraction(f.coefficient((2, 0, 0, 0))) == Fraction(1, 2)
    assert f.field.to_fraction(f.coefficient((0, 2, 0, 0))) == Fraction(-3, 4)


@pytest.mark.parametrize("text, offset", [
    ("x + ", 4),
    ("x + w", 4),
    ("2.5x", 0),
    ("x^y", 2),
    ("(x + y", 6),
    ("# ö\nx + w", 9),
])
def test_parse_errors_report_byte_offsets(text, offset):
    with pytest.raises(PolynomialParseError) as info:
        parse_polynomial(text, S, QQ_FIELD)
    assert info.value.offset == offset


def test_zero_denominator():
    with pytest.raises(PolynomialParseError):
        parse_polynomial("1/0 x", S, QQ_FIELD)
    with pytest.raises(PolynomialParseError):
        parse_polynomial("1/7 x", S, CoefficientField.prime_field(7))


def test_format_reparses():
    for text in ["16*(x^8 + y^8) - 9*(x^2 + y^2 + z^2 + t^2)^4", "1/3xy - 5/2zt + t^2", "-xyz"]:
        f = parse_polynomial(text, S, QQ_FIELD)
        assert parse_polynomial(format_polynomial(f), S, QQ_FIELD) == f


def test_format_style():
    assert format_polynomial(parse_polynomial("-2x^2y + t^3", S, QQ_FIELD)) == "-2*x^2*y + t^3"
    assert format_polynomial(parse_polynomial("0", S, QQ_FIELD)) == "0"


def test_format_resolution_from_betti():
    betti = BettiData(3, [2] * 9, [3] * 8, [4] * 2)
    assert format_resolution(betti) == CAYLEY_TEXT


def test_format_curve_resolution():
    betti = BettiData(3, [1, 2, 2], [3], n_vars=3)
    assert format_resolution(betti) == "0 -> R(-5) -> R(-3) (+) R(-4)^2 -> R(-2)^3 -> R"


def test_parse_resolution_variants():
    expected = [[0], [2] * 4, [4] * 9, [5] * 8, [6] * 2]
    assert parse_resolution_text(CAYLEY_TEXT) == expected
    assert parse_resolution_text("0 → S[-6]^{2} → S[-5]^8 → S[-4]^9 → S[-2]^4 → S → 0") == expected
    mixed = parse_resolution_text("0 -> S(-5) ⊕ S(-4)^2 -> S(-3)^4 -> S")
    assert mixed == [[0], [3, 3, 3, 3], [4, 4, 5]]


def test_betti_from_resolution_text():
    assert betti_from_resolution_text(CAYLEY_TEXT, 3) == BettiData(3, [2] * 9, [3] * 8, [4] * 2)
    curve = betti_from_resolution_text("0 -> R(-5) -> R(-4)^2 (+) R(-3) -> R(-2)^3 -> R", 3, n_vars=3)
    assert curve.d_seq == (1, 2, 2) and curve.c_seq == (3,)


@pytest.mark.parametrize("text", [
    "",
    "0 -> S(-2)^4",
    "0 -> S(2) -> S",
    "0 -> T(-2)^4 -> S junk",
    "0 -> S(-2)^5 -> S",
])
def test_malformed_resolution_text(text):
    with pytest.raises(MalformedResolutionError):
        betti_from_resolution_text(text, 3)


def test_rational_to_json():
    assert rational_to_json(Fraction(27)) == 27
    assert rational_to_json(Fraction(-3, 2)) == {"num": -3, "den": 2}


def test_serialize_uses_aliases():
    from surface_analyzer import build_surface_report

    report = build_surface_report(BettiData(3, [2] * 9, [3] * 8, [4] * 2))
    data = json.loads(serialize_report(report))
    assert data["schema"] == "betti-forge/1"
    assert data["tau"] == 4
    assert "type" in data and data["type"]["t"] == 4
