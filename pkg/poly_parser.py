"""
Polynomial expression parser, plus text and JSON formatting for resolutions and reports
"""
import json
import re
from fractions import Fraction
from typing import List, Sequence, Tuple

from poly_core import CoefficientField, Polynomial, VariableSet


class PolynomialParseError(ValueError):
    """Malformed expression; offset is the UTF-8 byte offset of the offending character"""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.reason = message
        self.offset = offset


_OPERATORS = "+-*/^()"


class _ExpressionParser:
    """
    Recursive descent over the grammar

        expr   := term (('+' | '-') term)*
        term   := factor ('*'? factor)*
        factor := ('+' | '-') factor | base ('^' uint)?
        base   := int ('/' int)? | var | '(' expr ')'

    Juxtaposition multiplies ("xyz" = x*y*z); variable names are matched greedily.
    Unary minus binds looser than '^'.
    """

    def __init__(self, text: str, variables: VariableSet, field: CoefficientField):
        self.text = text
        self.variables = variables
        self.field = field
        self.names = sorted(variables.names, key=len, reverse=True)
        self.tokens = self._tokenize()
        self.position = 0

    def _byte_offset(self, index: int) -> int:
        return len(self.text[:index].encode("utf-8"))

    def _error(self, message: str, index: int):
        raise PolynomialParseError(message, self._byte_offset(index))

    def _tokenize(self) -> List[Tuple[str, object, int]]:
        tokens = []
        text = self.text
        i = 0
        while i < len(text):
            char = text[i]
            if char.isspace():
                i += 1
            elif char == "#":
                newline = text.find("\n", i)
                i = len(text) if newline < 0 else newline
            elif char.isdigit():
                match = re.match(r"\d+", text[i:])
                end = i + match.end()
                if end < len(text) and (text[end] == "." or text[end] in "eE" and text[end + 1:end + 2].isdigit()):
                    self._error("Non-integer literal", i)
                tokens.append(("int", int(match.group()), i))
                i = end
            elif char.isalpha() or char == "_":
                name = next((n for n in self.names if text.startswith(n, i)), None)
                if name is None:
                    word = re.match(r"[^\W\d]\w*", text[i:]).group()
                    self._error(f"Unknown identifier '{word}'", i)
                tokens.append(("var", name, i))
                i += len(name)
            elif text.startswith("**", i):
                tokens.append(("^", "^", i))
                i += 2
            elif char in _OPERATORS:
                tokens.append((char, char, i))
                i += 1
            elif char == ".":
                self._error("Non-integer literal", i)
            else:
                self._error(f"Unexpected character '{char}'", i)
        tokens.append(("end", None, len(text)))
        return tokens

    def _peek(self) -> Tuple[str, object, int]:
        return self.tokens[self.position]

    def _advance(self) -> Tuple[str, object, int]:
        token = self.tokens[self.position]
        self.position += 1
        return token

    def _expect(self, kind: str):
        token = self._advance()
        if token[0] != kind:
            found = "end of input" if token[0] == "end" else f"'{token[1]}'"
            self._error(f"Expected '{kind}', found {found}", token[2])
        return token

    def parse(self) -> Polynomial:
        if self._peek()[0] == "end":
            self._error("Empty expression", self._peek()[2])
        result = self._expr()
        kind, value, index = self._peek()
        if kind != "end":
            self._error(f"Unexpected '{value}'", index)
        return result

    def _expr(self) -> Polynomial:
        result = self._term()
        while self._peek()[0] in ("+", "-"):
            sign = self._advance()[0]
            right = self._term()
            result = result + right if sign == "+" else result - right
        return result

    def _term(self) -> Polynomial:
        result = self._factor()
        while True:
            kind = self._peek()[0]
            if kind == "*":
                self._advance()
                result = result * self._factor()
            elif kind in ("int", "var", "("):
                result = result * self._factor()
            else:
                return result

    def _factor(self) -> Polynomial:
        kind = self._peek()[0]
        if kind in ("+", "-"):
            self._advance()
            operand = self._factor()
            return -operand if kind == "-" else operand
        base = self._base()
        if self._peek()[0] == "^":
            self._advance()
            kind, value, index = self._peek()
            if kind != "int":
                self._error("Exponent must be a non-negative integer", index)
            self._advance()
            return base ** value
        return base

    def _base(self) -> Polynomial:
        kind, value, index = self._advance()
        if kind == "int":
            if self._peek()[0] == "/":
                self._advance()
                _, denominator, den_index = self._expect("int")
                if denominator == 0:
                    self._error("Division by zero in rational literal", den_index)
                try:
                    return Polynomial.constant(Fraction(value, denominator), self.variables, self.field)
                except ZeroDivisionError:
                    self._error(f"Denominator vanishes in GF({self.field.prime})", den_index)
            return Polynomial.constant(value, self.variables, self.field)
        if kind == "var":
            return Polynomial.variable(value, self.variables, self.field)
        if kind == "(":
            inner = self._expr()
            self._expect(")")
            return inner
        if kind == "end":
            self._error("Unexpected end of input", index)
        self._error(f"Unexpected '{value}'", index)


def parse_polynomial(text: str, variables: VariableSet = None, field: CoefficientField = None) -> Polynomial:
    """
    Parse an expression such as "xyz - t^3" or "16*(x^8+y^8) - 9*(x^2+y^2)^4"

    Args:
        text: expression text; '#' starts a comment running to the end of the line
        variables: ring variables (default: x, y, z, t)
        field: coefficient field (default: from config.DEFAULT_FIELD)

    Returns:
        Polynomial
    """
    variables = variables or VariableSet.surface()
    field = field or CoefficientField.from_tag()
    return _ExpressionParser(text, variables, field).parse()


def _format_monomial(monomial: Sequence[int], names: Sequence[str]) -> str:
    factors = []
    for name, exponent in zip(names, monomial):
        if exponent == 1:
            factors.append(name)
        elif exponent > 1:
            factors.append(f"{name}^{exponent}")
    return "*".join(factors)


def format_polynomial(polynomial: Polynomial) -> str:
    """Print in degrevlex order with explicit '*' so the text parses back"""
    if polynomial.is_zero:
        return "0"
    pieces = []
    for monomial, coefficient in polynomial.terms():
        value = polynomial.field.to_fraction(coefficient)
        negative = value < 0
        magnitude = -value if negative else value
        body = _format_monomial(monomial, polynomial.variables.names)
        if not body:
            text = str(magnitude)
        elif magnitude == 1:
            text = body
        else:
            text = f"{magnitude}*{body}"
        if not pieces:
            pieces.append(f"-{text}" if negative else text)
        else:
            pieces.append(f" - {text}" if negative else f" + {text}")
    return "".join(pieces)


def _format_module(shifts: Sequence[int], ring_symbol: str) -> str:
    groups = []
    for shift in sorted(set(shifts)):
        multiplicity = list(shifts).count(shift)
        twist = ring_symbol if shift == 0 else f"{ring_symbol}(-{shift})"
        groups.append(twist if multiplicity == 1 else f"{twist}^{multiplicity}")
    return " (+) ".join(groups)


def format_resolution(resolution, ring_symbol: str = None) -> str:
    """
    Render "0 -> S(-6)^2 -> S(-5)^8 -> S(-4)^9 -> S(-2)^4 -> S"

    Args:
        resolution: BettiData or GradedResolution (anything with shift_lists())
        ring_symbol: 'S' for surfaces, 'R' for curves (default: picked from the variable count)

    Returns:
        Resolution text, twists ascending inside each direct sum
    """
    shift_lists = [shifts for shifts in resolution.shift_lists() if shifts]
    if ring_symbol is None:
        ring_symbol = "R" if getattr(resolution, "n_vars", 4) == 3 else "S"
    modules = [_format_module(shifts, ring_symbol) for shifts in reversed(shift_lists)]
    return " -> ".join(["0"] + modules)


_TWIST = re.compile(r"^([A-Za-z])(?:[\(\[]\s*([+-]?\d+)\s*[\)\]])?(?:\^\{?(\d+)\}?)?$")
_DIRECT_SUM = re.compile(r"\(\+\)|⊕|\\oplus")


def parse_resolution_text(text: str) -> List[List[int]]:
    """
    Read resolution text back into shift lists, S first

    Accepts S(-k) and S[-k] twists, '(+)' or '⊕' sums, and optional
    leading "0 ->" / trailing "-> 0".

    Returns:
        [[0], [shifts of F1], [shifts of F2], ...] with S(-a) recorded as a
    """
    from resolution_engine import MalformedResolutionError

    pieces = [piece.strip() for piece in re.split(r"->|→|\\to", text)]
    pieces = [piece for piece in pieces if piece]
    while pieces and pieces[0] == "0":
        pieces.pop(0)
    while pieces and pieces[-1] == "0":
        pieces.pop()
    if not pieces:
        raise MalformedResolutionError(f"No free modules in resolution text: {text!r}")

    modules = []
    for piece in pieces:
        shifts = []
        for summand in _DIRECT_SUM.split(piece):
            match = _TWIST.match(summand.replace(" ", ""))
            if not match:
                raise MalformedResolutionError(f"Cannot read free module '{summand.strip()}'")
            twist = int(match.group(2) or 0)
            if twist > 0:
                raise MalformedResolutionError(f"Positive twist in '{summand.strip()}'")
            shifts.extend([-twist] * int(match.group(3) or 1))
        modules.append(sorted(shifts))
    modules.reverse()
    if modules[0] != [0]:
        raise MalformedResolutionError("Resolution text must end with the ring itself")
    return modules


def betti_from_resolution_text(text: str, degree: int, n_vars: int = 4):
    """BettiData of a resolution typed in by hand, e.g. copied from a CAS session"""
    from resolution_engine import betti_from_shifts

    return betti_from_shifts(parse_resolution_text(text), degree, n_vars)


def rational_to_json(value: Fraction):
    """Integers stay integers, other rationals become {"num", "den"}"""
    value = Fraction(value)
    if value.denominator == 1:
        return value.numerator
    return {"num": value.numerator, "den": value.denominator}


def serialize_report(report) -> str:
    """
    Dump a SurfaceReport, CurveReport or corpus result as JSON

    Key order follows model field declaration order.
    """
    return json.dumps(report.model_dump(by_alias=True), indent=2, ensure_ascii=False)
