"""Exact dense integer polynomials.

Coefficients are stored constant term first, so ``coeffs[i]`` is the coefficient a_i of x^i
and every index identity between f and its reciprocal f* is a plain array identity."""

import re
from fractions import Fraction
from functools import reduce
from logging import getLogger
from math import gcd
from typing import Annotated, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from mahlerbound.errors import PolynomialParseError, PreconditionError, ZeroPolynomialError

logger = getLogger(__name__)

# ==========================================================================================
#                         Constants
# ==========================================================================================

DENSE_PATTERN = re.compile(r"^[+-]?\d+(,[+-]?\d+)*$")
TERM_PATTERN = re.compile(r"[+-]?[^+-]+")
MONOMIAL_PATTERN = re.compile(r"^(?P<coeff>\d+)?(?:\*?(?P<x>x)(?:(?:\^|\*\*)(?P<power>\d+))?)?$")

Rational = Union[int, Fraction]

# ==========================================================================================
#                         Models
# ==========================================================================================


class IntPolynomial(BaseModel):
    """A dense integer polynomial a_0 + a_1 x + ... + a_n x^n

    Trailing zero coefficients are dropped on construction, so the last stored coefficient
    is the nonzero leading coefficient a_n; the zero polynomial is the empty tuple."""

    model_config = ConfigDict(frozen=True)

    coeffs: Annotated[
        tuple[int, ...],
        Field(description="Coefficients a_0, a_1, ..., a_n (constant term first)"),
    ]

    @field_validator("coeffs")
    @classmethod
    def _drop_trailing_zeros(cls, coeffs: tuple[int, ...]) -> tuple[int, ...]:
        end = len(coeffs)
        while end and coeffs[end - 1] == 0:
            end -= 1
        return coeffs[:end]

    @classmethod
    def of(cls, *coeffs: int) -> "IntPolynomial":
        """Build a polynomial from positional coefficients, constant term first"""
        return cls(coeffs=coeffs)

    @property
    def degree(self) -> int:
        """The degree n, or -1 for the zero polynomial"""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        """The leading coefficient a_n (0 for the zero polynomial)"""
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def constant(self) -> int:
        """The constant term a_0"""
        return self.coeffs[0] if self.coeffs else 0

    def __getitem__(self, index: int) -> int:
        if 0 <= index < len(self.coeffs):
            return self.coeffs[index]
        return 0

    def __str__(self) -> str:
        return format_sparse(self)


ZERO = IntPolynomial(coeffs=())
ONE = IntPolynomial(coeffs=(1,))
X_MINUS_ONE = IntPolynomial(coeffs=(-1, 1))

# ==========================================================================================
#                         Arithmetic
# ==========================================================================================


def require_nonzero(f: IntPolynomial, operation: str) -> None:
    """Raise if f is the zero polynomial"""

    if f.is_zero:
        raise ZeroPolynomialError(operation)


def add(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    size = max(len(f.coeffs), len(g.coeffs))
    return IntPolynomial(coeffs=tuple(f[i] + g[i] for i in range(size)))


def negate(f: IntPolynomial) -> IntPolynomial:
    return IntPolynomial(coeffs=tuple(-a for a in f.coeffs))


def scale(f: IntPolynomial, factor: int) -> IntPolynomial:
    return IntPolynomial(coeffs=tuple(factor * a for a in f.coeffs))


def shift(f: IntPolynomial, power: int) -> IntPolynomial:
    """Multiply f by x^power"""

    if f.is_zero:
        return f
    return IntPolynomial(coeffs=(0,) * power + f.coeffs)


def multiply(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    """The exact product f*g"""

    if f.is_zero or g.is_zero:
        return ZERO

    product = [0] * (len(f.coeffs) + len(g.coeffs) - 1)
    for i, a in enumerate(f.coeffs):
        if a == 0:
            continue
        for j, b in enumerate(g.coeffs):
            product[i + j] += a * b

    return IntPolynomial(coeffs=tuple(product))


def derivative(f: IntPolynomial) -> IntPolynomial:
    return IntPolynomial(coeffs=tuple(i * a for i, a in enumerate(f.coeffs) if i > 0))


def evaluate(f: IntPolynomial, t: Rational) -> Rational:
    """Evaluate f at an integer or rational point with Horner's rule"""

    value: Rational = 0
    for a in reversed(f.coeffs):
        value = value * t + a
    return value


def height(f: IntPolynomial) -> int:
    """The largest coefficient in absolute value"""

    return max((abs(a) for a in f.coeffs), default=0)


def content(f: IntPolynomial) -> int:
    return reduce(gcd, f.coeffs, 0)


# ==========================================================================================
#                         Structural Transforms
# ==========================================================================================


def reciprocal(f: IntPolynomial) -> IntPolynomial:
    """The reciprocal f*(x) = x^n f(1/x), ie. f with its coefficients reversed

    The result has degree n exactly when a_0 != 0; otherwise leading zeros of the reversal
    are dropped."""

    require_nonzero(f, "reciprocal")

    return IntPolynomial(coeffs=f.coeffs[::-1])


def is_reciprocal(f: IntPolynomial) -> bool:
    """True iff f = f* or f = -f*"""

    require_nonzero(f, "is_reciprocal")

    reversed_coeffs = f.coeffs[::-1]
    if f.coeffs == reversed_coeffs:
        return True

    return f.coeffs == tuple(-a for a in reversed_coeffs)


def strip_zero_roots(f: IntPolynomial) -> tuple[IntPolynomial, int]:
    """Split f = x^m g with g(0) != 0 and return (g, m)"""

    require_nonzero(f, "strip_zero_roots")

    multiplicity = 0
    while f.coeffs[multiplicity] == 0:
        multiplicity += 1

    return IntPolynomial(coeffs=f.coeffs[multiplicity:]), multiplicity


def normalize_signs(f: IntPolynomial) -> IntPolynomial:
    """Make the leading coefficient and the constant term positive

    Negates f when a_n < 0, then multiplies by (x - 1) when a_0 < 0. Both maps preserve the
    Mahler measure and the k-nonreciprocal index."""

    require_nonzero(f, "normalize_signs")

    if f.constant == 0:
        raise PreconditionError(
            "normalize_signs", "constant term is zero; strip zero roots first"
        )

    g = negate(f) if f.leading < 0 else f

    if g.constant < 0:
        g = multiply(X_MINUS_ONE, g)

    if g.leading < 0:
        g = negate(g)

    logger.debug(f"Normalized {f} to {g}")

    return g


# ==========================================================================================
#                         Squarefree Decomposition
# ==========================================================================================

# Rational polynomials below are plain lists of Fraction, constant term first, with no
# trailing zeros.


def _trim(coeffs: list[Fraction]) -> list[Fraction]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _rational_derivative(coeffs: list[Fraction]) -> list[Fraction]:
    return _trim([i * a for i, a in enumerate(coeffs) if i > 0])


def _rational_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    size = max(len(a), len(b))
    padded_a = a + [Fraction(0)] * (size - len(a))
    padded_b = b + [Fraction(0)] * (size - len(b))
    return _trim([x - y for x, y in zip(padded_a, padded_b)])


def _rational_divmod(
    numerator: list[Fraction], denominator: list[Fraction]
) -> tuple[list[Fraction], list[Fraction]]:
    remainder = list(numerator)
    if len(remainder) < len(denominator):
        return [], remainder

    quotient = [Fraction(0)] * (len(remainder) - len(denominator) + 1)
    lead = denominator[-1]
    while len(remainder) >= len(denominator) and remainder:
        offset = len(remainder) - len(denominator)
        factor = remainder[-1] / lead
        quotient[offset] = factor
        for i, d in enumerate(denominator):
            remainder[offset + i] -= factor * d
        _trim(remainder)

    return _trim(quotient), remainder


def _rational_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    while b:
        a, b = b, _rational_divmod(a, b)[1]
    lead = a[-1]
    return [c / lead for c in a]


def _primitive(coeffs: list[Fraction]) -> IntPolynomial:
    """Scale a rational polynomial to a primitive integer one with positive leading term"""

    denominator = reduce(lambda acc, c: acc * c.denominator // gcd(acc, c.denominator), coeffs, 1)
    integers = [int(c * denominator) for c in coeffs]
    divisor = content(IntPolynomial(coeffs=tuple(integers)))
    if integers[-1] < 0:
        divisor = -divisor
    return IntPolynomial(coeffs=tuple(c // divisor for c in integers))


def squarefree_decomposition(f: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    """Yun's squarefree decomposition over the rationals

    Returns pairs (g_m, m) of primitive, pairwise coprime, squarefree integer polynomials
    with f = c * prod(g_m^m) for a rational constant c. Constants yield an empty list."""

    require_nonzero(f, "squarefree_decomposition")

    if f.degree < 1:
        return []

    current = [Fraction(a) for a in f.coeffs]
    slope = _rational_derivative(current)
    common = _rational_gcd(current, slope)

    if len(common) == 1:
        return [(_primitive(current), 1)]

    b = _rational_divmod(current, common)[0]
    c = _rational_divmod(slope, common)[0]
    d = _rational_sub(c, _rational_derivative(b))

    parts: list[tuple[IntPolynomial, int]] = []
    multiplicity = 1
    while len(b) > 1:
        factor = _rational_gcd(b, d)
        if len(factor) > 1:
            parts.append((_primitive(factor), multiplicity))
        b = _rational_divmod(b, factor)[0]
        c = _rational_divmod(d, factor)[0]
        d = _rational_sub(c, _rational_derivative(b))
        multiplicity += 1

    return parts


# ==========================================================================================
#                         Text Format
# ==========================================================================================


def parse_polynomial(text: str) -> IntPolynomial:
    """Parse a polynomial written densely ("1,-1,0,1") or as a sum of monomials ("x^3-x+1")

    Dense tokens are a_0, a_1, ... in order. In sparse form the coefficient and the power
    may both be omitted, "*" may separate them and "**" may replace "^"."""

    compact = "".join(text.split())
    if not compact:
        raise PolynomialParseError(text, "")

    if DENSE_PATTERN.match(compact):
        return IntPolynomial(coeffs=tuple(int(token) for token in compact.split(",")))

    if "," in compact:
        bad = next(
            token for token in compact.split(",") if not re.fullmatch(r"[+-]?\d+", token)
        )
        raise PolynomialParseError(text, bad)

    terms: dict[int, int] = {}
    position = 0
    for match in TERM_PATTERN.finditer(compact):
        if match.start() != position:
            raise PolynomialParseError(text, compact[position : match.start()])
        position = match.end()

        term = match.group()
        sign = -1 if term[0] == "-" else 1
        body = term.lstrip("+-")

        monomial = MONOMIAL_PATTERN.match(body)
        if not body or monomial is None or not (monomial["coeff"] or monomial["x"]):
            raise PolynomialParseError(text, term)

        coefficient = int(monomial["coeff"]) if monomial["coeff"] else 1
        if monomial["x"]:
            power = int(monomial["power"]) if monomial["power"] else 1
        else:
            power = 0

        terms[power] = terms.get(power, 0) + sign * coefficient

    if position != len(compact):
        raise PolynomialParseError(text, compact[position:])

    size = max(terms) + 1
    return IntPolynomial(coeffs=tuple(terms.get(i, 0) for i in range(size)))


def format_dense(f: IntPolynomial) -> str:
    """The canonical dense form, constant term first; "0" for the zero polynomial"""

    if f.is_zero:
        return "0"
    return ",".join(str(a) for a in f.coeffs)


def format_sparse(f: IntPolynomial) -> str:
    """Human-readable sum of monomials, highest power first"""

    if f.is_zero:
        return "0"

    pieces = []
    for power in range(f.degree, -1, -1):
        a = f.coeffs[power]
        if a == 0:
            continue

        sign = "-" if a < 0 else "+"
        magnitude = abs(a)

        if power == 0:
            body = str(magnitude)
        else:
            monomial = "x" if power == 1 else f"x^{power}"
            body = monomial if magnitude == 1 else f"{magnitude}*{monomial}"

        pieces.append((sign, body))

    first_sign, first_body = pieces[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        text += sign + body

    return text
