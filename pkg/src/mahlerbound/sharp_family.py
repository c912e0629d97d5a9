"""A family of polynomials on which the k-nonreciprocal bound is attained.

    f(x) = (a x^{2k} + b x^k + c) (x^{n-2k} - 1),    a > 0 > c,  a - |b| <= -c <= a + |b|

The second factor only has roots on the unit circle, so M(f) is the measure of the quadratic
in x^k, which is (|b| + sqrt(b^2 - 4ac)) / 2. With a_n = a, a_0 = -c, a_k = -b and
a_{n-k} = b this is exactly the lower bound, since alpha = |b| (a - c) and
D = (a - c)^2 (b^2 - 4ac)."""

from enum import Enum, unique
from itertools import product
from logging import getLogger
from typing import Annotated, Any, Iterator, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, model_validator

from mahlerbound.errors import InvalidParametersError
from mahlerbound.mahler import ModulusClass, RootApprox, mahler_measure
from mahlerbound.nonreciprocal import Triviality, theorem_bound
from mahlerbound.poly import IntPolynomial, format_sparse, multiply
from mahlerbound.precision import MpReal, context, tolerance
from mahlerbound.settings import DEFAULT_SETTINGS

logger = getLogger(__name__)

# ==========================================================================================
#                         Models
# ==========================================================================================


@unique
class ExpansionCase(str, Enum):
    """How the six terms of the product overlap once expanded"""

    N_GT_4K = "n_gt_4k"
    N_EQ_4K = "n_eq_4k"
    BETWEEN_3K_4K = "between_3k_4k"
    BETWEEN_2K_3K = "between_2k_3k"


def _require_quadratic(a: int, b: int, c: int) -> None:
    if not a > 0 > c:
        raise InvalidParametersError("sharp family parameters", "a > 0 > c")
    if not a - abs(b) <= -c <= a + abs(b):
        raise InvalidParametersError("sharp family parameters", "a - |b| <= -c <= a + |b|")


class SharpFamilyParams(BaseModel):
    """Parameters (a, b, c, k, n) of (a x^{2k} + b x^k + c)(x^{n-2k} - 1)"""

    model_config = ConfigDict(frozen=True)

    a: int
    b: int
    c: int
    k: Annotated[int, Field(gt=0)]
    n: Annotated[int, Field(gt=0)]

    @model_validator(mode="after")
    def _check_inequalities(self) -> "SharpFamilyParams":
        _require_quadratic(self.a, self.b, self.c)
        if not self.n > 2 * self.k:
            raise InvalidParametersError("sharp family parameters", "n > 2k")
        if self.n == 3 * self.k:
            raise InvalidParametersError("sharp family parameters", "n != 3k")
        return self


class SharpnessReport(BaseModel):
    """Bound, closed form and numeric measure of one family member, side by side"""

    model_config = ConfigDict(frozen=True)

    params: SharpFamilyParams
    polynomial: IntPolynomial
    expansion_case: ExpansionCase
    applicable: bool
    k: Optional[int]
    alpha: Optional[int]
    bound: Optional[MpReal]
    closed_form: MpReal
    numeric_measure: MpReal
    numeric_error: MpReal
    max_discrepancy: Optional[MpReal]
    expansion_identity: Annotated[
        bool, Field(description="The expanded form equals the product of the two factors")
    ]
    k_matches: Annotated[bool, Field(description="The detected k is the family's k")]
    exact_identity: Annotated[
        bool, Field(description="alpha = |b| s, D = s^2 (b^2 - 4ac) and denom = 2s for s = a - c")
    ]
    root_moduli_consistent: Annotated[
        bool, Field(description="Roots off the circle have |z|^k equal to the quadratic's moduli")
    ]

    @property
    def sharp(self) -> bool:
        return (
            self.applicable
            and self.expansion_identity
            and self.k_matches
            and self.exact_identity
            and self.root_moduli_consistent
        )


# ==========================================================================================
#                         Construction
# ==========================================================================================


def expansion_case(p: SharpFamilyParams) -> ExpansionCase:
    if p.n > 4 * p.k:
        return ExpansionCase.N_GT_4K
    if p.n == 4 * p.k:
        return ExpansionCase.N_EQ_4K
    if p.n > 3 * p.k:
        return ExpansionCase.BETWEEN_3K_4K
    return ExpansionCase.BETWEEN_2K_3K


def construct(p: SharpFamilyParams) -> IntPolynomial:
    """The expanded polynomial a x^n + b x^{n-k} + c x^{n-2k} - a x^{2k} - b x^k - c

    Terms x^{n-2k} and x^{2k} merge when n = 4k; otherwise all six exponents differ."""

    coeffs = [0] * (p.n + 1)
    for power, coefficient in (
        (p.n, p.a),
        (p.n - p.k, p.b),
        (p.n - 2 * p.k, p.c),
        (2 * p.k, -p.a),
        (p.k, -p.b),
        (0, -p.c),
    ):
        coeffs[power] += coefficient

    return IntPolynomial(coeffs=tuple(coeffs))


def factored(p: SharpFamilyParams) -> IntPolynomial:
    """The same member as construct, multiplied out from its two factors"""

    quadratic = [0] * (2 * p.k + 1)
    quadratic[0], quadratic[p.k], quadratic[2 * p.k] = p.c, p.b, p.a
    cyclotomic = [-1] + [0] * (p.n - 2 * p.k - 1) + [1]
    return multiply(
        IntPolynomial(coeffs=tuple(quadratic)), IntPolynomial(coeffs=tuple(cyclotomic))
    )


# ==========================================================================================
#                         Closed Forms
# ==========================================================================================


def closed_form_measure(
    a: int, b: int, c: int, precision_bits: int = DEFAULT_SETTINGS.precision_bits
) -> Any:
    """(|b| + sqrt(b^2 - 4ac)) / 2"""

    _require_quadratic(a, b, c)

    ctx = context(precision_bits)
    return (abs(b) + ctx.sqrt(b * b - 4 * a * c)) / 2


def quadratic_root_moduli(
    a: int, b: int, c: int, precision_bits: int = DEFAULT_SETTINGS.precision_bits
) -> tuple[Any, Any]:
    """Moduli (outer, inner) of the roots of a y^2 + b y + c, with outer >= 1 >= inner"""

    _require_quadratic(a, b, c)

    ctx = context(precision_bits)
    root = ctx.sqrt(b * b - 4 * a * c)
    return (abs(b) + root) / (2 * a), (root - abs(b)) / (2 * a)


def _exact_identity(p: SharpFamilyParams, f: IntPolynomial) -> bool:
    profile = theorem_bound(f)
    bound = profile.bound_exact
    if bound is None or not profile.theorem_applicable:
        return False

    s = p.a - p.c
    return (
        bound.alpha == abs(p.b) * s
        and bound.discriminant == s * s * (p.b * p.b - 4 * p.a * p.c)
        and bound.denominator == 2 * s
    )


def _root_moduli_consistent(
    p: SharpFamilyParams, roots: Sequence[RootApprox], precision_bits: int
) -> bool:
    outer, inner = quadratic_root_moduli(p.a, p.b, p.c, precision_bits)
    limit = tolerance(precision_bits // 4) * p.k

    for root in roots:
        power = abs(root.value) ** p.k
        if root.modulus_class is ModulusClass.OUTSIDE and abs(power - outer) > limit:
            return False
        if root.modulus_class is ModulusClass.INSIDE and abs(power - inner) > limit:
            return False

    return True


def verify_sharpness(
    p: SharpFamilyParams, precision_bits: int = DEFAULT_SETTINGS.precision_bits
) -> SharpnessReport:
    """Compare the lower bound, the closed form and the numeric measure of one member

    b = 0 gives a reciprocal polynomial; the report then says not applicable instead of
    raising."""

    f = construct(p)
    profile = theorem_bound(f, precision_bits)
    closed = closed_form_measure(p.a, p.b, p.c, precision_bits)
    result = mahler_measure(f, precision_bits)

    applicable = profile.theorem_applicable
    if applicable:
        bound = profile.bound_value
        discrepancy = max(
            abs(bound - closed), abs(bound - result.measure), abs(closed - result.measure)
        )
    else:
        logger.info(f"Family member {format_sparse(f)} is reciprocal; bound not applicable")
        bound = None
        discrepancy = None

    report = SharpnessReport(
        params=p,
        polynomial=f,
        expansion_case=expansion_case(p),
        applicable=applicable,
        k=profile.k,
        alpha=profile.alpha,
        bound=bound,
        closed_form=closed,
        numeric_measure=result.measure,
        numeric_error=result.error_bound,
        max_discrepancy=discrepancy,
        expansion_identity=f == factored(p),
        k_matches=profile.k == p.k,
        exact_identity=_exact_identity(p, f),
        root_moduli_consistent=_root_moduli_consistent(p, result.roots, precision_bits),
    )

    if applicable and profile.triviality is Triviality.TRIVIAL:
        logger.debug(f"Family member {format_sparse(f)} attains a trivial bound")

    return report


# ==========================================================================================
#                         Sampling
# ==========================================================================================


def sampling_grid(
    a_range: range = range(1, 5),
    b_range: range = range(-4, 5),
    c_range: range = range(-4, 0),
    k_values: tuple[int, ...] = (1, 2, 3),
) -> Iterator[SharpFamilyParams]:
    """Every valid (a, b, c) in the ranges with n running over 2k+1..5k+1, skipping 3k

    The default ranges hit all four expansion cases."""

    for a, b, c in product(a_range, b_range, c_range):
        if not (a > 0 > c and a - abs(b) <= -c <= a + abs(b)):
            continue
        for k in k_values:
            for n in range(2 * k + 1, 5 * k + 2):
                if n != 3 * k:
                    yield SharpFamilyParams(a=a, b=b, c=c, k=k, n=n)
