"""k-nonreciprocal polynomials and the lower bound on their Mahler measure.

f = sum a_i x^i is k-nonreciprocal when a_n a_i = a_0 a_{n-i} for 1 <= i < k but not for i = k.
When 2k <= n, with alpha = |a_k a_n - a_0 a_{n-k}| and s = |a_0| + |a_n|,

    M(f) >= (alpha + sqrt(alpha^2 + 4 s^2 |a_0 a_n|)) / (2 s).

The bound is kept as the exact integer triple (alpha, D, 2s) so that comparisons against
integers are decided by squaring instead of in floating point."""

from enum import Enum, unique
from logging import getLogger
from typing import Annotated, Any, Optional

from pydantic import BaseModel, ConfigDict, Field

from mahlerbound.errors import InvalidParametersError, PreconditionError
from mahlerbound.poly import IntPolynomial, require_nonzero
from mahlerbound.precision import MpReal, context
from mahlerbound.settings import DEFAULT_SETTINGS

logger = getLogger(__name__)

# ==========================================================================================
#                         Models
# ==========================================================================================


@unique
class Triviality(str, Enum):
    """Whether the bound says more than M(f) >= max(|a_0|, |a_n|)"""

    NONTRIVIAL = "nontrivial"
    TRIVIAL = "trivial"
    NOT_APPLICABLE = "not_applicable"


class BoundExact(BaseModel):
    """The bound (alpha + sqrt(D)) / denominator as exact integers"""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    alpha: Annotated[int, Field(ge=0)]
    discriminant: Annotated[
        int, Field(ge=0, serialization_alias="D", description="alpha^2 + 4 s^2 |a_0 a_n|")
    ]
    denominator: Annotated[
        int, Field(gt=0, serialization_alias="denom", description="2 (|a_0| + |a_n|)")
    ]

    def value(self, precision_bits: int = DEFAULT_SETTINGS.precision_bits) -> Any:
        ctx = context(precision_bits)
        return (self.alpha + ctx.sqrt(self.discriminant)) / self.denominator

    def exceeds(self, value: int) -> bool:
        """True iff (alpha + sqrt(D)) / denominator > value, decided in integers"""

        remainder = self.denominator * value - self.alpha
        return remainder < 0 or self.discriminant > remainder * remainder

    def at_least(self, value: int) -> bool:
        """True iff (alpha + sqrt(D)) / denominator >= value, decided in integers"""

        remainder = self.denominator * value - self.alpha
        return remainder <= 0 or self.discriminant >= remainder * remainder


class NonreciprocalProfile(BaseModel):
    """Everything the lower bound theorem needs to know about a polynomial"""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    k: Annotated[
        Optional[int], Field(description="Smallest index where a_n a_i != a_0 a_{n-i}")
    ]
    alpha: Annotated[Optional[int], Field(description="|a_k a_n - a_0 a_{n-k}|")]
    a0: int
    an: int
    degree: int
    theorem_applicable: Annotated[
        bool, Field(serialization_alias="applicable", description="k exists and 2k <= n")
    ]
    bound_exact: Optional[BoundExact]
    bound_value: Optional[MpReal]
    triviality: Triviality
    trivial_bound: Annotated[int, Field(description="max(|a_0|, |a_n|)")]


# ==========================================================================================
#                         Free Functions
# ==========================================================================================


def _require_constant_term(f: IntPolynomial, operation: str) -> None:
    require_nonzero(f, operation)
    if f.constant == 0:
        raise PreconditionError(operation, "constant term is zero; strip zero roots first")


def detect_k(f: IntPolynomial) -> Optional[int]:
    """The k for which f is k-nonreciprocal, or None when f is reciprocal

    Searches every 1 <= i <= n; whether 2k <= n is a separate question."""

    _require_constant_term(f, "detect_k")

    n = f.degree
    a0 = f.constant
    an = f.leading
    for i in range(1, n + 1):
        if an * f[i] != a0 * f[n - i]:
            return i

    return None


def compute_alpha(f: IntPolynomial, k: int) -> int:
    """alpha = |a_k a_n - a_0 a_{n-k}| for the detected k"""

    detected = detect_k(f)
    if detected is None or k != detected:
        raise InvalidParametersError("k", f"k = detect_k(f) = {detected}")

    return abs(f[k] * f.leading - f.constant * f[f.degree - k])


def trivial_bound(f: IntPolynomial) -> int:
    """max(|a_0|, |a_n|), a lower bound for M(f) that holds for every f with a_0 != 0"""

    _require_constant_term(f, "trivial_bound")

    return max(abs(f.constant), abs(f.leading))


def exact_bound(alpha: int, a0: int, an: int) -> BoundExact:
    s = abs(a0) + abs(an)
    return BoundExact(
        alpha=alpha,
        discriminant=alpha * alpha + 4 * s * s * abs(a0 * an),
        denominator=2 * s,
    )


def classify_triviality(profile: NonreciprocalProfile) -> Triviality:
    """Nontrivial iff the theorem applies and alpha > |a_0^2 - a_n^2|

    Exactly then the bound exceeds max(|a_0|, |a_n|)."""

    if not profile.theorem_applicable or profile.alpha is None:
        return Triviality.NOT_APPLICABLE

    if profile.alpha > abs(profile.a0**2 - profile.an**2):
        return Triviality.NONTRIVIAL

    return Triviality.TRIVIAL


def theorem_bound(
    f: IntPolynomial, precision_bits: int = DEFAULT_SETTINGS.precision_bits
) -> NonreciprocalProfile:
    """The full profile of f: k, alpha, applicability and the lower bound

    For reciprocal f the bound is still filled in with alpha = 0, which gives the trivial
    value sqrt(|a_0 a_n|). When k exists but 2k > n no bound is given."""

    _require_constant_term(f, "theorem_bound")

    a0 = f.constant
    an = f.leading
    n = f.degree

    k = detect_k(f)
    if k is None:
        alpha = None
        applicable = False
        bound = exact_bound(0, a0, an)
    else:
        alpha = abs(f[k] * an - a0 * f[n - k])
        applicable = 2 * k <= n
        bound = exact_bound(alpha, a0, an) if applicable else None

    profile = NonreciprocalProfile(
        k=k,
        alpha=alpha,
        a0=a0,
        an=an,
        degree=n,
        theorem_applicable=applicable,
        bound_exact=bound,
        bound_value=bound.value(precision_bits) if bound is not None else None,
        triviality=Triviality.NOT_APPLICABLE,
        trivial_bound=max(abs(a0), abs(an)),
    )

    return profile.model_copy(update={"triviality": classify_triviality(profile)})


def bound_exceeds(profile: NonreciprocalProfile, value: int) -> bool:
    """True iff the profile's bound is strictly greater than the integer ``value``"""

    if profile.bound_exact is None:
        return False
    return profile.bound_exact.exceeds(value)


def golden_ratio_consequence(profile: NonreciprocalProfile) -> bool:
    """True when |a_0| = |a_n| = 1, the theorem applies and alpha >= 2

    The bound is then at least (1 + sqrt(5)) / 2."""

    return (
        abs(profile.a0) == 1
        and abs(profile.an) == 1
        and profile.theorem_applicable
        and profile.alpha is not None
        and profile.alpha >= 2
    )
