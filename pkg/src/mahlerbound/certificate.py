"""Per-polynomial certificates for the k-nonreciprocal lower bound.

For f with positive a_0, a_n the argument runs through these objects:

    G(z) = f(z) / f*(z) = sum q_i z^i                 exact rationals, q_0 = a_0 / a_n
    1 / f*(z) = sum e_i z^i                          exact rationals, e_0 = 1 / a_n
    g(z) = eps * prod_{|b|<1} (z - b) / (1 - conj(b) z) = sum b_i z^i
    h(z) = prod_{|a|>1} (1 - conj(a) z) / (z - a)    = sum c_i z^i

with g = h G, |g| = |h| = 1 on the unit circle and c_0 = |a_n| / M(f). Wiener's inequality
|gamma_i| <= 1 - |gamma_0|^2 for the Taylor coefficients of g and h then forces

    M(f) |a_k - a_0 a_{n-k} / a_n| <= (q_0 + 1) (M(f)^2 - a_0 a_n).

A certificate recomputes every one of these objects for a concrete f and checks each
relation, reporting residuals rather than failing fast."""

from fractions import Fraction
from logging import getLogger
from typing import Annotated, Any, Optional, Sequence

from mpmath import MPContext
from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, computed_field

from mahlerbound.errors import NotApplicableError, PreconditionError
from mahlerbound.mahler import (
    GUARD_BITS,
    MahlerResult,
    ModulusClass,
    RootApprox,
    find_roots,
    mahler_measure,
)
from mahlerbound.nonreciprocal import detect_k, exact_bound
from mahlerbound.poly import (
    IntPolynomial,
    evaluate,
    format_sparse,
    normalize_signs,
    reciprocal,
    require_nonzero,
    strip_zero_roots,
)
from mahlerbound.precision import MpComplex, MpReal, context, render, tolerance
from mahlerbound.settings import DEFAULT_SETTINGS

logger = getLogger(__name__)

# ==========================================================================================
#                         Constants
# ==========================================================================================

UNIT_CIRCLE_SAMPLES = 64

ExactRational = Annotated[Any, PlainSerializer(str, return_type=str)]
"""A fractions.Fraction, serialized as "p/q" """

# ==========================================================================================
#                         Models
# ==========================================================================================


class CertificateCheck(BaseModel):
    """One named relation of the argument, evaluated for a concrete polynomial"""

    model_config = ConfigDict(frozen=True)

    name: str
    passed: bool
    residual: MpReal
    tolerance: MpReal


class BlaschkeSplit(BaseModel):
    """Taylor coefficients of the Blaschke products g and h at 0"""

    model_config = ConfigDict(frozen=True)

    b: tuple[MpComplex, ...]
    c: tuple[MpComplex, ...]
    epsilon: int
    sign: Annotated[int, Field(description="Common sign applied to g and h so that c_0 > 0")]
    inside: tuple[MpComplex, ...]
    outside: tuple[MpComplex, ...]
    on_circle: tuple[MpComplex, ...]


class Certificate(BaseModel):
    """The reconstructed argument for one polynomial and the outcome of every check"""

    model_config = ConfigDict(frozen=True)

    polynomial: IntPolynomial
    k: int
    truncation: int
    q: tuple[ExactRational, ...]
    e: tuple[ExactRational, ...]
    epsilon: int
    b: tuple[MpComplex, ...]
    c: tuple[MpComplex, ...]
    measure: MpReal
    measure_error: MpReal
    checks: tuple[CertificateCheck, ...]

    @computed_field
    @property
    def all_passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failed_checks(self) -> list[str]:
        return [check.name for check in self.checks if not check.passed]

    def check(self, name: str) -> CertificateCheck:
        return next(check for check in self.checks if check.name == name)


# ==========================================================================================
#                         Exact Series
# ==========================================================================================


def q_series(f: IntPolynomial, truncation: int) -> list[Fraction]:
    """q_0, ..., q_L of G = f / f*, from a_n q_j = a_j - sum_{i=1}^{j} d_i q_{j-i}"""

    require_nonzero(f, "q_series")
    if f.constant * f.leading <= 0:
        raise PreconditionError(
            "q_series", "a_0 * a_n must be positive; apply normalize_signs first"
        )

    an = f.leading
    d = reciprocal(f)

    q = [Fraction(f.constant, an)]
    for j in range(1, truncation + 1):
        total = Fraction(f[j])
        for i in range(1, j + 1):
            total -= d[i] * q[j - i]
        q.append(total / an)

    return q


def inverse_series(fstar: IntPolynomial, truncation: int) -> list[Fraction]:
    """e_0, ..., e_L of 1 / f*"""

    require_nonzero(fstar, "inverse_series")
    if fstar.constant == 0:
        raise PreconditionError("inverse_series", "constant term must be nonzero")

    d0 = fstar.constant
    e = [Fraction(1, d0)]
    for j in range(1, truncation + 1):
        total = sum((fstar[i] * e[j - i] for i in range(1, j + 1)), Fraction(0))
        e.append(-total / d0)

    return e


def truncated_product(f: IntPolynomial, series: Sequence[Fraction]) -> list[Fraction]:
    """Coefficients 0..L of f times the series, L = len(series) - 1"""

    return [
        sum((f[i] * series[j - i] for i in range(j + 1)), Fraction(0))
        for j in range(len(series))
    ]


def epsilon_sign(f: IntPolynomial) -> int:
    """-1 if f has a zero of odd multiplicity at z = 1, else 1"""

    require_nonzero(f, "epsilon_sign")

    multiplicity = 0
    current = list(f.coeffs)
    while len(current) > 1 and evaluate(IntPolynomial(coeffs=tuple(current)), 1) == 0:
        # synthetic division by (x - 1)
        quotient = [0] * (len(current) - 1)
        carry = 0
        for i in range(len(current) - 1, 0, -1):
            carry += current[i]
            quotient[i - 1] = carry
        current = quotient
        multiplicity += 1

    logger.debug(f"{format_sparse(f)} vanishes to order {multiplicity} at 1")

    return -1 if multiplicity % 2 else 1


# ==========================================================================================
#                         Blaschke Products
# ==========================================================================================


def _series_multiply(a: Sequence[Any], b: Sequence[Any], truncation: int) -> list:
    return [
        sum((a[i] * b[j - i] for i in range(j + 1)), a[0] * 0)
        for j in range(truncation + 1)
    ]


def _inside_factor(ctx: MPContext, beta: Any, truncation: int) -> list:
    """Taylor coefficients of (z - beta) / (1 - conj(beta) z)"""

    conjugate = ctx.conj(beta)
    scale = 1 - abs(beta) ** 2
    factor = [-beta]
    power = ctx.mpc(1)
    for _ in range(1, truncation + 1):
        factor.append(power * scale)
        power *= conjugate
    return factor


def _outside_factor(ctx: MPContext, alpha: Any, truncation: int) -> list:
    """Taylor coefficients of (1 - conj(alpha) z) / (z - alpha)"""

    inverse = 1 / alpha
    tail = ctx.conj(alpha) - inverse
    factor = [-inverse]
    power = inverse
    for _ in range(1, truncation + 1):
        factor.append(power * tail)
        power *= inverse
    return factor


def blaschke_split(
    f: IntPolynomial,
    precision_bits: int = DEFAULT_SETTINGS.precision_bits,
    truncation: int = DEFAULT_SETTINGS.certificate_min_truncation,
    *,
    roots: Optional[Sequence[RootApprox]] = None,
) -> BlaschkeSplit:
    """Taylor coefficients b_0..b_L of g and c_0..c_L of h

    Roots on the unit circle enter neither product; their quotients multiply to the constant
    epsilon carried by g. If h(0) < 0 both g and h are negated, which leaves g / h = G
    unchanged and makes c_0 = |h(0)|."""

    require_nonzero(f, "blaschke_split")
    if f.constant == 0:
        raise PreconditionError("blaschke_split", "constant term is zero; strip zero roots first")

    if roots is None:
        roots = find_roots(f, precision_bits)

    ctx = context(precision_bits + GUARD_BITS)
    epsilon = epsilon_sign(f)

    inside = [ctx.mpc(r.value) for r in roots if r.modulus_class is ModulusClass.INSIDE]
    outside = [ctx.mpc(r.value) for r in roots if r.modulus_class is ModulusClass.OUTSIDE]
    on_circle = [ctx.mpc(r.value) for r in roots if r.modulus_class is ModulusClass.ON_CIRCLE]

    b = [ctx.mpc(epsilon)] + [ctx.mpc(0)] * truncation
    for beta in inside:
        b = _series_multiply(b, _inside_factor(ctx, beta, truncation), truncation)

    c = [ctx.mpc(1)] + [ctx.mpc(0)] * truncation
    for alpha in outside:
        c = _series_multiply(c, _outside_factor(ctx, alpha, truncation), truncation)

    sign = -1 if c[0].real < 0 else 1
    if sign < 0:
        b = [-x for x in b]
        c = [-x for x in c]

    return BlaschkeSplit(
        b=tuple(b),
        c=tuple(c),
        epsilon=epsilon,
        sign=sign,
        inside=tuple(inside),
        outside=tuple(outside),
        on_circle=tuple(on_circle),
    )


def _evaluate_g(split: BlaschkeSplit, z: Any) -> Any:
    value = split.epsilon * split.sign
    for beta in split.inside:
        value *= (z - beta) / (1 - beta.conjugate() * z)
    return value


def _evaluate_h(split: BlaschkeSplit, z: Any) -> Any:
    value = split.sign
    for alpha in split.outside:
        value *= (1 - alpha.conjugate() * z) / (z - alpha)
    return value


# ==========================================================================================
#                         Certificate
# ==========================================================================================


def _check(name: str, residual: Any, limit: Any) -> CertificateCheck:
    passed = bool(residual <= limit)
    if not passed:
        logger.warning(f"Certificate check {name} failed: residual {render(residual)}")
    return CertificateCheck(name=name, passed=passed, residual=residual, tolerance=limit)


def _exact_check(name: str, residual: Fraction) -> CertificateCheck:
    ctx = context(64)
    return _check(name, ctx.mpf(abs(residual.numerator)) / abs(residual.denominator), ctx.mpf(0))


def default_truncation(k: int) -> int:
    return max(2 * k, DEFAULT_SETTINGS.certificate_min_truncation)


def build_certificate(
    f: IntPolynomial,
    truncation: Optional[int] = None,
    precision_bits: int = DEFAULT_SETTINGS.precision_bits,
) -> Certificate:
    """Rebuild the argument for f and evaluate every named check

    f must have positive a_0 and a_n (see normalize_signs) and be k-nonreciprocal with
    2k <= n. The certificate is returned even when checks fail."""

    require_nonzero(f, "build_certificate")
    if f.constant <= 0 or f.leading <= 0:
        raise PreconditionError(
            "build_certificate", "a_0 and a_n must be positive; apply normalize_signs first"
        )

    n = f.degree
    a0 = f.constant
    an = f.leading
    k = detect_k(f)
    if k is None:
        raise NotApplicableError(format_sparse(f), "f is reciprocal")
    if 2 * k > n:
        raise NotApplicableError(format_sparse(f), f"2k = {2 * k} exceeds n = {n}")

    truncation = default_truncation(k) if truncation is None else truncation
    if truncation < k:
        raise PreconditionError("build_certificate", f"truncation {truncation} is below k = {k}")

    logger.debug(f"Certifying {format_sparse(f)} with k={k}, L={truncation}")

    q = q_series(f, truncation)
    fstar = reciprocal(f)
    e = inverse_series(fstar, truncation)

    result: MahlerResult = mahler_measure(f, precision_bits)
    split = blaschke_split(f, precision_bits, truncation, roots=result.roots)

    ctx = context(precision_bits + GUARD_BITS)
    tol = tolerance(precision_bits // 4) * truncation
    measure = ctx.mpf(result.measure)
    b, c = split.b, split.c
    q0 = ctx.mpf(q[0].numerator) / q[0].denominator
    qk = ctx.mpf(q[k].numerator) / q[k].denominator

    checks = []

    vanishing = max((abs(q[i]) for i in range(1, k)), default=Fraction(0))
    checks.append(
        _exact_check("VANISH", vanishing if q[k] != 0 else max(vanishing, Fraction(1)))
    )

    expected_qk = Fraction(f[k], an) - Fraction(a0 * f[n - k], an * an)
    checks.append(_exact_check("QK", q[k] - expected_qk))

    product = truncated_product(fstar, e)
    identity = [Fraction(1)] + [Fraction(0)] * truncation
    checks.append(
        _exact_check("INV", max(abs(x - y) for x, y in zip(product, identity)))
    )

    q_mp = [ctx.mpf(x.numerator) / x.denominator for x in q]
    ratio_residual = max(
        abs(b[i] - sum((c[j] * q_mp[i - j] for j in range(i + 1)), ctx.mpc(0)))
        for i in range(truncation + 1)
    )
    checks.append(_check("GH-RATIO", ratio_residual, tol))

    link_residual = max(
        [abs(b[i] - c[i] * q0) for i in range(k)] + [abs(b[k] - (c[0] * qk + c[k] * q0))]
    )
    checks.append(_check("LINK", link_residual, tol))

    checks.append(_check("EQ1", abs(c[0] - an / measure), tol))

    b0_squared = abs(b[0]) ** 2
    wiener_g = max(
        [abs(b[i]) - (1 - b0_squared) for i in range(1, truncation + 1)]
        + [abs(b[0] - c[0] * q0)]
    )
    checks.append(_check("WIENER-G", wiener_g, tol))

    c0_squared = abs(c[0]) ** 2
    wiener_h = max(abs(c[i]) - (1 - c0_squared) for i in range(1, truncation + 1))
    checks.append(_check("WIENER-H", wiener_h, tol))

    checks.append(_check("EQ2", abs(c[0] * qk) - (abs(b[k]) + abs(c[k]) * q0), tol))

    discrepancy = abs(ctx.mpf(f[k]) - ctx.mpf(a0 * f[n - k]) / an)
    final = measure * discrepancy - (q0 + 1) * (measure**2 - a0 * an)
    checks.append(_check("FINAL", final, tol))

    unit_residual = ctx.mpf(0)
    for index in range(UNIT_CIRCLE_SAMPLES):
        z = ctx.expjpi(ctx.mpf(2 * index) / UNIT_CIRCLE_SAMPLES)
        unit_residual = max(
            unit_residual,
            abs(abs(_evaluate_g(split, z)) - 1),
            abs(abs(_evaluate_h(split, z)) - 1),
        )
    checks.append(_check("UNIT-MODULUS", unit_residual, tol))

    circle_product = ctx.mpc(1)
    for alpha in split.on_circle:
        circle_product *= -alpha
    checks.append(_check("ON-CIRCLE-EPSILON", abs(circle_product - split.epsilon), tol))

    checks.append(_implied_bound_check(f, k, q[0]))

    certificate = Certificate(
        polynomial=f,
        k=k,
        truncation=truncation,
        q=tuple(q),
        e=tuple(e),
        epsilon=split.epsilon,
        b=b,
        c=c,
        measure=result.measure,
        measure_error=result.error_bound,
        checks=tuple(checks),
    )

    if not certificate.all_passed:
        logger.warning(
            f"Certificate for {format_sparse(f)} failed {certificate.failed_checks()}"
        )

    return certificate


def _implied_bound_check(f: IntPolynomial, k: int, q0: Fraction) -> CertificateCheck:
    """Solving the final inequality for M(f) must give the theorem's bound exactly

    In the proof's variables x = |a_k - a_0 a_{n-k} / a_n| and t = q_0 + 1 the inequality
    M x <= t (M^2 - a_0 a_n) gives M >= (x + sqrt(x^2 + 4 t^2 a_0 a_n)) / (2t). Scaling by a_n
    must reproduce alpha, D and 2s of the theorem."""

    n = f.degree
    a0 = f.constant
    an = f.leading
    x = abs(Fraction(f[k]) - Fraction(a0 * f[n - k], an))
    t = q0 + 1

    bound = exact_bound(abs(f[k] * an - a0 * f[n - k]), a0, an)
    mismatch = (
        abs(x * an - bound.alpha)
        + abs(2 * t * an - bound.denominator)
        + abs((x * x + 4 * t * t * a0 * an) * an * an - bound.discriminant)
    )

    return _exact_check("IMPLIED-BOUND", mismatch)


def certify_normalized(
    f: IntPolynomial,
    truncation: Optional[int] = None,
    precision_bits: int = DEFAULT_SETTINGS.precision_bits,
) -> Certificate:
    """Strip roots at zero, make the endpoints positive, then build the certificate"""

    stripped, _ = strip_zero_roots(f)
    return build_certificate(normalize_signs(stripped), truncation, precision_bits)

