"""Certified numerical Mahler measures.

M(f) = |a_n| * prod(max(1, |alpha_i|)) over the roots alpha_i of f.

Roots are found with the Aberth-Ehrlich simultaneous iteration on each squarefree part of f,
warm-started in double precision and polished in mpmath at escalating precision until every
root sits in a small, disjoint inclusion disc."""

import cmath
import math
from enum import Enum, unique
from fractions import Fraction
from logging import getLogger
from math import comb
from typing import Annotated, Any, Optional, Sequence

from mpmath import MPContext
from pydantic import BaseModel, ConfigDict, Field

from mahlerbound.errors import GraeffeOverflowError, PrecisionExhaustedError, PreconditionError
from mahlerbound.poly import (
    IntPolynomial,
    add,
    format_sparse,
    multiply,
    negate,
    require_nonzero,
    scale,
    shift,
    squarefree_decomposition,
    strip_zero_roots,
)
from mahlerbound.precision import MpComplex, MpReal, context, tolerance
from mahlerbound.settings import DEFAULT_SETTINGS

logger = getLogger(__name__)

# ==========================================================================================
#                         Constants
# ==========================================================================================

GUARD_BITS = 32

# ==========================================================================================
#                         Models
# ==========================================================================================


@unique
class ModulusClass(str, Enum):
    """Where a root lies relative to the unit circle"""

    INSIDE = "inside"
    ON_CIRCLE = "on_circle"
    OUTSIDE = "outside"


class RootApprox(BaseModel):
    """A root of f enclosed in a disc"""

    model_config = ConfigDict(frozen=True)

    value: Annotated[MpComplex, Field(description="Center of the inclusion disc")]
    radius: Annotated[MpReal, Field(description="Radius of the inclusion disc")]
    modulus_class: Annotated[
        ModulusClass, Field(description="Position relative to the unit circle")
    ]
    multiplicity: Annotated[
        int, Field(description="Multiplicity of the root as a root of f")
    ] = 1


class MahlerResult(BaseModel):
    """A Mahler measure together with its certified error and the roots it came from"""

    model_config = ConfigDict(frozen=True)

    measure: Annotated[MpReal, Field(description="Approximate Mahler measure")]
    error_bound: Annotated[
        MpReal, Field(description="The true measure lies within this distance")
    ]
    roots: Annotated[
        tuple[RootApprox, ...],
        Field(description="Roots of the stripped polynomial, repeated by multiplicity"),
    ]
    leading_abs: Annotated[int, Field(description="Absolute value of a_n")]
    zero_root_multiplicity: Annotated[
        int, Field(description="Multiplicity of the root at 0 that was stripped")
    ] = 0
    precision_bits: Annotated[
        int, Field(description="Precision at which the roots were certified")
    ] = 0

    def count(self, modulus_class: ModulusClass) -> int:
        return sum(1 for root in self.roots if root.modulus_class is modulus_class)


class MeasureInterval(BaseModel):
    """An interval guaranteed to contain a Mahler measure"""

    model_config = ConfigDict(frozen=True)

    lower: MpReal
    upper: MpReal
    iterations: int

    def contains(self, value: Any) -> bool:
        return self.lower <= value <= self.upper


# ==========================================================================================
#                         Root Finding
# ==========================================================================================


def circle_tolerance(precision_bits: int) -> Any:
    """Roots whose modulus is within 2**(-p/3) of 1 count as lying on the unit circle"""

    return tolerance(precision_bits // 3)


def _initial_guesses(g: IntPolynomial) -> list[complex]:
    """Points on a circle around the centroid of the roots, radius from Fujiwara's bound"""

    n = g.degree
    lead = g.leading
    center = -g[n - 1] / (n * lead)
    bound = 2 * max(
        abs(g[n - i] / lead) ** (1 / i) for i in range(1, n + 1)
    )
    radius = max(bound, 1e-3)
    return [
        center + radius * cmath.exp(1j * (2 * math.pi * k / n + 0.4)) for k in range(n)
    ]


def _unit_circle_guesses(n: int) -> list[complex]:
    return [cmath.exp(1j * (2 * math.pi * k / n + 0.4)) for k in range(n)]


def _float_aberth(g: IntPolynomial, max_iterations: int = 200) -> Optional[list[complex]]:
    """Double precision Aberth iteration used to seed the high precision one"""

    try:
        coeffs = [float(a) for a in reversed(g.coeffs)]
        z = _initial_guesses(g)
    except (OverflowError, ZeroDivisionError):
        return None

    n = g.degree
    for _ in range(max_iterations):
        largest = 0.0
        for i in range(n):
            value = 0j
            slope = 0j
            for a in coeffs:
                slope = slope * z[i] + value
                value = value * z[i] + a
            if value == 0:
                continue
            try:
                ratio = value / slope
                repulsion = sum(1 / (z[i] - z[j]) for j in range(n) if j != i)
                delta = ratio / (1 - ratio * repulsion)
            except ZeroDivisionError:
                delta = 1e-6 * (1 + abs(z[i]))
            z[i] -= delta
            largest = max(largest, abs(delta) / (1 + abs(z[i])))
        if largest < 1e-14:
            break

    if not all(cmath.isfinite(w) for w in z):
        return None

    return z


def _aberth(ctx: MPContext, g: IntPolynomial, start: Sequence[Any], target_bits: int) -> list:
    """Polish approximations of the roots of a squarefree g at the context's precision"""

    n = g.degree
    coeffs = [ctx.mpf(a) for a in reversed(g.coeffs)]
    z = [ctx.mpc(w) for w in start]
    threshold = ctx.ldexp(ctx.mpf(1), -target_bits)

    for _ in range(100 + 10 * n):
        converged = True
        for i in range(n):
            value, slope = ctx.polyval(coeffs, z[i], derivative=True)
            if value == 0:
                continue
            repulsion = ctx.mpc(0)
            for j in range(n):
                if j != i:
                    gap = z[i] - z[j]
                    if gap == 0:
                        gap = threshold
                    repulsion += 1 / gap
            denominator = slope - value * repulsion
            if denominator == 0:
                delta = threshold * (1 + abs(z[i]))
            else:
                delta = value / denominator
            z[i] -= delta
            if abs(delta) > threshold * (1 + abs(z[i])):
                converged = False
        if converged:
            break

    return z


def _inclusion_radii(ctx: MPContext, g: IntPolynomial, z: Sequence[Any]) -> list:
    """Radii n|W_i| of discs around z_i whose union holds every root of g

    W_i = g(z_i) / (a_n prod_{j != i}(z_i - z_j)) is the Weierstrass correction; the value of
    g(z_i) is padded by a bound on the rounding error of its evaluation."""

    n = g.degree
    coeffs = [ctx.mpf(a) for a in reversed(g.coeffs)]
    magnitudes = [abs(c) for c in coeffs]
    unit_roundoff = ctx.ldexp(ctx.mpf(1), -ctx.prec + 4) * (n + 1)

    radii = []
    for i in range(n):
        value = abs(ctx.polyval(coeffs, z[i]))
        value += unit_roundoff * ctx.polyval(magnitudes, abs(z[i]))
        denominator = abs(ctx.mpf(g.leading))
        for j in range(n):
            if j != i:
                denominator *= abs(z[i] - z[j])
        if denominator == 0:
            radii.append(ctx.inf)
        else:
            radii.append(n * value / denominator)

    return radii


def _discs_disjoint(z: Sequence[Any], radii: Sequence[Any]) -> bool:
    return all(
        abs(z[i] - z[j]) > radii[i] + radii[j]
        for i in range(len(z))
        for j in range(i + 1, len(z))
    )


def _certified_roots(
    g: IntPolynomial, precision_bits: int, max_precision_bits: int
) -> tuple[list, list]:
    """Roots of a squarefree g with inclusion radii below 2**(-p/2)"""

    required = tolerance(precision_bits // 2)
    start: Optional[Sequence[Any]] = _float_aberth(g)
    if start is None:
        start = _unit_circle_guesses(g.degree)

    bits = precision_bits
    while bits <= max_precision_bits:
        ctx = context(bits + GUARD_BITS)
        z = _aberth(ctx, g, start, bits)
        radii = _inclusion_radii(ctx, g, z)

        if all(r < required for r in radii) and _discs_disjoint(z, radii):
            return z, radii

        logger.debug(f"Escalating precision for {g} beyond {bits} bits")
        start = z
        bits *= 2

    raise PrecisionExhaustedError(format_sparse(g), max_precision_bits)


def find_roots(
    f: IntPolynomial,
    precision_bits: int = DEFAULT_SETTINGS.precision_bits,
    *,
    max_precision_bits: int = DEFAULT_SETTINGS.max_precision_bits,
    on_circle_tolerance: Any = None,
) -> tuple[RootApprox, ...]:
    """Inclusion discs for all n roots of f, repeated according to multiplicity

    Requires a_0 != 0 and deg f >= 1. Raises PrecisionExhaustedError instead of returning
    discs that could not be certified."""

    require_nonzero(f, "find_roots")
    if f.degree < 1:
        raise PreconditionError("find_roots", "polynomial must have degree at least 1")
    if f.constant == 0:
        raise PreconditionError("find_roots", "constant term is zero; strip zero roots first")

    circle = on_circle_tolerance
    if circle is None:
        circle = circle_tolerance(precision_bits)

    roots: list[RootApprox] = []
    for part, multiplicity in squarefree_decomposition(f):
        values, radii = _certified_roots(
            part, precision_bits, max(max_precision_bits, precision_bits)
        )
        for value, radius in zip(values, radii):
            distance = abs(value) - 1
            if abs(distance) <= circle:
                modulus_class = ModulusClass.ON_CIRCLE
            elif distance < 0:
                modulus_class = ModulusClass.INSIDE
            else:
                modulus_class = ModulusClass.OUTSIDE
            approximation = RootApprox(
                value=value,
                radius=radius,
                modulus_class=modulus_class,
                multiplicity=multiplicity,
            )
            roots.extend([approximation] * multiplicity)

    return tuple(roots)


# ==========================================================================================
#                         Mahler Measure
# ==========================================================================================


def _measure_from_roots(
    ctx: MPContext, leading_abs: int, roots: Sequence[RootApprox]
) -> tuple[Any, Any]:
    """The product |a_n| prod max(1, |z|) and a bound on its distance to the true measure"""

    measure = ctx.mpf(leading_abs)
    relative = ctx.mpf(0)
    for root in roots:
        modulus = abs(ctx.mpc(root.value))
        if root.modulus_class is ModulusClass.OUTSIDE:
            measure *= modulus
            relative += root.radius / (modulus - root.radius)
        elif root.modulus_class is ModulusClass.ON_CIRCLE:
            relative += abs(modulus - 1) + root.radius

    rounding = ctx.ldexp(ctx.mpf(len(roots) + 1), -ctx.prec + 4)
    error_bound = measure * (ctx.expm1(relative) + rounding)
    return measure, error_bound


def mahler_measure(
    f: IntPolynomial,
    precision_bits: int = DEFAULT_SETTINGS.precision_bits,
    *,
    max_precision_bits: int = DEFAULT_SETTINGS.max_precision_bits,
    on_circle_tolerance: Any = None,
) -> MahlerResult:
    """The Mahler measure of f with an error bound of at most 2**(-p/4)

    Roots at zero are stripped first; constants return |a_0| exactly."""

    require_nonzero(f, "mahler_measure")

    g, zero_roots = strip_zero_roots(f)
    leading_abs = abs(f.leading)

    if g.degree == 0:
        ctx = context(precision_bits)
        return MahlerResult(
            measure=ctx.mpf(leading_abs),
            error_bound=ctx.mpf(0),
            roots=(),
            leading_abs=leading_abs,
            zero_root_multiplicity=zero_roots,
            precision_bits=precision_bits,
        )

    bits = precision_bits
    cap = max(max_precision_bits, precision_bits)
    required = tolerance(precision_bits // 4)
    while bits <= cap:
        roots = find_roots(
            g,
            bits,
            max_precision_bits=cap,
            on_circle_tolerance=on_circle_tolerance
            if on_circle_tolerance is not None
            else circle_tolerance(precision_bits),
        )
        ctx = context(bits + GUARD_BITS)
        measure, error_bound = _measure_from_roots(ctx, leading_abs, roots)

        if error_bound <= required:
            return MahlerResult(
                measure=measure,
                error_bound=error_bound,
                roots=roots,
                leading_abs=leading_abs,
                zero_root_multiplicity=zero_roots,
                precision_bits=bits,
            )

        logger.debug(f"Error bound of M({g}) too wide at {bits} bits")
        bits *= 2

    raise PrecisionExhaustedError(format_sparse(f), cap)


def root_partition(result: MahlerResult) -> dict[str, int]:
    """Number of roots inside, on and outside the unit circle"""

    return {modulus_class.value: result.count(modulus_class) for modulus_class in ModulusClass}


def is_kronecker(result: MahlerResult) -> bool:
    """True when the measure is 1, ie. every nonzero root lies on the unit circle"""

    return result.leading_abs == 1 and result.count(ModulusClass.OUTSIDE) == 0


# ==========================================================================================
#                         Graeffe Enclosure
# ==========================================================================================


def graeffe_step(f: IntPolynomial) -> IntPolynomial:
    """The polynomial whose roots are the squares of the roots of f

    With f(x) = E(x^2) + x O(x^2) it is (-1)^n (E(y)^2 - y O(y)^2)."""

    even = IntPolynomial(coeffs=f.coeffs[0::2])
    odd = IntPolynomial(coeffs=f.coeffs[1::2])
    squared = add(multiply(even, even), negate(shift(multiply(odd, odd), 1)))
    return scale(squared, (-1) ** f.degree)


def graeffe_measure(
    f: IntPolynomial,
    iterations: int = 10,
    *,
    max_bits: int = DEFAULT_SETTINGS.graeffe_max_bits,
) -> MeasureInterval:
    """An interval containing M(f), from exact root squaring

    After m root-squaring steps F has measure M(f)**(2**m), and for any polynomial F of
    degree n, max_i |F_i| / C(n, i) <= M(F) <= ||F||_2. Taking 2**m-th roots squeezes the
    interval towards M(f) as m grows."""

    require_nonzero(f, "graeffe_measure")
    if f.constant == 0:
        raise PreconditionError("graeffe_measure", "constant term is zero; strip zero roots first")
    if iterations < 1:
        raise PreconditionError("graeffe_measure", "iterations must be positive")

    current = f
    for iteration in range(1, iterations + 1):
        current = graeffe_step(current)
        bits = max(abs(a).bit_length() for a in current.coeffs)
        if bits > max_bits:
            raise GraeffeOverflowError(format_sparse(f), iteration, bits, max_bits)

    n = current.degree
    lower_ratio = max(Fraction(abs(a), comb(n, i)) for i, a in enumerate(current.coeffs))
    norm_squared = sum(a * a for a in current.coeffs)

    ctx = context(96)
    power = ctx.mpf(2) ** iterations
    slack = ctx.ldexp(ctx.mpf(1), -64)

    log_lower = ctx.log(ctx.mpf(lower_ratio.numerator)) - ctx.log(ctx.mpf(lower_ratio.denominator))
    lower = ctx.exp(log_lower / power) * (1 - slack)
    upper = ctx.exp(ctx.log(ctx.mpf(norm_squared)) / (2 * power)) * (1 + slack)

    return MeasureInterval(lower=lower, upper=upper, iterations=iterations)
