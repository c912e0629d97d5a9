import math
import random

import pytest

from mahlerbound.errors import InvalidParametersError, PreconditionError, ZeroPolynomialError
from mahlerbound.mahler import mahler_measure
from mahlerbound.nonreciprocal import (
    Triviality,
    bound_exceeds,
    classify_triviality,
    compute_alpha,
    detect_k,
    exact_bound,
    golden_ratio_consequence,
    theorem_bound,
    trivial_bound,
)
from mahlerbound.poly import ZERO, X_MINUS_ONE, IntPolynomial, multiply, negate, parse_polynomial

from tests.constants import GOLDEN_RATIO, SMYTH_POLYNOMIAL

SHARP_EXAMPLE = parse_polynomial("1,-1,-1,-1,1,1")


def test_detect_k():
    assert detect_k(SHARP_EXAMPLE) == 1
    assert detect_k(SMYTH_POLYNOMIAL) == 1
    # a_1 = a_{n-1} = 0 agree, the first disagreement is at i = 2
    assert detect_k(parse_polynomial("x^5+x^3+3*x^2+1")) == 2
    assert detect_k(parse_polynomial("2*x^2+1")) == 2


def test_detect_k_reciprocal():
    assert detect_k(parse_polynomial("x^2+3*x+1")) is None
    assert detect_k(parse_polynomial("x^2-1")) is None
    assert detect_k(parse_polynomial("x^3-2*x^2+2*x-1")) is None
    assert detect_k(IntPolynomial.of(4)) is None


def test_detect_k_preconditions():
    with pytest.raises(ZeroPolynomialError):
        detect_k(ZERO)

    with pytest.raises(PreconditionError):
        detect_k(IntPolynomial.of(0, 1, 1))


def test_compute_alpha():
    assert compute_alpha(SHARP_EXAMPLE, 1) == 2
    assert compute_alpha(SMYTH_POLYNOMIAL, 1) == 1

    with pytest.raises(InvalidParametersError):
        compute_alpha(SHARP_EXAMPLE, 2)


def test_trivial_bound():
    assert trivial_bound(parse_polynomial("3*x^2+x-2")) == 3
    assert trivial_bound(parse_polynomial("x^2+x-5")) == 5


def test_theorem_bound_sharp_example():
    profile = theorem_bound(SHARP_EXAMPLE)

    assert profile.k == 1
    assert profile.alpha == 2
    assert profile.theorem_applicable
    assert profile.bound_exact.alpha == 2
    assert profile.bound_exact.discriminant == 20
    assert profile.bound_exact.denominator == 4
    assert abs(profile.bound_value - GOLDEN_RATIO) < 1e-15
    assert profile.triviality is Triviality.NONTRIVIAL
    assert golden_ratio_consequence(profile)


def test_theorem_bound_smyth():
    profile = theorem_bound(SMYTH_POLYNOMIAL)

    assert profile.alpha == 1
    assert abs(profile.bound_value - (1 + math.sqrt(17)) / 4) < 1e-15
    assert profile.triviality is Triviality.NONTRIVIAL
    assert not golden_ratio_consequence(profile)
    assert mahler_measure(SMYTH_POLYNOMIAL).measure >= profile.bound_value


def test_theorem_bound_not_applicable_when_2k_exceeds_n():
    profile = theorem_bound(parse_polynomial("2*x^2+1"))

    assert profile.k == 2
    assert not profile.theorem_applicable
    assert profile.bound_exact is None
    assert profile.bound_value is None
    assert profile.triviality is Triviality.NOT_APPLICABLE


def test_theorem_bound_reciprocal_degenerates():
    profile = theorem_bound(parse_polynomial("x^2+3*x+1"))

    assert profile.k is None
    assert profile.alpha is None
    assert not profile.theorem_applicable
    assert profile.triviality is Triviality.NOT_APPLICABLE
    # alpha = 0 leaves sqrt(|a_0 a_n|), which is max(|a_0|, |a_n|) when a_0 = a_n
    assert profile.bound_exact.alpha == 0
    assert profile.bound_exact.at_least(1)
    assert not profile.bound_exact.exceeds(1)
    assert abs(profile.bound_value - 1) < 1e-15


def test_trivial_instances():
    # alpha = 1 does not beat |a_0^2 - a_n^2| = 3
    f = parse_polynomial("2*x^2+x+1")
    profile = theorem_bound(f)

    assert profile.k == 1
    assert profile.alpha == 1
    assert profile.triviality is Triviality.TRIVIAL
    assert classify_triviality(profile) is Triviality.TRIVIAL
    assert not bound_exceeds(profile, profile.trivial_bound)


def test_exact_bound_comparisons():
    bound = exact_bound(2, 1, 1)

    assert bound.exceeds(1)
    assert not bound.exceeds(2)
    assert bound.at_least(1)
    assert not bound.at_least(2)

    # (3 + sqrt(9 + 4 * 9 * 2)) / 6 = (3 + 9) / 6 = 2 exactly
    exact = exact_bound(3, 1, 2)
    assert exact.discriminant == 81
    assert exact.at_least(2)
    assert not exact.exceeds(2)


def test_profile_serializes_with_aliases():
    dumped = theorem_bound(SHARP_EXAMPLE).model_dump(mode="json", by_alias=True)

    assert dumped["applicable"] is True
    assert dumped["bound_exact"] == {"alpha": 2, "D": 20, "denom": 4}
    assert dumped["triviality"] == "nontrivial"
    assert abs(dumped["bound_value"] - 1.6180339887) < 1e-10


def _random_applicable(rng: random.Random, max_degree: int, max_height: int) -> IntPolynomial:
    while True:
        degree = rng.randint(2, max_degree)
        coeffs = [rng.randint(-max_height, max_height) for _ in range(degree + 1)]
        if coeffs[0] == 0 or coeffs[-1] == 0:
            continue
        f = IntPolynomial(coeffs=tuple(coeffs))
        k = detect_k(f)
        if k is not None and 2 * k <= f.degree:
            return f


def test_k_is_invariant_under_multiplication_by_x_minus_one():
    rng = random.Random(7)

    for _ in range(200):
        f = _random_applicable(rng, 10, 3)
        k = detect_k(f)

        assert detect_k(multiply(f, X_MINUS_ONE)) == k
        assert detect_k(multiply(f, negate(X_MINUS_ONE))) == k


def test_nontrivial_bound_beats_trivial_bound():
    rng = random.Random(11)

    for _ in range(300):
        profile = theorem_bound(_random_applicable(rng, 8, 4))
        if profile.triviality is Triviality.NONTRIVIAL:
            assert bound_exceeds(profile, profile.trivial_bound)
        else:
            assert not bound_exceeds(profile, profile.trivial_bound)


@pytest.mark.slow
def test_k_invariance_sweep():
    rng = random.Random(1000)

    for _ in range(1000):
        f = _random_applicable(rng, 10, 3)
        assert detect_k(multiply(f, X_MINUS_ONE)) == detect_k(f)


def test_k_and_alpha_are_invariant_under_negation():
    rng = random.Random(13)

    for _ in range(200):
        f = _random_applicable(rng, 10, 3)
        k = detect_k(f)

        assert detect_k(negate(f)) == k
        assert compute_alpha(negate(f), k) == compute_alpha(f, k)
        assert theorem_bound(negate(f)).bound_exact == theorem_bound(f).bound_exact
