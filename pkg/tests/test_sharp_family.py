import math

import pytest

from mahlerbound import sharp_family
from mahlerbound.errors import InvalidParametersError
from mahlerbound.nonreciprocal import compute_alpha, detect_k
from mahlerbound.poly import IntPolynomial
from mahlerbound.sharp_family import (
    ExpansionCase,
    SharpFamilyParams,
    closed_form_measure,
    construct,
    expansion_case,
    factored,
    quadratic_root_moduli,
    sampling_grid,
    verify_sharpness,
)

from tests.constants import GOLDEN_RATIO


def params(a, b, c, k, n) -> SharpFamilyParams:
    return SharpFamilyParams(a=a, b=b, c=c, k=k, n=n)


@pytest.mark.parametrize(
    "values, coeffs, case",
    [
        ((1, 1, -1, 1, 5), (1, -1, -1, -1, 1, 1), ExpansionCase.N_GT_4K),
        ((1, 1, -1, 1, 4), (1, -1, -2, 1, 1), ExpansionCase.N_EQ_4K),
        ((2, 3, -2, 1, 5), (2, -3, -2, -2, 3, 2), ExpansionCase.N_GT_4K),
        ((1, 1, -1, 2, 7), (1, 0, -1, -1, -1, 1, 0, 1), ExpansionCase.BETWEEN_3K_4K),
        ((1, 1, -1, 2, 5), (1, -1, -1, 1, -1, 1), ExpansionCase.BETWEEN_2K_3K),
    ],
)
def test_construct(values, coeffs, case):
    p = params(*values)
    f = construct(p)

    assert f.coeffs == coeffs
    assert expansion_case(p) is case
    assert f.leading == p.a
    assert f.constant == -p.c
    assert f[p.k] == -p.b
    assert f[p.n - p.k] == p.b


@pytest.mark.parametrize(
    "values, inequality",
    [
        ((0, 1, -1, 1, 5), "a > 0 > c"),
        ((1, 1, 1, 1, 5), "a > 0 > c"),
        ((1, 0, -3, 1, 5), "a - |b| <= -c <= a + |b|"),
        ((4, 1, -1, 1, 5), "a - |b| <= -c <= a + |b|"),
        ((1, 1, -1, 2, 4), "n > 2k"),
        ((1, 1, -1, 2, 6), "n != 3k"),
    ],
)
def test_invalid_parameters(values, inequality):
    with pytest.raises(InvalidParametersError) as info:
        params(*values)

    assert info.value.inequality == inequality


def test_closed_form_measure():
    assert abs(closed_form_measure(1, 1, -1) - GOLDEN_RATIO) < 1e-15
    assert closed_form_measure(2, 3, -2) == 4
    assert abs(closed_form_measure(3, 2, -2) - (1 + math.sqrt(7))) < 1e-14
    assert closed_form_measure(1, 0, -1) == 1

    with pytest.raises(InvalidParametersError):
        closed_form_measure(1, 0, -3)


def test_quadratic_root_moduli():
    outer, inner = quadratic_root_moduli(2, 3, -2)

    assert outer == 2
    assert inner == 0.5


@pytest.mark.parametrize(
    "values, expected",
    [
        ((1, 1, -1, 1, 5), GOLDEN_RATIO),
        ((2, 3, -2, 1, 5), 4.0),
        ((3, 2, -2, 1, 7), 1 + math.sqrt(7)),
        ((1, -2, -2, 2, 11), 1 + math.sqrt(3)),
    ],
)
def test_verify_sharpness(values, expected):
    report = verify_sharpness(params(*values))

    assert report.applicable
    assert report.expansion_identity
    assert report.k_matches
    assert report.exact_identity
    assert report.root_moduli_consistent
    assert report.sharp
    assert report.max_discrepancy < 1e-12
    assert abs(report.bound - expected) < 1e-12
    assert abs(report.closed_form - expected) < 1e-12


def test_verify_sharpness_reciprocal_member():
    report = verify_sharpness(params(1, 0, -1, 1, 5))

    assert not report.applicable
    assert report.bound is None
    assert report.max_discrepancy is None
    assert not report.sharp
    assert abs(report.numeric_measure - 1) < 1e-12


def test_expansion_matches_factored_product():
    for p in sampling_grid():
        assert construct(p) == factored(p), p


def test_wrong_expansion_is_reported_not_raised(monkeypatch):
    p = params(2, 3, -2, 1, 5)
    monkeypatch.setattr(sharp_family, "construct", lambda _: construct(params(2, 3, -2, 2, 5)))

    report = verify_sharpness(p)

    assert report.applicable
    assert not report.expansion_identity
    assert not report.k_matches
    assert not report.sharp


def test_sharpness_report_serializes():
    dumped = verify_sharpness(params(2, 3, -2, 1, 5)).model_dump(mode="json")

    assert dumped["closed_form"] == 4.0
    assert dumped["expansion_case"] == "n_gt_4k"
    assert dumped["polynomial"] == {"coeffs": [2, -3, -2, -2, 3, 2]}


def test_sampling_grid():
    grid = list(sampling_grid())

    assert len(grid) == len(set(grid))
    assert {expansion_case(p) for p in grid} == set(ExpansionCase)
    assert all(p.n != 3 * p.k and p.n > 2 * p.k for p in grid)
    assert {p.k for p in grid} == {1, 2, 3}


def test_grid_members_have_expected_k_and_alpha():
    for p in sampling_grid():
        if p.b == 0:
            continue
        f = construct(p)

        assert detect_k(f) == p.k
        assert compute_alpha(f, p.k) == abs(p.b * (p.a - p.c))


def test_unit_endpoint_members_have_even_alpha():
    for p in sampling_grid():
        if p.a == 1 and p.c == -1 and p.b != 0:
            assert compute_alpha(construct(p), p.k) % 2 == 0


def test_one_member_per_case_is_sharp():
    seen: dict[ExpansionCase, SharpFamilyParams] = {}
    for p in sampling_grid():
        if p.b != 0:
            seen.setdefault(expansion_case(p), p)

    for p in seen.values():
        report = verify_sharpness(p)
        assert report.sharp
        assert report.max_discrepancy < 1e-9


@pytest.mark.slow
def test_whole_grid_is_sharp():
    for p in sampling_grid():
        report = verify_sharpness(p)
        if p.b == 0:
            assert not report.applicable
            continue

        assert report.expansion_identity, p
        assert report.k_matches, p
        assert report.exact_identity, p
        assert report.root_moduli_consistent, p
        assert report.max_discrepancy < 1e-9, p


def test_constructed_polynomial_type():
    assert isinstance(construct(params(1, 1, -1, 1, 5)), IntPolynomial)
