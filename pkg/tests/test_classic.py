import math
from fractions import Fraction

import numpy as np
import pytest

from bkhash.classic import (
    conjecture_bound,
    conjecture_term,
    dvj_bound,
    dvj_side_margin,
    fk_bound,
    km_bound,
    km_term,
    rate_bound_from_M,
)
from bkhash.simplex import ParameterError
from bkhash.tables import round_up_value

EDGE = 1e-5 + 1e-9


def test_fk_hand_values():
    assert fk_bound(3, 3).value == pytest.approx(2 / 3, rel=1e-15)
    assert fk_bound(4, 4).value == pytest.approx(0.375, rel=1e-15)


def test_fk_decreasing_along_diagonal():
    vals = [fk_bound(b, b).value for b in range(3, 20)]
    assert all(v > 0 for v in vals)
    assert all(a > c for a, c in zip(vals, vals[1:]))


@pytest.mark.parametrize("b,k", [(2, 3), (4, 5), (5, 2)])
def test_inadmissible(b, k):
    with pytest.raises(ParameterError):
        fk_bound(b, k)


@pytest.mark.parametrize(
    "b,k,expected,j",
    [(5, 4, 0.73697, 0), (6, 6, 0.09260, 4), (11, 10, 0.01343, 8)],
)
def test_km_examples(b, k, expected, j):
    rep = km_bound(b, k)
    assert rep.intermediates["argmin_j"] == j == rep.params.j
    assert abs(round_up_value(rep.value, 5) - expected) <= EDGE


def test_km_j0_is_log_ratio():
    assert km_bound(5, 4).value == pytest.approx(math.log2(5 / 3), rel=1e-15)


def test_km_last_term_equals_fk():
    for b in range(3, 12):
        for k in range(3, b + 1):
            assert abs(km_term(b, k, k - 2) - fk_bound(b, k).value) <= 1e-14
            assert km_bound(b, k, (k - 2, k - 2)).value == km_term(b, k, k - 2)


def test_km_range_matches_brute_minimum():
    for b, k in [(7, 5), (9, 6), (10, 8)]:
        terms = [km_term(b, k, j) for j in range(k - 1)]
        assert km_bound(b, k).value == min(terms)
    with pytest.raises(ParameterError):
        km_bound(6, 5, (4, 9))


@pytest.mark.parametrize("b,k,expected", [(5, 4, 0.57303), (6, 6, 0.21170), (8, 8, 0.16323)])
def test_dvj_examples(b, k, expected):
    assert abs(round_up_value(dvj_bound(b, k).value, 5) - expected) <= EDGE


def test_dvj_needs_k4():
    with pytest.raises(ParameterError):
        dvj_bound(5, 3)


def test_dvj_side_condition_holds_on_range():
    for b in range(4, 17):
        for k in range(4, b + 1):
            assert dvj_side_margin(b, k) > 0


def test_conjecture_at_66_is_5_over_59():
    rep = conjecture_bound(6, 6)
    assert rep.value == pytest.approx(5 / 59, rel=1e-14)
    assert any("CONJECTURE" in n for n in rep.notes)
    assert conjecture_term(6, 6, 4) == pytest.approx(rate_bound_from_M(6, 6, 4, 5 / 27).value, rel=1e-14)


def test_conjecture_55_term_by_hand():
    expected = 1 / (1 / math.log2(5 / 2) + 5**4 / 120)
    assert conjecture_term(5, 5, 3) == pytest.approx(expected, rel=1e-14)
    rep = conjecture_bound(9, 7)
    assert rep.value == min(conjecture_term(9, 7, j) for j in range(2, 6))


def test_rate_from_M_examples():
    assert rate_bound_from_M(6, 6, 4, 5 / 27).value == pytest.approx(5 / 59, rel=1e-14)
    assert rate_bound_from_M(7, 7, 5, 0.0861594).value == pytest.approx(0.0408975, abs=5e-8)
    assert rate_bound_from_M(5, 5, 3, 0.3873676).value == pytest.approx(0.1689325, abs=5e-8)


def test_rate_from_M_exact_rational_at_66():
    # log2((b-j)/(k-j-1)) = 1 and log2(b/(j-1)) = 1 at (6, 6, 4)
    M = Fraction(5, 27)
    assert 1 / (2 / M + 1) == Fraction(5, 59)


def test_rate_from_M_strictly_increasing():
    for b, k, j in [(5, 5, 3), (8, 8, 6), (11, 10, 8), (9, 7, 2)]:
        vals = [rate_bound_from_M(b, k, j, M).value for M in np.linspace(1e-6, 2.0, 400)]
        assert all(a < c for a, c in zip(vals, vals[1:]))


@pytest.mark.parametrize("j,M", [(1, 0.3), (4, 0.3), (3, 0.0), (3, -1.0)])
def test_rate_from_M_rejects(j, M):
    with pytest.raises(ParameterError):
        rate_bound_from_M(5, 5, j, M)


def test_report_serialises():
    d = km_bound(6, 5).as_dict()
    assert d["method"] == "km" and d["b"] == 6 and d["intermediates"]["argmin_j"] == 3
