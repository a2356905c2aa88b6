"""Tests for places of F_q(T) by degree and the zeta function of the projective line."""

import pytest

from asc_counts.series_algebra import expand
from asc_counts.verification import ZETA_BASES, zeta_identity_verdict
from asc_counts.zeta_places import (
    is_power_of,
    place_counts,
    prime_power_decomposition,
    zeta_factored,
    zeta_value,
)


def test_place_counts_q2() -> None:
    """F_2(T): 3 places of degree 1, then 1, 2, 3, 6 monic irreducibles of degree 2..5."""
    assert place_counts(2, 5).counts == (3, 1, 2, 3, 6)


def test_place_counts_q3_and_q4() -> None:
    """b_1 = q + 1 and b_2 = (q^2 - q)/2."""
    assert place_counts(3, 3).counts == (4, 3, 8)
    assert place_counts(4, 2).counts == (5, 6)


def test_place_table_access() -> None:
    """count(n) is 1-based and csv_rows lists (degree, count)."""
    table = place_counts(3, 3)
    assert table.order == 3
    assert table.count(1) == 4
    assert table.csv_rows() == [(1, 4), (2, 3), (3, 8)]
    with pytest.raises(ValueError):
        table.count(4)


def test_place_counts_reject_bad_input() -> None:
    """q must be a prime power and the order positive."""
    with pytest.raises(ValueError, match="q=6"):
        place_counts(6, 3)
    with pytest.raises(ValueError):
        place_counts(3, 0)


def test_prime_power_decomposition() -> None:
    """q = p^f."""
    assert prime_power_decomposition(8) == (2, 3)
    assert prime_power_decomposition(7) == (7, 1)
    assert is_power_of(3, 27)
    assert not is_power_of(2, 12)
    with pytest.raises(ValueError):
        prime_power_decomposition(1)


def test_zeta_of_projective_line() -> None:
    """Z(X) = 1/((1 - X)(1 - qX)); for q = 3 the coefficients are 1, 4, 13, 40."""
    assert zeta_factored(3).symbolic() == "1 / ((1 - X)(1 - 3X))"
    assert expand(zeta_factored(3), 3).as_integers() == (1, 4, 13, 40)


def test_zeta_value_shifts_both_factors() -> None:
    """Z(q^alpha X^beta) = 1/((1 - q^alpha X^beta)(1 - q^(alpha+1) X^beta))."""
    assert zeta_value(2, 3, 2).factor_map == {(3, 2): -1, (4, 2): -1}


@pytest.mark.parametrize("q", ZETA_BASES)
def test_zeta_identity_holds(q: int) -> None:
    """prod_n (1 - X^n)^(-b_n) agrees with Z(X) through X^30."""
    assert zeta_identity_verdict(q, 30).passed
