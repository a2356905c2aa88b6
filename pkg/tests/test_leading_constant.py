"""Tests for the leading asymptotic constant of the global counts."""

from fractions import Fraction

import pytest

from asc_counts.abelian_p_groups import AbelianPGroup, invariant_sequence
from asc_counts.asymptotics import asymptotic_report, leading_constant
from asc_counts.conductor_gf import global_asc_gf
from asc_counts.series_algebra import expand
from asc_counts.verification import STANDARD_GROUPS


def test_c3_constant() -> None:
    """C_3 over F_3(T): a_n ~ (4/5) 9^n."""
    assert leading_constant(AbelianPGroup.cyclic(3, 1), 3) == Fraction(4, 5)


def test_c2_constant() -> None:
    """C_2 over F_2(T): a_n ~ (3/7) 4^n."""
    assert leading_constant(AbelianPGroup.cyclic(2, 1), 2) == Fraction(3, 7)


def test_report_fields() -> None:
    """The report names the pole q^(-a') and the constant."""
    report = asymptotic_report(AbelianPGroup.cyclic(3, 1), 3)
    assert report.radius_exponent == 2
    assert report.pole_location == Fraction(1, 9)
    assert report.leading_constant == Fraction(4, 5)
    assert report.model_dump(mode="json")["leading_constant"] == "4/5"


@pytest.mark.parametrize("group", STANDARD_GROUPS, ids=lambda g: g.spec)
def test_innermost_pole_is_at_a_prime(group: AbelianPGroup) -> None:
    """The unique simple innermost pole sits at q^(-a'), a' = 1 + rank."""
    report = asymptotic_report(group, group.p)
    assert report.radius_exponent == invariant_sequence(group).a_prime
    assert report.point_count == 1
    assert report.multiplicity == 1
    assert report.leading_constant is not None
    assert report.leading_constant > 0


def test_ratio_converges_to_the_constant() -> None:
    """a_40 / (C 9^40) is within 10^-3 of 1 for C_3, q = 3."""
    series = expand(global_asc_gf(AbelianPGroup.cyclic(3, 1), 3), 40)
    ratio = series[40] / (Fraction(4, 5) * 9**40)
    assert abs(ratio - 1) <= Fraction(1, 10**3)


def test_trivial_group_has_no_asymptotics() -> None:
    """A constant generating function has no pole."""
    with pytest.raises(ValueError):
        leading_constant(AbelianPGroup(p=2), 2)


@pytest.mark.parametrize("group", STANDARD_GROUPS, ids=lambda g: g.spec)
def test_ratio_converges_for_every_small_group(group: AbelianPGroup) -> None:
    """a_40 / (C q^(40 a')) is within 10^-3 of 1 for every test group, q = p."""
    q = group.p
    a_prime = invariant_sequence(group).a_prime
    series = expand(global_asc_gf(group, q), 40)
    ratio = series[40] / (leading_constant(group, q) * q ** (40 * a_prime))
    assert abs(ratio - 1) <= Fraction(1, 10**3)
