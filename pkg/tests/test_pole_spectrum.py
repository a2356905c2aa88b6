"""Tests for pole/zero spectra of factored and dense rational functions."""

import math
from fractions import Fraction

import pytest

from asc_counts.abelian_p_groups import AbelianPGroup
from asc_counts.asymptotics import (
    PoleSpectrumEntry,
    PoleStructureError,
    dense_pole_spectrum,
    factored_pole_spectrum,
    off_lattice_zero_moduli,
    pole_report,
    pole_spectrum,
    poles,
)
from asc_counts.conductor_gf import global_asc_gf, local_asc_gf, local_cond_gf
from asc_counts.series_algebra import FactoredGF
from asc_counts.verification import STANDARD_GROUPS
from asc_counts.zeta_places import zeta_factored


def test_zeta_spectrum() -> None:
    """Z(X) has simple poles at 1/q and 1."""
    assert pole_spectrum(zeta_factored(5)) == [
        PoleSpectrumEntry(radius_exponent=1, count=1, order=1),
        PoleSpectrumEntry(radius_exponent=0, count=1, order=1),
    ]


def test_local_c3_poles() -> None:
    """The pole of 1 - QX cancels against 1 - Q^3 X^3; three simple poles remain at |X| = Q^(-2/3)."""
    spectrum = pole_spectrum(local_asc_gf(AbelianPGroup.cyclic(3, 1), 3))
    assert poles(spectrum) == [PoleSpectrumEntry(radius_exponent=Fraction(2, 3), count=3, order=1)]
    assert [entry.kind for entry in spectrum if entry.order < 0] == ["zero", "zero"]


@pytest.mark.parametrize("group", STANDARD_GROUPS, ids=lambda g: g.spec)
@pytest.mark.parametrize("power", [1, 2])
def test_asc_and_cond_share_their_poles(group: AbelianPGroup, power: int) -> None:
    """F^cond - 1 = X (F^asc - 1) moves no poles."""
    Q = group.p**power
    asc_poles = poles(pole_spectrum(local_asc_gf(group, Q)))
    cond_poles = poles(pole_spectrum(local_cond_gf(group, Q)))
    assert asc_poles == cond_poles


def test_off_circle_zeros_are_reported_apart() -> None:
    """C_4, Q = 2: F^cond = (1 - X)(1 + X + 2X^2 + 4X^3) / (1 - 8X^4); the cubic has roots of unequal size."""
    cond = local_cond_gf(AbelianPGroup.cyclic(2, 2), 2)
    assert pole_spectrum(cond) == [
        PoleSpectrumEntry(radius_exponent=Fraction(3, 4), count=4, order=1),
        PoleSpectrumEntry(radius_exponent=0, count=1, order=-1),
    ]
    moduli = off_lattice_zero_moduli(cond)
    assert len(moduli) == 3
    assert math.prod(moduli) == pytest.approx(0.25)
    assert moduli[-1] - moduli[0] > 1e-3


def test_cond_zeros_on_the_critical_circle() -> None:
    """1 + X + QX^2 has two zeros of absolute value Q^(-1/2)."""
    spectrum = pole_spectrum(local_cond_gf(AbelianPGroup.cyclic(3, 1), 9))
    assert PoleSpectrumEntry(radius_exponent=Fraction(1, 2), count=2, order=-1) in spectrum


@pytest.mark.parametrize(
    "group, innermost",
    [
        (AbelianPGroup(p=2, multiplicities=(2,)), Fraction(1)),
        (AbelianPGroup.cyclic(2, 2), Fraction(3, 4)),
        (AbelianPGroup.cyclic(3, 2), Fraction(8, 9)),
    ],
)
def test_innermost_local_pole_is_a(group: AbelianPGroup, innermost: Fraction) -> None:
    """The innermost local pole sits at |X| = Q^(-a)."""
    assert pole_report(local_asc_gf(group, group.p)).radius_exponent == innermost


@pytest.mark.parametrize("group", [AbelianPGroup.cyclic(3, 1), AbelianPGroup.from_cyclic_exponents(2, [1, 2])])
def test_dense_route_agrees_with_factor_route(group: AbelianPGroup) -> None:
    """Factoring the dense numerator and denominator over QQ gives the same spectrum."""
    f = global_asc_gf(group, group.p)
    assert dense_pole_spectrum(f.numerator_poly(), f.denominator_poly(), f.q) == factored_pole_spectrum(f)


def test_global_c3_pole_report() -> None:
    """Unique simple innermost pole at X = 1/9."""
    report = pole_report(global_asc_gf(AbelianPGroup.cyclic(3, 1), 3))
    assert report.radius_exponent == 2
    assert report.point_count == 1
    assert report.multiplicity == 1
    assert report.pole_location == Fraction(1, 9)


def test_no_poles_is_an_error() -> None:
    """A polynomial has no innermost pole."""
    with pytest.raises(PoleStructureError):
        pole_report(FactoredGF.from_map(2, {(1, 1): 1}))
