"""Tests for the global Artin-Schreier conductor generating function of F_q(T)."""

import pytest

from asc_counts.abelian_p_groups import AbelianPGroup
from asc_counts.conductor_gf import global_asc_gf, local_asc_gf
from asc_counts.series_algebra import FactoredGF, expand
from asc_counts.verification import STANDARD_GROUPS
from asc_counts.zeta_places import globalize_local


def test_global_c3_at_q3() -> None:
    """(1 - X)(1 - 81X^3) / ((1 - 9X)(1 - 9X^3))."""
    f = global_asc_gf(AbelianPGroup.cyclic(3, 1), 3)
    assert f == FactoredGF.from_map(3, {(0, 1): 1, (4, 3): 1, (2, 1): -1, (2, 3): -1})
    assert f.symbolic() == "(1 - X)(1 - 81X^3) / ((1 - 9X)(1 - 9X^3))"


@pytest.mark.parametrize("p, e", [(3, 1), (3, 2), (2, 2), (2, 3)])
def test_global_cyclic_closed_form(p: int, e: int) -> None:
    """C_{p^e}: (1 - X)(1 - q^(p^e + 1) X^(p^e)) / ((1 - q^2 X)(1 - q^(p^e - 1) X^(p^e)))."""
    pe = p**e
    expected = {(0, 1): 1, (pe + 1, pe): 1, (2, 1): -1, (pe - 1, pe): -1}
    for q in (p, p**2):
        assert global_asc_gf(AbelianPGroup.cyclic(p, e), q) == FactoredGF.from_map(q, expected)


@pytest.mark.parametrize("group", STANDARD_GROUPS, ids=lambda g: g.spec)
def test_global_is_the_globalized_local(group: AbelianPGroup) -> None:
    """Each local factor (1 - Q^alpha X^beta)^e becomes Z(q^alpha X^beta)^(-e)."""
    q = group.p
    assert global_asc_gf(group, q) == globalize_local(local_asc_gf(group, q), q)


def test_first_coefficients_of_c3() -> None:
    """a_0 = 1 and a_1 = (q + 1)(Q - 1) = 8 from the four degree-1 places."""
    assert expand(global_asc_gf(AbelianPGroup.cyclic(3, 1), 3), 1).as_integers() == (1, 8)


def test_trivial_group_is_constant() -> None:
    """The empty product."""
    f = global_asc_gf(AbelianPGroup(p=3), 3)
    assert f.is_one
    assert expand(f, 4).as_integers() == (1, 0, 0, 0, 0)


def test_coefficients_are_non_negative_integers() -> None:
    """Counts of maps are non-negative integers."""
    for group in STANDARD_GROUPS:
        assert all(c >= 0 for c in expand(global_asc_gf(group, group.p), 12).as_integers())
