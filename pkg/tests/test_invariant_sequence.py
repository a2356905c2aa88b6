"""Tests for AbelianPGroup parsing and the invariant sequences c_i, r_i, a, a'."""

from fractions import Fraction

import pytest

from asc_counts.abelian_p_groups import AbelianPGroup, c_from_ranks, invariant_sequence


def test_parse_and_canonical_spec() -> None:
    """Group specs parse to multiplicities and echo canonically, dropping trailing zeros."""
    group = AbelianPGroup.parse("p=3; m=1, 0, 2")
    assert group.p == 3
    assert group.multiplicities == (1, 0, 2)
    assert group.spec == "p=3;m=1,0,2"
    assert AbelianPGroup.parse("p=2;m=1,0,0").spec == "p=2;m=1"


def test_parse_trivial_group() -> None:
    """An empty multiplicity list is the trivial group."""
    group = AbelianPGroup.parse("p=3;m=")
    assert group.is_trivial
    assert group.order == 1
    assert group.spec == "p=3;m="


@pytest.mark.parametrize("spec", ["p=4;m=1", "p=3;m=1,-1", "q=3;m=1", "p=3;m=1,,2", "p=3"])
def test_parse_rejects_malformed_specs(spec: str) -> None:
    """Malformed specs, non-prime p and negative multiplicities raise ValueError."""
    with pytest.raises(ValueError):
        AbelianPGroup.parse(spec)


def test_parse_error_is_one_line() -> None:
    """Validation failures are reported as a single line naming the spec."""
    with pytest.raises(ValueError) as excinfo:
        AbelianPGroup.parse("p=6;m=1")
    message = str(excinfo.value)
    assert "\n" not in message
    assert "p=6;m=1" in message


def test_group_properties() -> None:
    """Order, exponent, rank and cyclic decomposition of C_2 x C_8^2."""
    group = AbelianPGroup(p=2, multiplicities=(1, 0, 2))
    assert group.order == 2 * 8 * 8
    assert group.exponent == 8
    assert group.rank == 3
    assert group.t == 3
    assert group.cyclic_exponents == (1, 3, 3)
    assert not group.is_cyclic
    assert AbelianPGroup.cyclic(3, 2).is_cyclic


def test_from_cyclic_exponents() -> None:
    """Exponent lists collect into multiplicities; zeros are ignored."""
    group = AbelianPGroup.from_cyclic_exponents(3, [2, 1, 0, 2])
    assert group.multiplicities == (1, 2)


def test_invariants_of_c3() -> None:
    """C_3: c = (0, 1, 2/3), a = 2/3, a' = 2."""
    inv = invariant_sequence(AbelianPGroup.cyclic(3, 1))
    assert inv.c == (0, 1, Fraction(2, 3))
    assert inv.r == (1,)
    assert inv.a == Fraction(2, 3)
    assert inv.a_prime == 2


def test_invariants_of_c9() -> None:
    """C_9: c = (0, 1, 1, 8/9), a = 8/9, a' = 2."""
    inv = invariant_sequence(AbelianPGroup.cyclic(3, 2))
    assert inv.c == (0, 1, 1, Fraction(8, 9))
    assert inv.a == Fraction(8, 9)
    assert inv.a_prime == 2


def test_invariants_of_c2_squared() -> None:
    """C_2^2: c = (0, 2, 1), a' = 3."""
    inv = invariant_sequence(AbelianPGroup(p=2, multiplicities=(2,)))
    assert inv.c == (0, 2, 1)
    assert inv.r == (2,)
    assert inv.a_prime == 3


def test_invariants_of_trivial_group() -> None:
    """The trivial group has c = (0), a = 0, a' = 1."""
    inv = invariant_sequence(AbelianPGroup(p=5))
    assert inv.c == (0,)
    assert inv.r == ()
    assert inv.a == 0
    assert inv.a_prime == 1


@pytest.mark.parametrize(
    "p, multiplicities",
    [(2, (1,)), (2, (0, 1)), (2, (1, 1)), (3, (1, 0, 2)), (3, (2, 1)), (5, (0, 0, 1))],
)
def test_recursive_and_closed_forms_agree(p: int, multiplicities: tuple[int, ...]) -> None:
    """c_i from the recursion equals sum_{j<i} (p-1) p^-j r_j + p^(1-i) r_i for every i >= 1."""
    group = AbelianPGroup(p=p, multiplicities=multiplicities)
    inv = invariant_sequence(group)
    for i in range(1, group.t + 2):
        assert inv.c[i] == c_from_ranks(p, inv.r, i)


def test_c_is_decreasing_after_c1() -> None:
    """c_1 >= c_2 >= ... >= c_{t+1} > 0 and c_i p^i is integral."""
    group = AbelianPGroup(p=3, multiplicities=(1, 2, 1))
    inv = invariant_sequence(group)
    tail = inv.c[1:]
    assert all(later <= earlier for earlier, later in zip(tail, tail[1:], strict=False))
    assert tail[-1] > 0
    assert all((c * 3**i).denominator == 1 for i, c in enumerate(inv.c))
