"""Tests for the element-level oracles against the closed forms."""

import pytest

from asc_counts.abelian_p_groups import AbelianPGroup, hom_count, tau
from asc_counts.verification import (
    GuardExceededError,
    bruteforce_verdict,
    hom_count_bruteforce,
    jump_profile_count_bruteforce,
    unit_quotient,
)


def test_hom_count_by_enumeration() -> None:
    """|Hom(Z/2 x Z/4, C_2 x C_4)| = 4 * 8."""
    assert hom_count_bruteforce([1, 2], AbelianPGroup.from_cyclic_exponents(2, [1, 2])) == 32


def test_enumeration_agrees_with_formula() -> None:
    """Brute force and the torsion-size product agree on a unit quotient."""
    target = AbelianPGroup.cyclic(3, 2)
    source = unit_quotient(3, 1, 5)
    assert hom_count_bruteforce(source, target) == hom_count(
        AbelianPGroup.from_cyclic_exponents(3, source.cyclic_exponents), target
    )


def test_empty_source() -> None:
    """There is exactly one map out of the trivial group."""
    assert hom_count_bruteforce([], AbelianPGroup.cyclic(2, 1)) == 1


@pytest.mark.parametrize(
    "group",
    [AbelianPGroup.cyclic(2, 2), AbelianPGroup.from_cyclic_exponents(2, [1, 1]), AbelianPGroup.cyclic(3, 1)],
    ids=lambda g: g.spec,
)
@pytest.mark.parametrize("d", [1, 2])
def test_bruteforce_verdict(group: AbelianPGroup, d: int) -> None:
    """|Hom(Gamma^1/Gamma^(k+1), G)| = Q^tau(k) for k <= 12."""
    verdict = bruteforce_verdict(group, d)
    assert verdict.passed
    assert verdict.first_mismatch is None


def test_guard_stops_large_enumerations() -> None:
    """Work beyond the guard raises before anything is enumerated."""
    with pytest.raises(GuardExceededError, match="guard is 10"):
        hom_count_bruteforce([1, 2], AbelianPGroup.from_cyclic_exponents(2, [1, 2]), guard=10)
    with pytest.raises(GuardExceededError):
        jump_profile_count_bruteforce(2, 1, 2, (4, 2), guard=10)


def test_jump_profile_needs_e_exponents() -> None:
    """One exponent per jump."""
    with pytest.raises(ValueError):
        jump_profile_count_bruteforce(2, 1, 2, (1,))


def test_c9_count_at_k6() -> None:
    """Gamma^1/Gamma^7 for p = 3 is Z/9 x Z/9 x Z/3 x Z/3, so there are 9 * 9 * 3 * 3 = 3^tau(6) maps to C_9."""
    assert hom_count_bruteforce(unit_quotient(3, 1, 6), AbelianPGroup.cyclic(3, 2)) == 729


@pytest.mark.parametrize("k", [3, 7, 10])
def test_generator_order_does_not_matter(k: int) -> None:
    """Increasing and decreasing index order give the same count."""
    target = AbelianPGroup.from_cyclic_exponents(2, [1, 2])
    increasing = unit_quotient(2, 1, k).cyclic_exponents
    assert hom_count_bruteforce(increasing, target) == hom_count_bruteforce(tuple(reversed(increasing)), target)
    assert hom_count_bruteforce(increasing, target) == 2 ** tau(target, k)
