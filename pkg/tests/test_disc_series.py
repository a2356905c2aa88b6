"""Tests for discriminant series of cyclic extensions of prime degree."""

import logging

import pytest

from asc_counts.abelian_p_groups import AbelianPGroup
from asc_counts.conductor_gf import disc_extends_remark, disc_series, global_cond_series
from asc_counts.series_algebra import substitute


def test_c3_disc_is_cond_at_x_squared() -> None:
    """For C_3, F^disc(X) = F^cond(X^2)."""
    group = AbelianPGroup.cyclic(3, 1)
    disc = disc_series(group, 3, 8)
    assert disc == substitute(global_cond_series(group, 3, 4), 2, order=8)
    assert disc.as_integers()[:5] == (1, 0, 0, 0, 8)


def test_c2_disc_equals_cond() -> None:
    """p - 1 = 1: the discriminant and conductor series coincide."""
    group = AbelianPGroup.cyclic(2, 1)
    assert disc_series(group, 2, 8) == global_cond_series(group, 2, 8)


def test_disc_needs_cyclic_of_prime_order() -> None:
    """C_9 and C_3^2 are refused."""
    with pytest.raises(ValueError, match="cyclic group of prime order"):
        disc_series(AbelianPGroup.cyclic(3, 2), 3, 4)
    with pytest.raises(ValueError):
        disc_series(AbelianPGroup(p=3, multiplicities=(2,)), 3, 4)


def test_disc_beyond_c2_and_c3_warns(caplog: pytest.LogCaptureFixture) -> None:
    """C_5 is computed with multiplier 4 and flagged."""
    group = AbelianPGroup.cyclic(5, 1)
    assert disc_extends_remark(group)
    assert not disc_extends_remark(AbelianPGroup.cyclic(3, 1))
    with caplog.at_level(logging.WARNING, logger="asc_counts.conductor_gf"):
        series = disc_series(group, 5, 8)
    assert series.as_integers()[:5] == (1, 0, 0, 0, 0)
    assert any(record.levelno == logging.WARNING for record in caplog.records)
