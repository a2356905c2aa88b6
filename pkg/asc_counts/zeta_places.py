"""Places of F_q(T) by degree, the zeta function of the projective line, and Euler products over places."""

import logging
from functools import lru_cache
from typing import Callable

from pydantic import BaseModel, ConfigDict, Field
from sympy import divisors, factorint, mobius

from asc_counts.exact_types import ExactInt
from asc_counts.series_algebra import (
    FactoredGF,
    SeriesPreconditionError,
    TruncatedSeries,
    expand,
    pow_series,
    product_of,
    substitute,
)
from asc_counts.trace import TRACE

logger = logging.getLogger(__name__)

LocalFamily = Callable[[int, int], TruncatedSeries]


def prime_power_decomposition(q: int) -> tuple[int, int]:
    """(p, f) with q = p^f; raises ValueError when q is not a prime power."""
    factors = factorint(q) if q >= 2 else {}
    if len(factors) != 1:
        raise ValueError(f"q={q} is not a prime power")
    ((p, f),) = factors.items()
    return int(p), int(f)


def is_power_of(p: int, q: int) -> bool:
    try:
        return prime_power_decomposition(q)[0] == p
    except ValueError:
        return False


class PlaceTable(BaseModel):
    """b_n = number of places of F_q(T) of degree n, for n = 1..N."""

    model_config = ConfigDict(frozen=True)

    q: int = Field(ge=2)
    counts: tuple[ExactInt, ...]

    @property
    def order(self) -> int:
        return len(self.counts)

    def count(self, degree: int) -> int:
        if not 1 <= degree <= self.order:
            raise ValueError(f"Degree {degree} outside the table range 1..{self.order}")
        return self.counts[degree - 1]

    def csv_rows(self) -> list[tuple[int, int]]:
        return [(n, b) for n, b in enumerate(self.counts, start=1)]


def _irreducible_count(q: int, n: int) -> int:
    return sum(int(mobius(d)) * q ** (n // d) for d in divisors(n)) // n


def zeta_factored(q: int) -> FactoredGF:
    """Z(X) = 1 / ((1 - X)(1 - qX))."""
    return FactoredGF.from_map(q, {(0, 1): -1, (1, 1): -1})


def zeta_value(q: int, alpha: int, beta: int) -> FactoredGF:
    """Z(q^alpha X^beta) = 1 / ((1 - q^alpha X^beta)(1 - q^(alpha+1) X^beta))."""
    return FactoredGF.from_map(q, {(alpha, beta): -1, (alpha + 1, beta): -1})


@lru_cache(maxsize=64)
def place_counts(q: int, order: int) -> PlaceTable:
    """Count places per degree and check prod_n (1 - X^n)^(-b_n) against Z(X) before returning."""
    prime_power_decomposition(q)
    if order < 1:
        raise ValueError(f"Place table order must be >= 1, got {order}")
    logger.log(TRACE, f"place_counts(q={q}, order={order})")

    counts = [q + 1] + [_irreducible_count(q, n) for n in range(2, order + 1)]

    series = TruncatedSeries.one(order)
    for n, b in enumerate(counts, start=1):
        factor = TruncatedSeries.from_coefficients([1] + [0] * (n - 1) + [-1], order)
        series = series * pow_series(factor, -b)
    expected = expand(zeta_factored(q), order)
    mismatch = series.first_mismatch(expected)
    if mismatch is not None:
        raise ArithmeticError(f"Place counts for q={q} fail the zeta identity at X^{mismatch}")

    return PlaceTable(q=q, counts=tuple(counts))


def euler_product(local: LocalFamily, q: int, order: int) -> TruncatedSeries:
    """prod over places P of local(Q_P)(X^deg P), grouped by degree: prod_n local(q^n)(X^n)^(b_n)."""
    logger.log(TRACE, f"euler_product(q={q}, order={order})")
    result = TruncatedSeries.one(order)
    if order == 0:
        return result

    table = place_counts(q, order)
    for n in range(1, order + 1):
        factor = local(q**n, order // n)
        if factor[0] != 1:
            raise SeriesPreconditionError(f"Local factor at Q={q**n} has constant term {factor[0]}, expected 1")
        result = result * pow_series(substitute(factor, n, order=order), table.count(n))
    return result


def globalize_local(f_local: FactoredGF, q: int) -> FactoredGF:
    """Global Euler product of a local GF given in Q: each (1 - Q^alpha X^beta)^e becomes Z(q^alpha X^beta)^(-e)."""
    return product_of(q, (zeta_value(q, f.alpha, f.beta) ** -f.exp for f in f_local.factors))
