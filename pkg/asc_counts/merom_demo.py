"""The C_3 conductor series against its meromorphic approximants.

The local conductor GF (1 - X)(1 + X + QX^2)/(1 - Q^2 X^3) is approximated by
H_A = (1 - X)(1 + QX^2) prod_{a=1..A} (1 - Q^(a-1) X^(2a-1))^((-1)^a) / (1 - Q^2 X^3), whose global Euler
product is a finite ratio of zeta values. The new poles and zeros that appear with each A sit at radii
q^(-a/(2a-1)), which accumulate on |X| = q^(-1/2).
"""

import logging
from fractions import Fraction
from math import gcd

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from sympy import cancel

from asc_counts.abelian_p_groups import AbelianPGroup
from asc_counts.asymptotics import factored_pole_spectrum
from asc_counts.conductor_gf import global_cond_series, local_cond_gf
from asc_counts.exact_types import ExactRational
from asc_counts.series_algebra import X, FactoredGF, TruncatedSeries, expand, product_of
from asc_counts.trace import TRACE
from asc_counts.zeta_places import euler_product, zeta_value

logger = logging.getLogger(__name__)

C3 = AbelianPGroup(p=3, multiplicities=(1,))

ROOT_MODULUS_TOLERANCE = 1e-9
GROWTH_MARGIN = 10


def _sign(a: int) -> int:
    return 1 if a % 2 == 0 else -1


def h_approx(Q: int, A: int) -> FactoredGF:
    """H_A at residue size Q, with 1 + QX^2 stored as (1 - Q^2 X^4)/(1 - QX^2)."""
    if A < 1:
        raise ValueError(f"Approximation depth A={A} must be >= 1")
    factors = {(0, 1): 1, (2, 4): 1, (1, 2): -1, (2, 3): -1}
    for a in range(1, A + 1):
        key = (a - 1, 2 * a - 1)
        factors[key] = factors.get(key, 0) + _sign(a)
    return FactoredGF.from_map(Q, factors)


def zeta_ratio_global(q: int, A: int) -> FactoredGF:
    """Z(qX^2) Z(q^2X^3) / (Z(X) Z(q^2X^4) prod_{a=1..A} Z(q^(a-1)X^(2a-1))^((-1)^a))."""
    if A < 1:
        raise ValueError(f"Approximation depth A={A} must be >= 1")
    pieces = [zeta_value(q, 1, 2), zeta_value(q, 2, 3), zeta_value(q, 0, 1) ** -1, zeta_value(q, 2, 4) ** -1]
    pieces += [zeta_value(q, a - 1, 2 * a - 1) ** -_sign(a) for a in range(1, A + 1)]
    return product_of(q, pieces)


def approximant_euler_product_matches(q: int, A: int, order: int) -> int:
    """Largest n <= order with the Euler product of H_A equal to the zeta ratio through X^n (-1: a_0 differs)."""
    product = euler_product(lambda Q, n: expand(h_approx(Q, A), n), q, order)
    mismatch = product.first_mismatch(expand(zeta_ratio_global(q, A), order))
    return order if mismatch is None else mismatch - 1


def quotient_identity_holds(Q: int, A: int) -> bool:
    """F^cond_local / H_A == (1 + X + QX^2) / ((1 + QX^2) prod_a (1 - Q^(a-1) X^(2a-1))^((-1)^a))."""
    cond = local_cond_gf(C3, Q)
    h = h_approx(Q, A)
    lhs = (cond.numerator_poly() * h.denominator_poly()).as_expr() / (
        cond.denominator_poly() * h.numerator_poly()
    ).as_expr()
    rhs = 1 + X + Q * X**2
    rhs_denominator = 1 + Q * X**2
    for a in range(1, A + 1):
        rhs_denominator *= (1 - Q ** (a - 1) * X ** (2 * a - 1)) ** _sign(a)
    return cancel(lhs - rhs / rhs_denominator) == 0


def inner_factors_cancel(Q: int, A: int) -> bool:
    """The factored part of F^cond_local / H_A has no factor with roots inside |X| < Q^(-1/2)."""
    quotient = local_cond_gf(C3, Q).factored / h_approx(Q, A)
    return all(factor.ratio <= Fraction(1, 2) for factor in quotient.factors)


class RootCheck(BaseModel):
    """Absolute values of the roots of 1 + X + QX^2 against Q^(-1/2)."""

    model_config = ConfigDict(frozen=True)

    Q: int
    moduli: tuple[float, ...]
    expected: float
    passed: bool


def quadratic_root_check(Q: int) -> RootCheck:
    moduli = tuple(float(m) for m in np.abs(np.roots([Q, 1, 1])))
    expected = Q**-0.5
    passed = 1 - 4 * Q < 0 and all(abs(m - expected) <= ROOT_MODULUS_TOLERANCE for m in moduli)
    return RootCheck(Q=Q, moduli=moduli, expected=expected, passed=passed)


class ApproximantReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    A: int = Field(ge=1)
    zeta_ratio: FactoredGF
    pole_radii: tuple[ExactRational, ...]
    new_radius_exponent: ExactRational
    new_radius: float
    new_radius_kind: str
    match_order: int
    quotient_identity: bool
    inner_factors_cancel: bool

    @property
    def epsilon(self) -> Fraction:
        return Fraction(1, self.A)


class PoleAccumulationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    q: int
    order: int
    limit_radius: float
    approximants: tuple[ApproximantReport, ...]
    radii_monotone: bool
    fractions_reduced_and_distinct: bool
    root_checks: tuple[RootCheck, ...]
    growth_proxy_holds: bool

    @property
    def passed(self) -> bool:
        return (
            self.radii_monotone
            and self.fractions_reduced_and_distinct
            and all(check.passed for check in self.root_checks)
            and all(r.match_order == self.order for r in self.approximants)
            and all(r.quotient_identity and r.inner_factors_cancel for r in self.approximants)
            and self.growth_proxy_holds
        )


def _new_radius_kind(q: int, A: int) -> str:
    """Whether the radius A/(2A-1) carries a pole or a zero of the zeta ratio."""
    s = Fraction(A, 2 * A - 1)
    for entry in factored_pole_spectrum(zeta_ratio_global(q, A)):
        if entry.radius_exponent == s:
            return entry.kind
    return "none"


def growth_proxy_holds(cond: TruncatedSeries, q: int, A: int) -> bool:
    """|c_n| <= 10 q^(n(1+1/A)/2) for the coefficients c_n of F^cond_global / zeta_ratio.

    Checked as |c_n|^(2A) <= 10^(2A) q^(n(A+1)) in integers.
    """
    quotient = (cond * expand(zeta_ratio_global(q, A) ** -1, cond.order)).as_integers()
    return all(abs(c) ** (2 * A) <= GROWTH_MARGIN ** (2 * A) * q ** (n * (A + 1)) for n, c in enumerate(quotient))


def approximant_report(q: int, A: int, order: int) -> ApproximantReport:
    radii = []
    for a in range(1, A + 1):
        radii += [Fraction(a, 2 * a - 1), Fraction(a - 1, 2 * a - 1)]
    s = Fraction(A, 2 * A - 1)
    return ApproximantReport(
        A=A,
        zeta_ratio=zeta_ratio_global(q, A),
        pole_radii=tuple(radii),
        new_radius_exponent=s,
        new_radius=float(q) ** -float(s),
        new_radius_kind=_new_radius_kind(q, A),
        match_order=approximant_euler_product_matches(q, A, order),
        quotient_identity=quotient_identity_holds(q, A),
        inner_factors_cancel=inner_factors_cancel(q, A),
    )


def pole_accumulation_report(q: int, A_max: int, order: int = 20) -> PoleAccumulationReport:
    if A_max < 2:
        raise ValueError(f"A_max={A_max} must be >= 2")
    logger.log(TRACE, f"pole_accumulation_report(q={q}, A_max={A_max}, order={order})")

    approximants = tuple(approximant_report(q, A, order) for A in range(1, A_max + 1))
    exponents = [r.new_radius_exponent for r in approximants]
    monotone = all(later < earlier for earlier, later in zip(exponents, exponents[1:], strict=False)) and all(
        s > Fraction(1, 2) for s in exponents
    )
    reduced = all(gcd(A, 2 * A - 1) == 1 for A in range(1, A_max + 1)) and len(set(exponents)) == len(exponents)
    cond = global_cond_series(C3, q, order)

    report = PoleAccumulationReport(
        q=q,
        order=order,
        limit_radius=float(q) ** -0.5,
        approximants=approximants,
        radii_monotone=monotone,
        fractions_reduced_and_distinct=reduced,
        root_checks=tuple(quadratic_root_check(q**k) for k in (1, 2, 3)),
        growth_proxy_holds=all(growth_proxy_holds(cond, q, A) for A in range(1, A_max + 1)),
    )
    logger.info(f"pole accumulation for q={q}, A <= {A_max}: {'passed' if report.passed else 'FAILED'}")
    return report
