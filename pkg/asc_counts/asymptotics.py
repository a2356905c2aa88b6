"""Pole and zero spectra of rational generating functions, the leading asymptotic constant of the
global Artin-Schreier counts, and exact closed formulas for coefficients."""

import logging
from fractions import Fraction
from math import lcm
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from sympy import Poly, Rational, Symbol, divisors, factorial, integer_nthroot, multiplicity, totient

from asc_counts.abelian_p_groups import AbelianPGroup, invariant_sequence
from asc_counts.conductor_gf import ConductorGF, global_asc_gf
from asc_counts.exact_types import ExactInt, ExactRational
from asc_counts.series_algebra import X, FactoredGF
from asc_counts.trace import TRACE
from asc_counts.zeta_places import prime_power_decomposition

logger = logging.getLogger(__name__)

K = Symbol("k")

ROOT_MODULUS_RTOL = 1e-6


class PoleStructureError(ValueError):
    pass


class PoleSpectrumEntry(BaseModel):
    """`count` points of absolute value q^(-radius_exponent), each a pole of order `order` (zero if negative)."""

    model_config = ConfigDict(frozen=True)

    radius_exponent: ExactRational
    count: ExactInt = Field(ge=1)
    order: ExactInt

    @property
    def kind(self) -> str:
        return "pole" if self.order > 0 else "zero"


class PoleReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    radius_exponent: ExactRational
    point_count: ExactInt
    multiplicity: ExactInt
    pole_location: Optional[ExactRational] = None
    leading_constant: Optional[ExactRational] = None


def _merge(orders: dict[tuple[Fraction, int], int]) -> list[PoleSpectrumEntry]:
    """Collapse (radius, order) -> count into entries sorted innermost first."""
    merged: dict[tuple[Fraction, int], int] = {}
    for (s, order), count in orders.items():
        if order != 0:
            merged[(s, order)] = merged.get((s, order), 0) + count
    return [
        PoleSpectrumEntry(radius_exponent=s, count=count, order=order)
        for (s, order), count in sorted(merged.items(), key=lambda item: (-item[0][0], -item[0][1]))
    ]


def factored_pole_spectrum(f: FactoredGF) -> list[PoleSpectrumEntry]:
    """Spectrum read off the factor data.

    The roots of 1 - q^alpha X^beta are q^(-alpha/beta) times the beta-th roots of unity. Roots of unity of
    exact order d are shared by every factor with the same ratio alpha/beta and d | beta, so orders add per
    class (alpha/beta, d) and each class holds totient(d) points.
    """
    classes: dict[tuple[Fraction, int], int] = {}
    for factor in f.factors:
        for d in divisors(factor.beta):
            key = (factor.ratio, int(d))
            classes[key] = classes.get(key, 0) - factor.exp
    counted: dict[tuple[Fraction, int], int] = {}
    for (s, d), order in classes.items():
        counted[(s, order)] = counted.get((s, order), 0) + int(totient(d))
    return _merge(counted)


def _poly_fraction(value: Rational) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def _root_moduli(factor: Poly) -> np.ndarray:
    return np.abs(np.roots([float(c) for c in factor.all_coeffs()]))


def _radius_exponent(factor: Poly, q: int) -> Optional[Fraction]:
    """s with every root of the irreducible factor at absolute value q^(-s), or None if no such s exists."""
    p, f = prime_power_decomposition(q)
    tail = _poly_fraction(factor.TC())
    if tail == 0:
        raise PoleStructureError(f"Factor {factor.as_expr()} vanishes at X = 0")
    ratio = abs(_poly_fraction(factor.LC()) / tail)
    k = int(multiplicity(p, ratio.numerator)) if ratio.denominator == 1 and ratio.numerator > 1 else 0
    if ratio != p**k:
        return None

    s = Fraction(k, f * factor.degree())
    if not np.allclose(_root_moduli(factor), float(q) ** -float(s), rtol=ROOT_MODULUS_RTOL):
        return None
    return s


def _reduced(numerator: Poly, denominator: Poly) -> tuple[Poly, Poly]:
    common = numerator.gcd(denominator)
    numerator, denominator = numerator.quo(common), denominator.quo(common)
    tail = denominator.TC()
    return numerator.quo_ground(tail), denominator.quo_ground(tail)


def dense_pole_spectrum(numerator: Poly, denominator: Poly, q: int) -> list[PoleSpectrumEntry]:
    """Spectrum of numerator/denominator by factoring both over QQ after cancelling common factors.

    Poles come from the reduced denominator, whose factors all divide some 1 - q^alpha X^beta and so sit on
    circles of radius a rational power of q. Numerator factors with roots off those circles carry no exact
    radius; they are left out here and reported by off_lattice_zero_moduli.
    """
    numerator, denominator = _reduced(numerator.set_domain("QQ"), denominator.set_domain("QQ"))
    orders: dict[tuple[Fraction, int], int] = {}
    for poly, sign in ((denominator, 1), (numerator, -1)):
        for factor, m in poly.factor_list()[1]:
            s = _radius_exponent(factor, q)
            if s is None:
                if sign > 0:
                    raise PoleStructureError(
                        f"Roots of denominator factor {factor.as_expr()} are not on a circle of radius a power of {q}"
                    )
                logger.debug(f"zeros of {factor.as_expr()} are off the q-power circles")
                continue
            key = (s, sign * m)
            orders[key] = orders.get(key, 0) + factor.degree()
    return _merge(orders)


def off_lattice_zero_moduli(f: ConductorGF) -> list[float]:
    """Absolute values, with multiplicity and sorted ascending, of the zeros dense_pole_spectrum leaves out."""
    numerator, denominator = _reduced(f.numerator_poly().set_domain("QQ"), f.denominator_poly().set_domain("QQ"))
    moduli: list[float] = []
    for factor, m in numerator.factor_list()[1]:
        if _radius_exponent(factor, f.q) is None:
            moduli += [float(r) for r in _root_moduli(factor)] * m
    return sorted(moduli)


def pole_spectrum(f: FactoredGF | ConductorGF) -> list[PoleSpectrumEntry]:
    logger.log(TRACE, f"pole_spectrum({f.symbolic()})")
    if isinstance(f, ConductorGF):
        return dense_pole_spectrum(f.numerator_poly(), f.denominator_poly(), f.q)
    return factored_pole_spectrum(f)


def poles(spectrum: list[PoleSpectrumEntry]) -> list[PoleSpectrumEntry]:
    return [entry for entry in spectrum if entry.order > 0]


def _rational_power(q: int, s: Fraction) -> Optional[Fraction]:
    """q^(-s) when it is rational."""
    root, exact = integer_nthroot(q ** abs(s.numerator), s.denominator)
    if not exact:
        return None
    value = Fraction(int(root))
    return 1 / value if s >= 0 else value


def pole_report(f: FactoredGF) -> PoleReport:
    """Innermost poles of f: smallest radius, their number and order."""
    spectrum = poles(pole_spectrum(f))
    if not spectrum:
        raise PoleStructureError(f"{f.symbolic()} has no poles")
    s = spectrum[0].radius_exponent
    innermost = [entry for entry in spectrum if entry.radius_exponent == s]
    count = sum(entry.count for entry in innermost)
    location = _rational_power(f.q, s) if count == 1 else None
    return PoleReport(
        radius_exponent=s,
        point_count=count,
        multiplicity=max(entry.order for entry in innermost),
        pole_location=location,
    )


def leading_constant(group: AbelianPGroup, q: int) -> Fraction:
    """C with [X^n] F^asc ~ C q^(a' n): the residue-type constant at the simple pole X = q^(-a')."""
    constant = asymptotic_report(group, q).leading_constant
    if constant is None:
        raise PoleStructureError(f"No leading constant for {group.spec} over q={q}")
    return constant


def asymptotic_report(group: AbelianPGroup, q: int) -> PoleReport:
    if group.is_trivial:
        raise ValueError("The trivial group has a constant generating function and no poles")
    f = global_asc_gf(group, q)
    report = pole_report(f)
    a_prime = invariant_sequence(group).a_prime
    if report.point_count != 1 or report.multiplicity != 1:
        raise PoleStructureError(
            f"Innermost pole of {f.symbolic()} is not a unique simple pole: "
            f"{report.point_count} points of order {report.multiplicity}"
        )
    if report.radius_exponent != a_prime:
        raise PoleStructureError(f"Innermost pole at radius q^-{report.radius_exponent}, expected q^-{a_prime}")

    # Near x0 each factor with ratio a' behaves like beta * (1 - X/x0), and their exponents sum to -1.
    x0 = Fraction(1, q**a_prime)
    constant = Fraction(1)
    for factor in f.factors:
        if factor.ratio == a_prime:
            constant *= Fraction(factor.beta) ** factor.exp
        else:
            constant *= (1 - Fraction(q) ** factor.alpha * x0**factor.beta) ** factor.exp
    logger.debug(f"leading constant for {group.spec}, q={q}: {constant}")
    return report.model_copy(update={"leading_constant": constant})


class GeometricBlock(BaseModel):
    """Contribution P_r(k) * ratio^k to a_n, n = k * period + r, of all poles at radius q^(-radius_exponent)."""

    model_config = ConfigDict(frozen=True)

    radius_exponent: ExactRational
    period: int = Field(ge=1)
    ratio: ExactInt
    class_polynomials: tuple[tuple[ExactRational, ...], ...]

    def evaluate(self, n: int) -> Fraction:
        k, r = divmod(n, self.period)
        value = Fraction(0)
        for c in reversed(self.class_polynomials[r]):
            value = value * k + c
        return value * self.ratio**k

    def describe(self) -> str:
        lines = []
        for r, coefficients in enumerate(self.class_polynomials):
            if not coefficients:
                lines.append(f"n = {self.period}k + {r}: 0")
                continue
            poly = Poly([Rational(c.numerator, c.denominator) for c in reversed(coefficients)], K)
            lines.append(f"n = {self.period}k + {r}: ({poly.as_expr()}) * {self.ratio}^k")
        return "\n".join(lines)


class CoefficientFormula(BaseModel):
    """a_n = polynomial_part[n] + sum of the geometric blocks, for every n >= 0."""

    model_config = ConfigDict(frozen=True)

    q: int
    polynomial_part: tuple[ExactRational, ...] = ()
    blocks: tuple[GeometricBlock, ...] = ()

    @property
    def valid_from(self) -> int:
        """Index from which the blocks alone give a_n."""
        return len(self.polynomial_part)

    def evaluate(self, n: int) -> Fraction:
        value = self.polynomial_part[n] if n < len(self.polynomial_part) else Fraction(0)
        return value + sum((block.evaluate(n) for block in self.blocks), Fraction(0))


def _binomial_in_k(shift: int, top: int) -> Poly:
    """binomial(k - shift + top, top) as a polynomial in k."""
    poly = Poly(1, K, domain="QQ")
    for j in range(1, top + 1):
        poly *= Poly(K - shift + j, K, domain="QQ")
    return poly.quo_ground(factorial(top))


def _factor_ratio(g: Poly, f: FactoredGF) -> Fraction:
    for factor in f.factors:
        if Poly(1 - f.q**factor.alpha * X**factor.beta, X, domain="QQ").rem(g).is_zero:
            return factor.ratio
    raise PoleStructureError(f"Denominator factor {g.as_expr()} divides none of the factors of {f.symbolic()}")


def exact_coefficient_formula(f: FactoredGF) -> CoefficientFormula:
    """Partial fractions grouped by radius, each group written over (1 - mu X^L)^E with integer mu."""
    logger.log(TRACE, f"exact_coefficient_formula({f.symbolic()})")
    numerator, denominator = _reduced(f.numerator_poly().set_domain("QQ"), f.denominator_poly().set_domain("QQ"))
    quotient, remainder = numerator.div(denominator)
    polynomial_part = tuple(_poly_fraction(c) for c in reversed(quotient.all_coeffs())) if not quotient.is_zero else ()

    groups: dict[Fraction, list[tuple[Poly, int]]] = {}
    for g, m in denominator.factor_list()[1]:
        groups.setdefault(_factor_ratio(g, f), []).append((g, m))

    blocks = []
    for s, items in sorted(groups.items(), reverse=True):
        block_denominator = Poly(1, X, domain="QQ")
        for g, m in items:
            block_denominator *= g**m
        period = lcm(*(factor.beta for factor in f.factors if factor.ratio == s))
        ratio = f.q ** int(s * period)
        power = max(m for _, m in items)

        cofactor, leftover = (Poly(1 - ratio * X**period, X, domain="QQ") ** power).div(block_denominator)
        if not leftover.is_zero:
            raise PoleStructureError(f"Block at radius q^-{s} does not divide (1 - {ratio}X^{period})^{power}")
        others = denominator.quo(block_denominator)
        block_numerator = (remainder * others.invert(block_denominator)).rem(block_denominator) * cofactor

        coefficients = [_poly_fraction(c) for c in reversed(block_numerator.all_coeffs())]
        coefficients += [Fraction(0)] * (period * power - len(coefficients))
        class_polynomials = []
        for r in range(period):
            total = Poly(0, K, domain="QQ")
            for i in range(power):
                weight = coefficients[i * period + r] / ratio**i
                if weight:
                    total += _binomial_in_k(i, power - 1).mul_ground(Rational(weight.numerator, weight.denominator))
            class_polynomials.append(
                tuple(_poly_fraction(c) for c in reversed(total.all_coeffs())) if not total.is_zero else ()
            )
        blocks.append(
            GeometricBlock(radius_exponent=s, period=period, ratio=ratio, class_polynomials=tuple(class_polynomials))
        )

    return CoefficientFormula(q=f.q, polynomial_part=polynomial_part, blocks=tuple(blocks))
