"""Local and global generating functions for the Artin-Schreier conductor, the ordinary conductor,
the discriminant of C_p-extensions, and the multivariate jump generating function of C_{p^e}."""

import logging
from fractions import Fraction
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator
from sympy import Matrix, Poly, Rational, multiplicity

from asc_counts.abelian_p_groups import AbelianPGroup, PrimeMismatchError, invariant_sequence, tau
from asc_counts.exact_types import ExactInt, ExactRational
from asc_counts.series_algebra import (
    X,
    FactoredGF,
    MultivariateSeries,
    TruncatedSeries,
    expand,
    fraction_text,
    multivariate_product,
    product_of,
    substitute,
)
from asc_counts.trace import TRACE
from asc_counts.zeta_places import euler_product, prime_power_decomposition, zeta_value

logger = logging.getLogger(__name__)


def _check_base(group: AbelianPGroup, q: int) -> None:
    p, _ = prime_power_decomposition(q)
    if p != group.p:
        raise PrimeMismatchError(f"q={q} is not a power of p={group.p}")


def _exponent(value: Fraction) -> int:
    if value.denominator != 1:
        raise ArithmeticError(f"Factor exponent {value} is not integral")
    return int(value)


def _is_power_of_prime(n: int, p: int) -> bool:
    return n >= 1 and n == p ** int(multiplicity(p, n))


class LocalCountProfile(BaseModel):
    """T_k = number of maps U^1 -> G whose last jump is <= k, for k = 0..K."""

    model_config = ConfigDict(frozen=True)

    group: AbelianPGroup
    Q: int = Field(ge=2)
    counts: tuple[ExactInt, ...]

    @model_validator(mode="after")
    def _check_counts(self) -> "LocalCountProfile":
        if self.counts and self.counts[0] != 1:
            raise ValueError(f"T_0 must be 1, got {self.counts[0]}")
        for k in range(1, len(self.counts)):
            ratio, remainder = divmod(self.counts[k], self.counts[k - 1])
            if remainder or not _is_power_of_prime(ratio, self.group.p):
                raise ValueError(f"T_{k}/T_{k - 1} = {self.counts[k]}/{self.counts[k - 1]} is not a power of p")
        return self


def cumulative_local_counts(group: AbelianPGroup, Q: int, K: int) -> LocalCountProfile:
    _check_base(group, Q)
    return LocalCountProfile(group=group, Q=Q, counts=tuple(Q ** tau(group, k) for k in range(K + 1)))


def local_asc_gf(group: AbelianPGroup, Q: int) -> FactoredGF:
    """prod_{i=0..t} (1 - Q^(c_i p^i) X^(p^i)) / (1 - Q^(c_{i+1} p^i) X^(p^i)); factors past t are 1."""
    _check_base(group, Q)
    logger.log(TRACE, f"local_asc_gf(group={group.spec!r}, Q={Q})")
    if group.is_trivial:
        return FactoredGF.one(Q)

    c = invariant_sequence(group).c
    p = group.p
    factors: dict[tuple[int, int], int] = {}
    for i in range(group.t + 1):
        beta = p**i
        for alpha, sign in ((_exponent(c[i] * beta), 1), (_exponent(c[i + 1] * beta), -1)):
            factors[(alpha, beta)] = factors.get((alpha, beta), 0) + sign
    return FactoredGF.from_map(Q, factors)


def local_asc_gf_from_counts(group: AbelianPGroup, Q: int, K: int) -> TruncatedSeries:
    """(1 - X) * sum_k T_k X^k: the local GF rebuilt from the cumulative counts alone."""
    counts = cumulative_local_counts(group, Q, K).counts
    return TruncatedSeries.from_coefficients([counts[0]] + [counts[k] - counts[k - 1] for k in range(1, K + 1)], K)


def global_asc_gf(group: AbelianPGroup, q: int) -> FactoredGF:
    """prod_{i=0..t} Z((q^(c_{i+1}) X)^(p^i)) / Z((q^(c_i) X)^(p^i))."""
    _check_base(group, q)
    logger.log(TRACE, f"global_asc_gf(group={group.spec!r}, q={q})")
    if group.is_trivial:
        return FactoredGF.one(q)

    c = invariant_sequence(group).c
    p = group.p
    pieces = []
    for i in range(group.t + 1):
        beta = p**i
        pieces.append(zeta_value(q, _exponent(c[i + 1] * beta), beta))
        pieces.append(zeta_value(q, _exponent(c[i] * beta), beta) ** -1)
    return product_of(q, pieces)


def _to_fraction(value: Rational) -> Fraction:
    return Fraction(int(value.p), int(value.q))


class ConductorGF(BaseModel):
    """A polynomial with constant term 1 times a FactoredGF: the shape of the local conductor GF."""

    model_config = ConfigDict(frozen=True)

    polynomial: tuple[ExactInt, ...] = (1,)
    factored: FactoredGF

    @property
    def q(self) -> int:
        return self.factored.q

    def expand(self, order: int) -> TruncatedSeries:
        return TruncatedSeries.from_coefficients(self.polynomial, order) * expand(self.factored, order)

    def numerator_poly(self) -> Poly:
        return Poly(list(reversed(self.polynomial)), X, domain="QQ") * self.factored.numerator_poly().set_domain("QQ")

    def denominator_poly(self) -> Poly:
        return self.factored.denominator_poly().set_domain("QQ")

    def symbolic(self) -> str:
        """E.g. '(1 - X)(1 + X + 3X^2) / (1 - 9X^3)'."""
        numerator = self.factored.numerator_text()
        if self.polynomial != (1,):
            numerator += f"({_polynomial_text(self.polynomial)})"
        return fraction_text(numerator, self.factored.denominator_text())


def _polynomial_text(coefficients: tuple[int, ...]) -> str:
    text = ""
    for n, c in enumerate(coefficients):
        if c == 0:
            continue
        monomial = "" if n == 0 else ("X" if n == 1 else f"X^{n}")
        magnitude = str(abs(c)) if abs(c) != 1 or n == 0 else ""
        if not text:
            text = f"{'-' if c < 0 else ''}{magnitude}{monomial}"
        else:
            text += f" {'-' if c < 0 else '+'} {magnitude}{monomial}"
    return text


def local_cond_gf(group: AbelianPGroup, Q: int) -> ConductorGF:
    """F^cond = 1 + X (F^asc - 1), with every candidate factor (1 - Q^alpha X^beta) pulled out of the numerator."""
    asc = local_asc_gf(group, Q)
    if asc.is_one:
        return ConductorGF(factored=asc)

    numerator = asc.numerator_poly().set_domain("QQ")
    denominator = asc.denominator_poly().set_domain("QQ")
    remaining = denominator * Poly(1 - X, X, domain="QQ") + Poly(X, X, domain="QQ") * numerator

    factors = {key: e for key, e in asc.factor_map.items() if e < 0}
    candidates = sorted(set(asc.factor_map) | {(0, 1)}, key=lambda key: (-key[1], -key[0]))
    for alpha, beta in candidates:
        divisor = Poly(1 - Q**alpha * X**beta, X, domain="QQ")
        while remaining.degree() >= divisor.degree():
            quotient, remainder = remaining.div(divisor)
            if not remainder.is_zero:
                break
            remaining = quotient
            factors[(alpha, beta)] = factors.get((alpha, beta), 0) + 1

    coefficients = [_to_fraction(c) for c in reversed(remaining.all_coeffs())]
    if coefficients[0] != 1 or any(c.denominator != 1 for c in coefficients):
        raise ArithmeticError(f"Conductor polynomial part {coefficients} is not an integer polynomial with constant 1")
    return ConductorGF(polynomial=tuple(int(c) for c in coefficients), factored=FactoredGF.from_map(Q, factors))


def conductor_relation_holds(group: AbelianPGroup, Q: int) -> bool:
    """Checks F^cond - 1 = X (F^asc - 1) as rational functions, by cross-multiplying."""
    asc = local_asc_gf(group, Q)
    cond = local_cond_gf(group, Q)
    asc_num, asc_den = asc.numerator_poly().set_domain("QQ"), asc.denominator_poly().set_domain("QQ")
    cond_num, cond_den = cond.numerator_poly(), cond.denominator_poly()
    lhs = (cond_num - cond_den) * asc_den
    rhs = Poly(X, X, domain="QQ") * (asc_num - asc_den) * cond_den
    return (lhs - rhs).is_zero


def global_cond_series(group: AbelianPGroup, q: int, order: int) -> TruncatedSeries:
    """Euler product of the local conductor GFs; there is no closed form to return in general."""
    _check_base(group, q)
    logger.log(TRACE, f"global_cond_series(group={group.spec!r}, q={q}, order={order})")
    series = euler_product(lambda Q, n: local_cond_gf(group, Q).expand(n), q, order)
    series.as_integers()
    return series


def disc_extends_remark(group: AbelianPGroup) -> bool:
    """True where the discriminant relation is applied past C_2 and C_3."""
    return group.p >= 5


def disc_series(group: AbelianPGroup, q: int, order: int) -> TruncatedSeries:
    """F^disc(X) = F^cond(X^(p-1)) for G = C_p."""
    if group.multiplicities != (1,):
        raise ValueError(f"Discriminant series needs a cyclic group of prime order, got {group.spec}")
    if disc_extends_remark(group):
        logger.warning(f"disc_series for C_{group.p}: multiplier p-1 = {group.p - 1} applied beyond C_2 and C_3")
    d = group.p - 1
    cond = global_cond_series(group, q, order // d)
    return substitute(cond, d, order=order)


class JumpGF(BaseModel):
    """F^jump for C_{p^e}: one factored GF per variable X_i (stored in X) and the expanded product."""

    model_config = ConfigDict(frozen=True)

    p: int
    e: int = Field(ge=1)
    Q: int
    variable_factors: tuple[FactoredGF, ...]
    series: MultivariateSeries

    def specialized_factored(self) -> FactoredGF:
        """Product of the variable factors under X_i -> X^(p^i)."""
        return product_of(self.Q, (substitute(f, self.p**i) for i, f in enumerate(self.variable_factors)))


def jump_variable_factor(p: int, i: int, Q: int) -> FactoredGF:
    """(1 - Q^(p^i - 1) X)(1 - Q^(p^(i+1)) X^p) / ((1 - Q^(p^i) X)(1 - Q^(p^(i+1) - 1) X^p))."""
    return FactoredGF.from_map(
        Q,
        {
            (p**i - 1, 1): 1,
            (p ** (i + 1), p): 1,
            (p**i, 1): -1,
            (p ** (i + 1) - 1, p): -1,
        },
    )


def jump_local_multivariate(e: int, Q: int, order: int) -> JumpGF:
    """Expand F^jump(X_0..X_{e-1}) for C_{p^e}, keeping monomials with sum_i p^i k_i <= order."""
    if e < 1:
        raise ValueError(f"Jump GF needs e >= 1, got e={e}")
    p, _ = prime_power_decomposition(Q)
    logger.log(TRACE, f"jump_local_multivariate(e={e}, Q={Q}, order={order})")
    factors = tuple(jump_variable_factor(p, i, Q) for i in range(e))
    weights = [p**i for i in range(e)]
    expansions = [expand(f, order // w) for f, w in zip(factors, weights, strict=True)]
    series = multivariate_product(expansions, weights, order)
    return JumpGF(p=p, e=e, Q=Q, variable_factors=factors, series=series)


def jump_global_series(e: int, q: int, order: int) -> TruncatedSeries:
    """Euler product of the specialized local jump GF."""
    return euler_product(lambda Q, n: jump_local_multivariate(e, Q, n).series.specialize(), q, order)


class RationalFit(BaseModel):
    """numerator / denominator (coefficient lists from X^0, denominator constant 1) fitted to a series."""

    model_config = ConfigDict(frozen=True)

    numerator: tuple[ExactRational, ...]
    denominator: tuple[ExactRational, ...]
    fit_terms: int
    verified_through: int
    first_mismatch: Optional[int] = None

    @property
    def degree(self) -> int:
        return len(self.denominator) - 1

    @property
    def verified(self) -> bool:
        return self.first_mismatch is None

    def expand(self, order: int) -> TruncatedSeries:
        inverse = [Fraction(1)] + [Fraction(0)] * order
        for n in range(1, order + 1):
            inverse[n] = -sum(
                (self.denominator[j] * inverse[n - j] for j in range(1, min(n, self.degree) + 1)), Fraction(0)
            )
        return TruncatedSeries.from_coefficients(self.numerator, order) * TruncatedSeries.from_coefficients(
            inverse, order
        )


def fit_rational(series: TruncatedSeries, fit_terms: int, verify_through: int) -> RationalFit:
    """Smallest d with N(X)/D(X), deg N and deg D <= d, matching a_0..a_{fit_terms-1}.

    The fit is then compared with the series through X^verify_through; `first_mismatch` records any failure.
    """
    if fit_terms < 1 or fit_terms > series.order + 1:
        raise ValueError(f"fit_terms={fit_terms} must lie in 1..{series.order + 1}")
    if verify_through > series.order:
        raise ValueError(f"Cannot verify through X^{verify_through}: series known only to X^{series.order}")
    a = [Rational(c.numerator, c.denominator) for c in series.coefficients]

    for d in range(0, (fit_terms - 1) // 2 + 1):
        if d == 0:
            if any(a[n] != 0 for n in range(1, fit_terms)):
                continue
            b: list[Rational] = [Rational(1)]
        else:
            rows = [[a[n - j] for j in range(1, d + 1)] for n in range(d + 1, fit_terms)]
            rhs = [-a[n] for n in range(d + 1, fit_terms)]
            try:
                solution, params = Matrix(rows).gauss_jordan_solve(Matrix(rhs))
            except ValueError:
                continue
            solution = solution.subs({symbol: 0 for symbol in params})
            b = [Rational(1), *list(solution)]
        numerator = [sum((b[j] * a[n - j] for j in range(min(n, d) + 1)), Rational(0)) for n in range(d + 1)]
        fit = RationalFit(
            numerator=tuple(_to_fraction(c) for c in numerator),
            denominator=tuple(_to_fraction(c) for c in b),
            fit_terms=fit_terms,
            verified_through=verify_through,
        )
        mismatch = fit.expand(verify_through).first_mismatch(series.truncate(verify_through))
        logger.debug(f"fit_rational: degree {d} fit, first mismatch {mismatch}")
        return fit.model_copy(update={"first_mismatch": mismatch})

    raise ArithmeticError(f"No rational function of degree <= {(fit_terms - 1) // 2} fits {fit_terms} terms")
