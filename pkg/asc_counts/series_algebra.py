"""Exact truncated power series and rational functions of the form prod (1 - q^alpha X^beta)^e."""

import logging
from fractions import Fraction
from itertools import product
from typing import Iterable, Optional, Sequence, overload

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from sympy import Poly, Symbol

from asc_counts.exact_types import ExactRational
from asc_counts.trace import TRACE

logger = logging.getLogger(__name__)

X = Symbol("X")

DEFAULT_ORDER = 30

Number = int | Fraction


class SeriesPreconditionError(ValueError):
    pass


def _mul(a: Sequence[Number], b: Sequence[Number], order: int) -> list[Number]:
    out: list[Number] = [0] * (order + 1)
    for i, x in enumerate(a[: order + 1]):
        if not x:
            continue
        for j in range(order + 1 - i):
            y = b[j] if j < len(b) else 0
            if y:
                out[i + j] += x * y
    return out


def _valuation(coeffs: Sequence[Number]) -> Optional[int]:
    return next((i for i, c in enumerate(coeffs) if c), None)


def _pow(coeffs: Sequence[Number], exponent: int, order: int) -> list[Number]:
    """(1 + g)^B = sum_k binomial(B, k) g^k, with only floor(order / val(g)) terms."""
    g: list[Number] = [0, *coeffs[1 : order + 1]]
    g += [0] * (order + 1 - len(g))
    result: list[Number] = [1] + [0] * order
    v = _valuation(g)
    if v is None or exponent == 0:
        return result

    term: list[Number] = [1] + [0] * order
    binomial = 1
    for k in range(1, order // v + 1):
        binomial = binomial * (exponent - k + 1) // k
        if binomial == 0:
            break
        term = _mul(term, g, order)
        for i, c in enumerate(term):
            if c:
                result[i] += binomial * c
    return result


class TruncatedSeries(BaseModel):
    """a_0 + a_1 X + ... + a_N X^N + O(X^{N+1}) with exact rational coefficients."""

    model_config = ConfigDict(frozen=True)

    order: int = Field(ge=0)
    coefficients: tuple[ExactRational, ...]

    @model_validator(mode="after")
    def _check_length(self) -> "TruncatedSeries":
        if len(self.coefficients) != self.order + 1:
            raise ValueError(
                f"Series of order {self.order} needs {self.order + 1} coefficients, got {len(self.coefficients)}"
            )
        return self

    @classmethod
    def from_coefficients(cls, coefficients: Iterable[Number], order: Optional[int] = None) -> "TruncatedSeries":
        """Build a series, padding with zeros or truncating to `order` (default: as given)."""
        values = list(coefficients)
        n = len(values) - 1 if order is None else order
        values = (values + [0] * (n + 1 - len(values)))[: n + 1]
        return cls(order=n, coefficients=tuple(Fraction(c) for c in values))

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls.from_coefficients([1], order)

    def __getitem__(self, n: int) -> Fraction:
        return self.coefficients[n]

    def __len__(self) -> int:
        return len(self.coefficients)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError(f"Cannot extend a series of order {self.order} to order {order}")
        return TruncatedSeries(order=order, coefficients=self.coefficients[: order + 1])

    def __mul__(self, other: "TruncatedSeries | int | Fraction") -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            n = min(self.order, other.order)
            return TruncatedSeries.from_coefficients(_mul(self.coefficients, other.coefficients, n), n)
        return TruncatedSeries.from_coefficients([other * c for c in self.coefficients], self.order)

    __rmul__ = __mul__

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(self.order, other.order)
        return TruncatedSeries.from_coefficients([self[i] + other[i] for i in range(n + 1)], n)

    def __neg__(self) -> "TruncatedSeries":
        return self * -1

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by X^k; the order grows by k (the new low coefficients are known zeros)."""
        return TruncatedSeries.from_coefficients([0] * k + list(self.coefficients), self.order + k)

    def as_integers(self) -> tuple[int, ...]:
        """Coefficients as ints; raises if any coefficient is not integral."""
        for n, c in enumerate(self.coefficients):
            if c.denominator != 1:
                raise ArithmeticError(f"Coefficient a_{n} = {c} is not an integer")
        return tuple(int(c) for c in self.coefficients)

    def first_mismatch(self, other: "TruncatedSeries") -> Optional[int]:
        n = min(self.order, other.order)
        return next((i for i in range(n + 1) if self[i] != other[i]), None)


class Factor(BaseModel):
    """(1 - q^alpha X^beta)^exp."""

    model_config = ConfigDict(frozen=True)

    alpha: int = Field(ge=0)
    beta: int = Field(ge=1)
    exp: int

    @property
    def ratio(self) -> Fraction:
        """Radius exponent: the roots have absolute value q^{-alpha/beta}."""
        return Fraction(self.alpha, self.beta)


class FactoredGF(BaseModel):
    """prod (1 - q^alpha X^beta)^e, canonical: one factor per (alpha, beta), no zero exponents.

    For a fixed base q the canonical factor list determines the rational function uniquely, so
    model equality is equality of rational functions.
    """

    model_config = ConfigDict(frozen=True)

    q: int = Field(ge=2)
    factors: tuple[Factor, ...] = ()

    @field_validator("factors")
    @classmethod
    def _canonicalize(cls, factors: tuple[Factor, ...]) -> tuple[Factor, ...]:
        merged: dict[tuple[int, int], int] = {}
        for f in factors:
            merged[(f.alpha, f.beta)] = merged.get((f.alpha, f.beta), 0) + f.exp
        return tuple(
            Factor(alpha=alpha, beta=beta, exp=e)
            for (alpha, beta), e in sorted(merged.items(), key=lambda item: (item[0][1], item[0][0]))
            if e != 0
        )

    @classmethod
    def from_map(cls, q: int, mapping: dict[tuple[int, int], int]) -> "FactoredGF":
        return cls(q=q, factors=tuple(Factor(alpha=a, beta=b, exp=e) for (a, b), e in mapping.items()))

    @classmethod
    def one(cls, q: int) -> "FactoredGF":
        return cls(q=q)

    @property
    def factor_map(self) -> dict[tuple[int, int], int]:
        return {(f.alpha, f.beta): f.exp for f in self.factors}

    @property
    def is_one(self) -> bool:
        return not self.factors

    def numerator_degree(self) -> int:
        return sum(f.beta * f.exp for f in self.factors if f.exp > 0)

    def denominator_degree(self) -> int:
        return sum(-f.beta * f.exp for f in self.factors if f.exp < 0)

    def _check_base(self, other: "FactoredGF") -> None:
        if self.q != other.q:
            raise ValueError(f"Cannot combine generating functions over bases q={self.q} and q={other.q}")

    def __mul__(self, other: "FactoredGF") -> "FactoredGF":
        return multiply(self, other)

    def __truediv__(self, other: "FactoredGF") -> "FactoredGF":
        return divide(self, other)

    def __pow__(self, exponent: int) -> "FactoredGF":
        return power(self, exponent)

    def scale(self, alpha: int) -> "FactoredGF":
        """Substitute X -> q^alpha X."""
        return FactoredGF.from_map(self.q, {(a + alpha * b, b): e for (a, b), e in self.factor_map.items()})

    def evaluate(self, x: Fraction) -> Fraction:
        value = Fraction(1)
        for f in self.factors:
            value *= (1 - Fraction(self.q) ** f.alpha * x**f.beta) ** f.exp
        return value

    def numerator_poly(self) -> Poly:
        return _dense(self.q, [f for f in self.factors if f.exp > 0], 1)

    def denominator_poly(self) -> Poly:
        return _dense(self.q, [f for f in self.factors if f.exp < 0], -1)

    def numerator_text(self) -> str:
        return "".join(_factor_text(self.q, f, f.exp) for f in self.factors if f.exp > 0)

    def denominator_text(self) -> str:
        return "".join(_factor_text(self.q, f, -f.exp) for f in self.factors if f.exp < 0)

    def symbolic(self) -> str:
        """Human-readable product, e.g. '(1 - X)(1 - 81X^3) / ((1 - 9X)(1 - 9X^3))'."""
        return fraction_text(self.numerator_text(), self.denominator_text())


def _dense(q: int, factors: list[Factor], sign: int) -> Poly:
    poly = Poly(1, X, domain="ZZ")
    for f in factors:
        poly *= Poly(1 - q**f.alpha * X**f.beta, X, domain="ZZ") ** (sign * f.exp)
    return poly


def fraction_text(numerator: str, denominator: str) -> str:
    numerator = numerator or "1"
    if not denominator:
        return numerator
    if denominator.count("(") > 1 or not denominator.endswith(")"):
        denominator = f"({denominator})"
    return f"{numerator} / {denominator}"


def _factor_text(q: int, f: Factor, exponent: int) -> str:
    coefficient = q**f.alpha
    monomial = "X" if f.beta == 1 else f"X^{f.beta}"
    body = f"(1 - {coefficient if coefficient != 1 else ''}{monomial})"
    return body if exponent == 1 else f"{body}^{exponent}"


def multiply(f: FactoredGF, g: FactoredGF) -> FactoredGF:
    f._check_base(g)
    merged = f.factor_map
    for key, e in g.factor_map.items():
        merged[key] = merged.get(key, 0) + e
    return FactoredGF.from_map(f.q, merged)


def divide(f: FactoredGF, g: FactoredGF) -> FactoredGF:
    return multiply(f, power(g, -1))


def power(f: FactoredGF, exponent: int) -> FactoredGF:
    return FactoredGF.from_map(f.q, {key: e * exponent for key, e in f.factor_map.items()})


def product_of(q: int, factors: Iterable[FactoredGF]) -> FactoredGF:
    result = FactoredGF.one(q)
    for f in factors:
        result = result * f
    return result


def expand(f: FactoredGF, order: int) -> TruncatedSeries:
    """Power series of f about 0 to X^order; denominators become geometric series."""
    logger.log(TRACE, f"expand({f.symbolic()}, order={order})")
    coeffs: list[Number] = [1] + [0] * order
    for factor in f.factors:
        if factor.beta > order:
            continue
        base: list[Number] = [0] * (order + 1)
        base[0] = 1
        base[factor.beta] = -(f.q**factor.alpha)
        coeffs = _mul(coeffs, _pow(base, factor.exp, order), order)
    return TruncatedSeries.from_coefficients(coeffs, order)


def pow_series(series: TruncatedSeries, exponent: int) -> TruncatedSeries:
    """series^B for series with constant term 1 and any (possibly huge or negative) integer B."""
    if series[0] != 1:
        raise SeriesPreconditionError(f"pow_series needs constant term 1, got {series[0]}")
    return TruncatedSeries.from_coefficients(_pow(series.coefficients, exponent, series.order), series.order)


@overload
def substitute(value: TruncatedSeries, d: int, order: Optional[int] = None) -> TruncatedSeries: ...


@overload
def substitute(value: FactoredGF, d: int, order: Optional[int] = None) -> FactoredGF: ...


def substitute(
    value: TruncatedSeries | FactoredGF, d: int, order: Optional[int] = None
) -> TruncatedSeries | FactoredGF:
    """X -> X^d. A series of order N becomes exact through order d*N + d - 1."""
    if d < 1:
        raise ValueError(f"Substitution degree d={d} must be >= 1")
    if isinstance(value, FactoredGF):
        return FactoredGF.from_map(value.q, {(a, b * d): e for (a, b), e in value.factor_map.items()})

    known = d * value.order + d - 1
    target = known if order is None else order
    if target > known:
        raise ValueError(f"Substituted series is only known through order {known}, asked for {target}")
    coeffs: list[Number] = [0] * (target + 1)
    for i, c in enumerate(value.coefficients):
        if i * d > target:
            break
        coeffs[i * d] = c
    return TruncatedSeries.from_coefficients(coeffs, target)


def log_series(series: TruncatedSeries) -> TruncatedSeries:
    """Formal logarithm of a series with constant term 1."""
    if series[0] != 1:
        raise SeriesPreconditionError(f"log_series needs constant term 1, got {series[0]}")
    s = series.coefficients
    u: list[Fraction] = [Fraction(0)] * (series.order + 1)
    for n in range(1, series.order + 1):
        u[n] = s[n] - sum((k * u[k] * s[n - k] for k in range(1, n)), Fraction(0)) / n
    return TruncatedSeries.from_coefficients(u, series.order)


def exp_series(series: TruncatedSeries) -> TruncatedSeries:
    """Formal exponential of a series with constant term 0."""
    if series[0] != 0:
        raise SeriesPreconditionError(f"exp_series needs constant term 0, got {series[0]}")
    u = series.coefficients
    e: list[Fraction] = [Fraction(1)] + [Fraction(0)] * series.order
    for n in range(1, series.order + 1):
        e[n] = sum((k * u[k] * e[n - k] for k in range(1, n + 1)), Fraction(0)) / n
    return TruncatedSeries.from_coefficients(e, series.order)


class MonomialTerm(BaseModel):
    model_config = ConfigDict(frozen=True)

    exponents: tuple[int, ...]
    coefficient: ExactRational


class MultivariateSeries(BaseModel):
    """Series in X_0..X_{k-1} holding every monomial with sum_i weights[i] * exponent_i <= bound."""

    model_config = ConfigDict(frozen=True)

    weights: tuple[int, ...]
    bound: int = Field(ge=0)
    terms: tuple[MonomialTerm, ...]

    def coefficient(self, exponents: tuple[int, ...]) -> Fraction:
        if len(exponents) != len(self.weights):
            raise ValueError(f"Expected {len(self.weights)} exponents, got {len(exponents)}")
        if sum(w * k for w, k in zip(self.weights, exponents, strict=True)) > self.bound:
            raise ValueError(f"Monomial {exponents} lies outside the stored weighted degree {self.bound}")
        return next((t.coefficient for t in self.terms if t.exponents == exponents), Fraction(0))

    def specialize(self) -> TruncatedSeries:
        """Set X_i = X^{weights[i]}."""
        coeffs: list[Number] = [0] * (self.bound + 1)
        for term in self.terms:
            coeffs[sum(w * k for w, k in zip(self.weights, term.exponents, strict=True))] += term.coefficient
        return TruncatedSeries.from_coefficients(coeffs, self.bound)


def multivariate_product(factors: Sequence[TruncatedSeries], weights: Sequence[int], bound: int) -> MultivariateSeries:
    """prod_i s_i(X_i) for univariate s_i, kept to weighted degree <= bound."""
    if len(factors) != len(weights):
        raise ValueError(f"Got {len(factors)} factors for {len(weights)} weights")
    ranges = [range(bound // w + 1) for w in weights]
    terms = []
    for exponents in product(*ranges):
        if sum(w * k for w, k in zip(weights, exponents, strict=True)) > bound:
            continue
        coefficient = Fraction(1)
        for s, k in zip(factors, exponents, strict=True):
            coefficient *= s[k] if k <= s.order else 0
        if coefficient:
            terms.append(MonomialTerm(exponents=tuple(exponents), coefficient=coefficient))
    return MultivariateSeries(weights=tuple(weights), bound=bound, terms=tuple(terms))
