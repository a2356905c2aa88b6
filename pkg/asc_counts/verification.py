"""Independent oracles for the closed forms.

The brute-force counters here work on explicit group elements and never call tau or torsion_size; the
Euler-product check shares no code path with the closed-form global generating function.
"""

import logging
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field

from asc_counts.abelian_p_groups import AbelianPGroup, tau
from asc_counts.config import AscSettings
from asc_counts.conductor_gf import (
    conductor_relation_holds,
    cumulative_local_counts,
    global_asc_gf,
    jump_global_series,
    jump_local_multivariate,
    local_asc_gf,
    local_asc_gf_from_counts,
)
from asc_counts.series_algebra import FactoredGF, TruncatedSeries, expand
from asc_counts.trace import TRACE
from asc_counts.zeta_places import euler_product, place_counts, prime_power_decomposition

logger = logging.getLogger(__name__)

DEFAULT_BRUTEFORCE_GUARD = 10**9

SUITES = ("all", "local", "global", "zeta")

STANDARD_GROUPS: tuple[AbelianPGroup, ...] = tuple(
    AbelianPGroup.from_cyclic_exponents(p, exponents)
    for p, exponents in (
        (2, [1]),
        (2, [2]),
        (2, [1, 1]),
        (2, [1, 2]),
        (2, [3]),
        (3, [1]),
        (3, [2]),
        (3, [1, 1]),
        (3, [1, 2]),
        (3, [3]),
    )
)

ZETA_BASES = (2, 3, 4, 5, 8, 9)


class GuardExceededError(ValueError):
    pass


def nu(p: int, x: Fraction) -> int:
    """min{j >= 0 : p^j >= x}, cross-checked against #{j >= 0 : p^j < x}."""
    minimal = 0
    while p**minimal < x:
        minimal += 1
    counted = sum(1 for j in range(minimal + 1) if p**j < x)
    if minimal != counted:
        raise ArithmeticError(f"nu({x}) disagrees between its two forms: {minimal} != {counted}")
    return minimal


class UnitFactor(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int
    exponent: int


class UnitQuotient(BaseModel):
    """Gamma^1 / Gamma^(k+1) = prod_{i <= k, p does not divide i} (Z/p^nu((k+1)/i))^d."""

    model_config = ConfigDict(frozen=True)

    p: int
    d: int = Field(ge=1)
    k: int = Field(ge=0)
    factors: tuple[UnitFactor, ...]

    @property
    def cyclic_exponents(self) -> tuple[int, ...]:
        return tuple(f.exponent for f in self.factors for _ in range(self.d) if f.exponent > 0)

    @property
    def rank(self) -> int:
        return len(self.cyclic_exponents)

    @property
    def Q(self) -> int:
        return self.p**self.d


def unit_quotient(p: int, d: int, k: int) -> UnitQuotient:
    if k < 0 or d < 1:
        raise ValueError(f"unit_quotient needs k >= 0 and d >= 1, got k={k}, d={d}")
    factors = tuple(
        UnitFactor(index=i, exponent=nu(p, Fraction(k + 1, i))) for i in range(1, k + 1) if i % p != 0
    )
    return UnitQuotient(p=p, d=d, k=k, factors=factors)


def _killed_by_repeated_addition(group: AbelianPGroup, g: tuple[int, ...], times: int) -> bool:
    total = group.zero()
    for _ in range(times):
        total = group.add(total, g)
    return total == group.zero()


def hom_count_bruteforce(
    source: UnitQuotient | Sequence[int], target: AbelianPGroup, guard: int = DEFAULT_BRUTEFORCE_GUARD
) -> int:
    """|Hom(prod_j Z/p^(a_j), G)| as the product over generators of |{g in G : p^(a_j) g = 0}|.

    The image sets are enumerated element by element; `guard` bounds the number of group additions.
    """
    exponents = source.cyclic_exponents if isinstance(source, UnitQuotient) else tuple(source)
    distinct = sorted(set(exponents))
    work = sum(target.order * target.p**a for a in distinct)
    if work > guard:
        raise GuardExceededError(f"Brute-force hom count needs {work} group additions, guard is {guard}")
    logger.log(TRACE, f"hom_count_bruteforce(exponents={exponents}, target={target.spec!r})")

    elements = list(target.elements())
    image_sizes = {
        a: sum(1 for g in elements if _killed_by_repeated_addition(target, g, target.p**a)) for a in distinct
    }
    count = 1
    for a in exponents:
        count *= image_sizes[a]
    return count


def jump_profile(monomial: Sequence[int], p: int) -> tuple[int, ...]:
    """Jumps (j_0, ..., j_{e-1}) for the monomial prod X_i^(n_i), where n_i = j_i - p j_{i+1}."""
    jumps = [0] * len(monomial)
    following = 0
    for i in range(len(monomial) - 1, -1, -1):
        jumps[i] = monomial[i] + p * following
        following = jumps[i]
    return tuple(jumps)


def jump_profile_count_bruteforce(
    p: int, d: int, e: int, monomial: Sequence[int], guard: int = DEFAULT_BRUTEFORCE_GUARD
) -> int:
    """Number of maps U^1 -> C_(p^e), Q = p^d, whose jumps j_l (smallest m with p^l phi(U^(m+1)) = 0) match
    the monomial's profile."""
    if len(monomial) != e:
        raise ValueError(f"Monomial {tuple(monomial)} must have e={e} exponents")
    target = jump_profile(monomial, p)
    k = target[0]
    quotient = unit_quotient(p, d, k)
    modulus = p**e

    generators = [f for f in quotient.factors for _ in range(d)]
    choices = [[x for x in range(modulus) if (p**f.exponent * x) % modulus == 0] for f in generators]
    total = 1
    for options in choices:
        total *= len(options)
    if total > guard:
        raise GuardExceededError(f"Jump profile enumeration needs {total} maps, guard is {guard}")

    # Gamma^(m+1) meets the generator of index i in p^nu((m+1)/i) times it.
    scale = [[p ** nu(p, Fraction(m + 1, f.index)) for f in generators] for m in range(k + 1)]

    def jumps_of(images: tuple[int, ...]) -> tuple[int, ...]:
        result = []
        for level in range(e):
            m = 0
            while any((p**level * scale[m][g] * x) % modulus for g, x in enumerate(images)):
                m += 1
            result.append(m)
        return tuple(result)

    return sum(1 for images in product(*choices) if jumps_of(images) == target)


class Verdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    passed: bool
    first_mismatch: Optional[int] = None
    detail: str = ""


def _series_verdict(name: str, left: TruncatedSeries, right: TruncatedSeries) -> Verdict:
    mismatch = left.first_mismatch(right)
    return Verdict(name=name, passed=mismatch is None, first_mismatch=mismatch)


def closed_form_vs_euler(group: AbelianPGroup, q: int, order: int) -> Verdict:
    """expand(global closed form) against the Euler product of the local closed forms, coefficient by coefficient."""
    closed = expand(global_asc_gf(group, q), order)
    product_side = euler_product(lambda Q, n: expand(local_asc_gf(group, Q), n), q, order)
    return _series_verdict(f"closed_form_vs_euler[{group.spec};q={q};N={order}]", closed, product_side)


def zeta_identity_verdict(q: int, order: int = 30) -> Verdict:
    name = f"zeta_identity[q={q};N={order}]"
    try:
        place_counts(q, order)
    except ArithmeticError as e:
        return Verdict(name=name, passed=False, detail=str(e))
    return Verdict(name=name, passed=True)


def local_counts_verdict(group: AbelianPGroup, Q: int, K: int = 25) -> Verdict:
    """expand(F^asc_local) / (1 - X) against T_k = Q^tau(k)."""
    cumulative = expand(local_asc_gf(group, Q) * FactoredGF.from_map(Q, {(0, 1): -1}), K)
    counts = TruncatedSeries.from_coefficients(cumulative_local_counts(group, Q, K).counts, K)
    verdict = _series_verdict(f"local_counts[{group.spec};Q={Q};K={K}]", cumulative, counts)
    if verdict.passed:
        rebuilt = local_asc_gf_from_counts(group, Q, K)
        return _series_verdict(verdict.name, expand(local_asc_gf(group, Q), K), rebuilt)
    return verdict


def bruteforce_verdict(
    group: AbelianPGroup, d: int, k_max: int = 12, guard: int = DEFAULT_BRUTEFORCE_GUARD
) -> Verdict:
    """Q^tau(k) against element enumeration, taking the generators in increasing and in decreasing index order."""
    name = f"hom_count_bruteforce[{group.spec};d={d};k<={k_max}]"
    for k in range(k_max + 1):
        increasing = unit_quotient(group.p, d, k).cyclic_exponents
        expected = (group.p**d) ** tau(group, k)
        for exponents in (increasing, tuple(reversed(increasing))):
            if hom_count_bruteforce(exponents, group, guard) != expected:
                return Verdict(name=name, passed=False, first_mismatch=k)
    return Verdict(name=name, passed=True)


def conductor_relation_verdict(group: AbelianPGroup, Q: int) -> Verdict:
    return Verdict(name=f"conductor_relation[{group.spec};Q={Q}]", passed=conductor_relation_holds(group, Q))


def jump_local_verdict(e: int, Q: int, order: int = 12) -> Verdict:
    jump = jump_local_multivariate(e, Q, order)
    group = AbelianPGroup.cyclic(jump.p, e)
    name = f"jump_specialization[e={e};Q={Q};N={order}]"
    if jump.specialized_factored() != local_asc_gf(group, Q):
        return Verdict(name=name, passed=False, detail="specialized factors differ from the local closed form")
    return _series_verdict(name, jump.series.specialize(), expand(local_asc_gf(group, Q), order))


def jump_global_verdict(e: int, q: int, order: int = 10) -> Verdict:
    group = AbelianPGroup.cyclic(prime_power_decomposition(q)[0], e)
    return _series_verdict(
        f"jump_global[e={e};q={q};N={order}]", jump_global_series(e, q, order), expand(global_asc_gf(group, q), order)
    )


def run_suite(suite: str, settings: Optional[AscSettings] = None) -> list[Verdict]:
    if suite not in SUITES:
        raise ValueError(f"Unknown suite {suite!r}; expected one of {', '.join(SUITES)}")
    settings = settings or AscSettings()
    logger.log(TRACE, f"run_suite(suite={suite!r})")
    verdicts: list[Verdict] = []

    if suite in ("all", "zeta"):
        verdicts += [zeta_identity_verdict(q) for q in ZETA_BASES]

    if suite in ("all", "local"):
        for group in STANDARD_GROUPS:
            for Q in (group.p, group.p**2):
                verdicts.append(local_counts_verdict(group, Q))
                verdicts.append(conductor_relation_verdict(group, Q))
            for d in (1, 2):
                verdicts.append(bruteforce_verdict(group, d, guard=settings.bruteforce_guard))
        for p in (2, 3):
            verdicts += [jump_local_verdict(e, p) for e in (1, 2, 3)]

    if suite in ("all", "global"):
        for group in STANDARD_GROUPS:
            for q in (group.p, group.p**2):
                verdicts.append(closed_form_vs_euler(group, q, 15))
        verdicts += [jump_global_verdict(e, 3) for e in (1, 2)]

    failed = [v.name for v in verdicts if not v.passed]
    logger.info(f"suite {suite!r}: {len(verdicts) - len(failed)}/{len(verdicts)} verdicts passed")
    for name in failed:
        logger.warning(f"failed verdict: {name}")
    return verdicts
