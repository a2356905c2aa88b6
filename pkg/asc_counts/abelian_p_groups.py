import logging
import re
from fractions import Fraction
from itertools import product
from typing import Iterator

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator
from sympy import isprime, multiplicity

from asc_counts.exact_types import ExactRational
from asc_counts.trace import TRACE

logger = logging.getLogger(__name__)

DEFAULT_LATTICE_BOUND_EXPONENT = 4

_GROUP_SPEC = re.compile(r"^\s*p\s*=\s*(\d+)\s*;\s*m\s*=\s*([\d,\s]*)$")

Element = tuple[int, ...]


class LatticeBoundError(ValueError):
    pass


class PrimeMismatchError(ValueError):
    pass


class AbelianPGroup(BaseModel):
    """A finite abelian p-group prod_e C_{p^e}^{m_e}, stored by its multiplicities (m_1, ..., m_E).

    Elements are tuples with one coordinate per cyclic factor, the factors ordered by
    increasing exponent (see cyclic_exponents).
    """

    model_config = ConfigDict(frozen=True)

    p: int
    multiplicities: tuple[int, ...] = ()

    @field_validator("p")
    @classmethod
    def _check_prime(cls, p: int) -> int:
        if not isprime(p):
            raise ValueError(f"p={p} is not prime")
        return p

    @field_validator("multiplicities")
    @classmethod
    def _canonicalize(cls, multiplicities: tuple[int, ...]) -> tuple[int, ...]:
        for e, m in enumerate(multiplicities, start=1):
            if m < 0:
                raise ValueError(f"Multiplicity m_{e}={m} is negative")
        trimmed = list(multiplicities)
        while trimmed and trimmed[-1] == 0:
            trimmed.pop()
        return tuple(trimmed)

    @classmethod
    def parse(cls, spec: str) -> "AbelianPGroup":
        """Parse a group spec such as "p=3;m=1,0,2" (empty m list = trivial group)."""
        match = _GROUP_SPEC.match(spec)
        if match is None:
            raise ValueError(f"Malformed group spec {spec!r}; expected e.g. 'p=3;m=1,0,2'")
        p_text, m_text = match.groups()
        parts = [part.strip() for part in m_text.split(",")] if m_text.strip() else []
        if any(part == "" for part in parts):
            raise ValueError(f"Malformed multiplicity list in group spec {spec!r}")
        try:
            return cls(p=int(p_text), multiplicities=tuple(int(part) for part in parts))
        except ValidationError as e:
            raise ValueError(f"Invalid group spec {spec!r}: {e.errors()[0]['msg']}") from e

    @classmethod
    def cyclic(cls, p: int, e: int) -> "AbelianPGroup":
        """The cyclic group C_{p^e}."""
        return cls(p=p, multiplicities=(0,) * (e - 1) + (1,) if e > 0 else ())

    @classmethod
    def from_cyclic_exponents(cls, p: int, exponents: list[int] | tuple[int, ...]) -> "AbelianPGroup":
        """Build prod_j C_{p^{a_j}} from a list of exponents a_j (zeros are ignored)."""
        top = max(exponents, default=0)
        counts = [0] * top
        for a in exponents:
            if a < 0:
                raise ValueError(f"Cyclic factor exponent {a} is negative")
            if a > 0:
                counts[a - 1] += 1
        return cls(p=p, multiplicities=tuple(counts))

    @property
    def spec(self) -> str:
        return f"p={self.p};m={','.join(str(m) for m in self.multiplicities)}"

    @property
    def t(self) -> int:
        """Exponent of the group is p^t."""
        return len(self.multiplicities)

    @property
    def order(self) -> int:
        return self.p ** sum(e * m for e, m in enumerate(self.multiplicities, start=1))

    @property
    def exponent(self) -> int:
        return self.p**self.t

    @property
    def rank(self) -> int:
        """dim over F_p of G[p]."""
        return sum(self.multiplicities)

    @property
    def is_trivial(self) -> bool:
        return not self.multiplicities

    @property
    def is_cyclic(self) -> bool:
        return self.rank == 1

    @property
    def cyclic_exponents(self) -> tuple[int, ...]:
        return tuple(e for e, m in enumerate(self.multiplicities, start=1) for _ in range(m))

    def multiplicity(self, e: int) -> int:
        return self.multiplicities[e - 1] if 1 <= e <= self.t else 0

    def elements(self) -> Iterator[Element]:
        return product(*(range(self.p**a) for a in self.cyclic_exponents))

    def zero(self) -> Element:
        return (0,) * len(self.cyclic_exponents)

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % self.p**e for a, b, e in zip(x, y, self.cyclic_exponents, strict=True))


class InvariantSequence(BaseModel):
    model_config = ConfigDict(frozen=True)

    c: tuple[ExactRational, ...]
    r: tuple[int, ...]
    a: ExactRational
    a_prime: int


class Subgroup(BaseModel):
    """A subgroup of an AbelianPGroup, identified by its full element set."""

    model_config = ConfigDict(frozen=True)

    elements: frozenset[Element]

    @property
    def order(self) -> int:
        return len(self.elements)

    def sort_key(self) -> tuple[int, tuple[Element, ...]]:
        return (self.order, tuple(sorted(self.elements)))


class SubgroupLattice(BaseModel):
    """All subgroups of `ambient`, ordered by (order, element list); `moebius[i]` is mu(subgroups[i], G)."""

    model_config = ConfigDict(frozen=True)

    ambient: AbelianPGroup
    subgroups: tuple[Subgroup, ...]
    moebius: tuple[int, ...]

    def moebius_map(self) -> dict[Subgroup, int]:
        return dict(zip(self.subgroups, self.moebius, strict=True))

    def moebius_of(self, subgroup: Subgroup) -> int:
        return self.moebius[self.subgroups.index(subgroup)]

    def structure(self, subgroup: Subgroup) -> AbelianPGroup:
        return subgroup_structure(self.ambient, subgroup)


def invariant_sequence(group: AbelianPGroup) -> InvariantSequence:
    """The sequences c_i (i = 0..t+1) and r_i (i = 1..t), with a = c_{t+1} and a' = 1 + dim G[p]."""
    if group.is_trivial:
        return InvariantSequence(c=(Fraction(0),), r=(), a=Fraction(0), a_prime=1)

    p, t = group.p, group.t
    c = [Fraction(0), Fraction(group.rank)]
    for i in range(1, t + 1):
        c.append(c[i] - Fraction(group.multiplicity(i), p**i))
    r = tuple(sum(group.multiplicity(e) for e in range(i, t + 1)) for i in range(1, t + 1))

    for i, c_i in enumerate(c):
        if (c_i * p**i).denominator != 1:
            raise ArithmeticError(f"c_{i}*p^{i} = {c_i * p**i} is not integral for {group.spec}")

    return InvariantSequence(c=tuple(c), r=r, a=c[t + 1], a_prime=1 + group.rank)


def c_from_ranks(p: int, r: tuple[int, ...], i: int) -> Fraction:
    """Closed form c_i = sum_{j<i} (p-1) p^{-j} r_j + p^{1-i} r_i, for i >= 1 (r_j = 0 past the end)."""
    if i < 1:
        raise ValueError(f"Closed form only defined for i >= 1, got i={i}")

    def rank(j: int) -> int:
        return r[j - 1] if j <= len(r) else 0

    head = sum((Fraction((p - 1) * rank(j), p**j) for j in range(1, i)), Fraction(0))
    return head + Fraction(rank(i), p ** (i - 1))


def torsion_size(group: AbelianPGroup, r: int) -> int:
    """|G[p^r]| = p^{sum_e m_e min(e, r)}."""
    if r < 0:
        raise ValueError(f"Torsion level r={r} is negative")
    return group.p ** sum(m * min(e, r) for e, m in enumerate(group.multiplicities, start=1))


def tau(group: AbelianPGroup, k: int) -> int:
    """tau(k) = sum_e m_e (k - floor(k / p^e)); Q^tau(k) maps U^1 -> G have last jump <= k."""
    if k < 0:
        raise ValueError(f"k={k} is negative")
    return sum(m * (k - k // group.p**e) for e, m in enumerate(group.multiplicities, start=1))


def hom_count(source: AbelianPGroup, target: AbelianPGroup) -> int:
    """|Hom(A, G)| = prod_j |G[p^{a_j}]| over the cyclic factors Z/p^{a_j} of A."""
    if source.p != target.p:
        raise PrimeMismatchError(f"Cannot count homs between a {source.p}-group and a {target.p}-group")
    count = 1
    for a in source.cyclic_exponents:
        count *= torsion_size(target, a)
    return count


def _element_table(group: AbelianPGroup) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All elements as rows (index = mixed-radix value, so index order is tuple order), the moduli and radix weights."""
    moduli = np.array([group.p**a for a in group.cyclic_exponents], dtype=np.int64)
    weights = np.array([int(np.prod(moduli[j + 1 :])) for j in range(len(moduli))], dtype=np.int64)
    table = np.array(list(group.elements()), dtype=np.int64).reshape(group.order, len(moduli))
    return table, moduli, weights


def _covers(
    member: np.ndarray, table: np.ndarray, moduli: np.ndarray, weights: np.ndarray, p_multiple: np.ndarray, p: int
) -> Iterator[np.ndarray]:
    """Overgroups K of H with [K : H] = p, one per line of (G/H)[p]."""
    inside = table[member]
    reached = member.copy()
    for g in np.flatnonzero(~member & member[p_multiple]):
        if reached[g]:
            continue
        cover = member.copy()
        coset = inside
        for _ in range(p - 1):
            coset = (coset + table[g]) % moduli
            cover[coset @ weights] = True
        reached |= cover
        yield cover


def _hall_moebius(p: int, index: int, contains_pg: bool) -> int:
    """mu(H, G) = (-1)^k p^(k(k-1)/2) when G/H is elementary abelian of order p^k, else 0."""
    if not contains_pg:
        return 0
    k = int(multiplicity(p, index))
    return (-1) ** k * p ** (k * (k - 1) // 2)


def subgroup_lattice(group: AbelianPGroup, bound_exponent: int = DEFAULT_LATTICE_BOUND_EXPONENT) -> SubgroupLattice:
    """Enumerate every subgroup once, climbing from the trivial group through index-p overgroups.

    Element sets are boolean masks over the element table, deduplicated by their packed bytes.
    """
    limit = group.p**bound_exponent
    if group.order > limit:
        raise LatticeBoundError(
            f"Group {group.spec} of order {group.order} exceeds the subgroup lattice bound "
            f"p^{bound_exponent} = {limit}"
        )
    logger.log(TRACE, f"subgroup_lattice(group={group.spec!r})")

    table, moduli, weights = _element_table(group)
    p_multiple = ((table * group.p) % moduli) @ weights
    trivial = np.zeros(len(table), dtype=bool)
    trivial[0] = True

    found = {np.packbits(trivial).tobytes(): trivial}
    frontier = [trivial]
    while frontier:
        next_frontier = []
        for member in frontier:
            for cover in _covers(member, table, moduli, weights, p_multiple, group.p):
                key = np.packbits(cover).tobytes()
                if key not in found:
                    found[key] = cover
                    next_frontier.append(cover)
        frontier = next_frontier

    ordered = sorted(found.values(), key=lambda m: (int(m.sum()), tuple(np.flatnonzero(m).tolist())))
    elements = [tuple(int(x) for x in row) for row in table]
    subgroups = tuple(Subgroup(elements=frozenset(elements[i] for i in np.flatnonzero(m))) for m in ordered)
    moebius = tuple(
        _hall_moebius(group.p, group.order // int(m.sum()), bool(m[p_multiple].all())) for m in ordered
    )

    logger.debug(f"lattice of {group.spec}: {len(subgroups)} subgroups")
    return SubgroupLattice(ambient=group, subgroups=subgroups, moebius=moebius)


def moebius_by_recursion(lattice: SubgroupLattice) -> tuple[int, ...]:
    """mu(G, G) = 1 and mu(H, G) = -sum_{H < K <= G} mu(K, G), over the enumerated subgroups."""
    sets = [subgroup.elements for subgroup in lattice.subgroups]
    values = [0] * len(sets)
    for index in range(len(sets) - 1, -1, -1):
        if index == len(sets) - 1:
            values[index] = 1
            continue
        below = sets[index]
        values[index] = -sum(
            values[j] for j in range(index + 1, len(sets)) if len(sets[j]) > len(below) and below <= sets[j]
        )
    return tuple(values)


def subgroup_structure(group: AbelianPGroup, subgroup: Subgroup) -> AbelianPGroup:
    """Isomorphism type of a subgroup, read off from the sizes |H[p^i]|."""
    p = group.p

    def killed_by(n: int, h: Element) -> bool:
        return all((n * x) % p**e == 0 for x, e in zip(h, group.cyclic_exponents, strict=True))

    layer_sizes = [1]
    i = 0
    while layer_sizes[-1] < subgroup.order:
        i += 1
        layer_sizes.append(sum(1 for h in subgroup.elements if killed_by(p**i, h)))

    ranks = [int(multiplicity(p, layer_sizes[j] // layer_sizes[j - 1])) for j in range(1, len(layer_sizes))]
    ranks.append(0)
    return AbelianPGroup(p=p, multiplicities=tuple(ranks[e - 1] - ranks[e] for e in range(1, len(ranks))))
