"""Counts of field (surjective) G-extensions by Artin-Schreier conductor, by Moebius inversion over the subgroup
lattice: surj_G = sum_{H <= G} mu(H, G) |H| F_H."""

import logging

from pydantic import BaseModel, ConfigDict

from asc_counts.abelian_p_groups import DEFAULT_LATTICE_BOUND_EXPONENT, AbelianPGroup, subgroup_lattice
from asc_counts.conductor_gf import global_asc_gf
from asc_counts.exact_types import ExactInt
from asc_counts.series_algebra import FactoredGF, TruncatedSeries, expand
from asc_counts.trace import TRACE

logger = logging.getLogger(__name__)


class FieldCountTerm(BaseModel):
    """weight * F_H for one subgroup H, with weight = mu(H, G) |H|."""

    model_config = ConfigDict(frozen=True)

    subgroup: AbelianPGroup
    subgroup_order: ExactInt
    moebius: ExactInt
    weight: ExactInt
    gf: FactoredGF


class FieldCountReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    group: AbelianPGroup
    q: int
    series: TruncatedSeries
    terms: tuple[FieldCountTerm, ...]


def field_count_report(
    group: AbelianPGroup, q: int, order: int, bound_exponent: int = DEFAULT_LATTICE_BOUND_EXPONENT
) -> FieldCountReport:
    """The field-count series and the finite combination of rational GFs it comes from.

    Subgroups with mu(H, G) = 0 are left out of `terms`.
    """
    logger.log(TRACE, f"field_count_report(group={group.spec!r}, q={q}, order={order})")
    lattice = subgroup_lattice(group, bound_exponent)

    gfs: dict[AbelianPGroup, FactoredGF] = {}
    terms = []
    coefficients = [0] * (order + 1)
    for subgroup, mu in zip(lattice.subgroups, lattice.moebius, strict=True):
        if mu == 0:
            continue
        structure = lattice.structure(subgroup)
        if structure not in gfs:
            gfs[structure] = global_asc_gf(structure, q)
        weight = mu * subgroup.order
        terms.append(
            FieldCountTerm(
                subgroup=structure, subgroup_order=subgroup.order, moebius=mu, weight=weight, gf=gfs[structure]
            )
        )
        for n, c in enumerate(expand(gfs[structure], order).as_integers()):
            coefficients[n] += weight * c

    for n, c in enumerate(coefficients):
        if c < 0:
            raise ArithmeticError(f"Field count coefficient a_{n} = {c} is negative for {group.spec}, q={q}")
    logger.debug(f"field counts for {group.spec}: {len(terms)} non-zero Moebius terms")
    return FieldCountReport(
        group=group, q=q, series=TruncatedSeries.from_coefficients(coefficients, order), terms=tuple(terms)
    )


def field_count_series(
    group: AbelianPGroup, q: int, order: int, bound_exponent: int = DEFAULT_LATTICE_BOUND_EXPONENT
) -> TruncatedSeries:
    """Numbers of surjections onto G (unnormalized), by Artin-Schreier conductor degree."""
    return field_count_report(group, q, order, bound_exponent).series


def moebius_round_trip(
    group: AbelianPGroup, q: int, order: int, bound_exponent: int = DEFAULT_LATTICE_BOUND_EXPONENT
) -> bool:
    """Every map onto some subgroup: sum_{H <= G} surj_H = |G| F_G."""
    lattice = subgroup_lattice(group, bound_exponent)
    total = [0] * (order + 1)
    for subgroup in lattice.subgroups:
        for n, c in enumerate(field_count_series(lattice.structure(subgroup), q, order, bound_exponent).as_integers()):
            total[n] += c
    expected = expand(global_asc_gf(group, q), order).as_integers()
    return tuple(total) == tuple(group.order * c for c in expected)
