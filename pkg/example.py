"""Walkthrough of asc-counts: C_3-extensions of F_3(T) by Artin-Schreier conductor."""

from asc_counts.abelian_p_groups import AbelianPGroup, invariant_sequence, subgroup_lattice
from asc_counts.asymptotics import asymptotic_report, exact_coefficient_formula
from asc_counts.conductor_gf import global_asc_gf, global_cond_series, local_asc_gf, local_cond_gf
from asc_counts.field_counts import field_count_series
from asc_counts.series_algebra import expand
from asc_counts.series_cache import SeriesCache, series_key
from asc_counts.verification import closed_form_vs_euler


def main() -> None:
    """Print the closed forms, their expansions and the checks behind them."""
    group = AbelianPGroup.parse("p=3;m=1")
    q = 3
    print(f"=== {group.spec} over F_{q}(T) ===\n")

    invariants = invariant_sequence(group)
    print("1. Invariants")
    print(f"   c = {[str(c) for c in invariants.c]}, a = {invariants.a}, a' = {invariants.a_prime}\n")

    print("2. Local generating functions at a place with Q = 3")
    print(f"   F^asc  = {local_asc_gf(group, 3).symbolic()}")
    print(f"   F^cond = {local_cond_gf(group, 3).symbolic()}\n")

    f = global_asc_gf(group, q)
    print("3. Global generating function")
    print(f"   F^asc = {f.symbolic()}")
    print(f"   counts: {expand(f, 6).as_integers()}\n")

    verdict = closed_form_vs_euler(group, q, 12)
    print(f"4. Euler product check: {verdict.name} -> {'ok' if verdict.passed else 'MISMATCH'}\n")

    report = asymptotic_report(group, q)
    print("5. Asymptotics")
    print(f"   a_n ~ {report.leading_constant} * {q}^({report.radius_exponent} n)")
    for block in exact_coefficient_formula(f).blocks:
        print("   " + block.describe().replace("\n", "\n   "))
    print()

    print("6. Field counts (surjections onto C_3)")
    lattice = subgroup_lattice(group)
    print(f"   {len(lattice.subgroups)} subgroups, Moebius values {lattice.moebius}")
    print(f"   {field_count_series(group, q, 6).as_integers()}\n")

    print("7. Cached conductor series")
    cache = SeriesCache(db_path=":memory:")
    key = series_key("cond", group.spec, q, 8)
    series = cache.get_or_compute(key, lambda: global_cond_series(group, q, 8))
    print(f"   {series.as_integers()}")
    cache.get(key)
    print(f"   stats: {cache.get_stats()}")
    cache.close()

    print("\n=== Example complete ===")


if __name__ == "__main__":
    main()
