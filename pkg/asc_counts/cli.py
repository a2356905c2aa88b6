"""
Command-line interface for asc-counts.

Usage:
    asc-counts gf asc --group "p=3;m=1" --q 3          # factored global GF
    asc-counts gf cond --group "p=2;m=1" --q 2 --fit   # conductor series and a rational fit
    asc-counts count --group "p=3;m=1" --q 3 --order 5
    asc-counts asymptotics --group "p=2;m=2" --q 4
    asc-counts fields --group "p=2;m=2" --q 2 --order 8
    asc-counts verify --suite all
    asc-counts demo c3-poles --q 3 --a-max 6 --order 20
    asc-counts places --q 4 --order 10

Exact values are printed as decimal strings. Output is JSON unless --csv is given.
"""

import csv
import io
import json
import logging
import sys
from typing import Any, Callable, Optional, Sequence

import click

from asc_counts.abelian_p_groups import AbelianPGroup
from asc_counts.asymptotics import asymptotic_report, exact_coefficient_formula, pole_spectrum
from asc_counts.config import AscSettings, load_settings
from asc_counts.conductor_gf import (
    disc_extends_remark,
    disc_series,
    fit_rational,
    global_asc_gf,
    global_cond_series,
    jump_global_series,
    jump_local_multivariate,
    local_asc_gf,
    local_cond_gf,
)
from asc_counts.field_counts import field_count_report
from asc_counts.merom_demo import pole_accumulation_report
from asc_counts.series_algebra import FactoredGF, TruncatedSeries, expand
from asc_counts.series_cache import SeriesCache, series_key
from asc_counts.trace import TRACE
from asc_counts.verification import SUITES, run_suite
from asc_counts.zeta_places import place_counts

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERDICT_FAILED = 2


class GroupSpec(click.ParamType):
    name = "group"

    def convert(self, value: object, param: Optional[click.Parameter], ctx: Optional[click.Context]) -> AbelianPGroup:
        if isinstance(value, AbelianPGroup):
            return value
        try:
            return AbelianPGroup.parse(str(value))
        except ValueError as e:
            self.fail(str(e), param, ctx)


GROUP = GroupSpec()


def _configure_logging(verbose: int) -> None:
    if verbose == 0:
        return
    level = logging.DEBUG if verbose == 1 else TRACE
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger("asc_counts").setLevel(level)


def _emit_json(payload: dict[str, Any]) -> None:
    click.echo(json.dumps(payload, indent=2))


def _emit_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    click.echo(buffer.getvalue(), nl=False)


def _series_rows(series: TruncatedSeries) -> list[tuple[int, str]]:
    return [(n, str(c)) for n, c in enumerate(series.coefficients)]


def _factored_payload(f: FactoredGF) -> dict[str, Any]:
    return {"symbolic": f.symbolic(), **f.model_dump(mode="json")}


def _cached(settings: AscSettings, key: str, compute: Callable[[], TruncatedSeries]) -> TruncatedSeries:
    if settings.cache_path is None:
        return compute()
    cache = SeriesCache(
        settings.cache_path,
        max_memory_items=settings.cache_max_memory_items,
        max_disk_items=settings.cache_max_disk_items,
    )
    try:
        return cache.get_or_compute(key, compute)
    finally:
        cache.close()


def _series_output(as_json: bool, payload: dict[str, Any], series: TruncatedSeries) -> None:
    if as_json:
        _emit_json({**payload, "series": series.model_dump(mode="json")})
    else:
        _emit_csv(["n", "coefficient"], _series_rows(series))


def _order(settings: AscSettings, order: Optional[int]) -> int:
    return settings.default_order if order is None else order


group_option = click.option("--group", "group", type=GROUP, required=True, help='Group spec, e.g. "p=3;m=1,0,2"')
q_option = click.option("--q", "q", type=click.IntRange(min=2), required=True, help="Field size q (or Q with --local)")
order_option = click.option("--order", "order", type=click.IntRange(min=0), default=None, help="Truncation order N")
format_option = click.option("--json/--csv", "as_json", default=True, help="Output format (default JSON)")


@click.group()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None, help="TOML settings file")
@click.option("--cache", "cache_path", type=click.Path(dir_okay=False), default=None, help="SQLite series cache")
@click.option("-v", "--verbose", count=True, help="-v for DEBUG, -vv for TRACE logging on stderr")
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[str], cache_path: Optional[str], verbose: int) -> None:
    """Generating functions for abelian p-extensions of F_q(T), counted by Artin-Schreier conductor."""
    _configure_logging(verbose)
    ctx.obj = load_settings(config_path).with_overrides(cache_path=cache_path)


@cli.group()
def gf() -> None:
    """Generating functions: asc, cond, disc, jump."""


@gf.command("asc")
@group_option
@q_option
@order_option
@format_option
@click.option("--local", is_flag=True, help="Local GF at a place with residue field size --q")
@click.pass_obj
def gf_asc(
    settings: AscSettings, group: AbelianPGroup, q: int, order: Optional[int], as_json: bool, local: bool
) -> int:
    f = local_asc_gf(group, q) if local else global_asc_gf(group, q)
    n = _order(settings, order)
    _series_output(
        as_json, {"group": group.spec, "q": q, "local": local, "factored": _factored_payload(f)}, expand(f, n)
    )
    return EXIT_OK


@gf.command("cond")
@group_option
@q_option
@order_option
@format_option
@click.option("--local", is_flag=True, help="Local conductor GF (closed form) instead of the global series")
@click.option("--fit", is_flag=True, help="Fit a rational function to the global series")
@click.pass_obj
def gf_cond(
    settings: AscSettings,
    group: AbelianPGroup,
    q: int,
    order: Optional[int],
    as_json: bool,
    local: bool,
    fit: bool,
) -> int:
    n = _order(settings, order)
    payload: dict[str, Any] = {"group": group.spec, "q": q, "local": local}
    if local:
        cond = local_cond_gf(group, q)
        payload["symbolic"] = cond.symbolic()
        payload["polynomial"] = [str(c) for c in cond.polynomial]
        payload["factored"] = _factored_payload(cond.factored)
        _series_output(as_json, payload, cond.expand(n))
        return EXIT_OK

    series = _cached(settings, series_key("cond", group.spec, q, n), lambda: global_cond_series(group, q, n))
    if fit:
        result = fit_rational(series, n // 2 + 1, n)
        payload["fit"] = result.model_dump(mode="json")
    _series_output(as_json, payload, series)
    return EXIT_OK


@gf.command("disc")
@group_option
@q_option
@order_option
@format_option
@click.pass_obj
def gf_disc(settings: AscSettings, group: AbelianPGroup, q: int, order: Optional[int], as_json: bool) -> int:
    n = _order(settings, order)
    series = _cached(settings, series_key("disc", group.spec, q, n), lambda: disc_series(group, q, n))
    payload = {"group": group.spec, "q": q, "extension_beyond_remark": disc_extends_remark(group)}
    _series_output(as_json, payload, series)
    return EXIT_OK


@gf.command("jump")
@group_option
@q_option
@order_option
@format_option
@click.option("--local", is_flag=True, help="Multivariate local jump GF instead of the global specialization")
@click.pass_obj
def gf_jump(
    settings: AscSettings, group: AbelianPGroup, q: int, order: Optional[int], as_json: bool, local: bool
) -> int:
    if not group.is_cyclic:
        raise ValueError(f"Jump generating functions need a cyclic group, got {group.spec}")
    e = group.t
    n = _order(settings, order)
    if not local:
        _series_output(as_json, {"group": group.spec, "q": q, "local": False}, jump_global_series(e, q, n))
        return EXIT_OK

    jump = jump_local_multivariate(e, q, n)
    if as_json:
        _emit_json(
            {
                "group": group.spec,
                "Q": q,
                "local": True,
                "variable_factors": [_factored_payload(f) for f in jump.variable_factors],
                "series": jump.series.model_dump(mode="json"),
            }
        )
    else:
        header = [*(f"k{i}" for i in range(e)), "coefficient"]
        _emit_csv(header, [[*term.exponents, str(term.coefficient)] for term in jump.series.terms])
    return EXIT_OK


@cli.command()
@group_option
@q_option
@order_option
@format_option
@click.option("--cumulative", is_flag=True, help="Counts with conductor degree <= n instead of == n")
@click.pass_obj
def count(
    settings: AscSettings, group: AbelianPGroup, q: int, order: Optional[int], as_json: bool, cumulative: bool
) -> int:
    """Number of G-extensions (maps from the Galois group) by Artin-Schreier conductor degree."""
    n = _order(settings, order)
    counts = list(expand(global_asc_gf(group, q), n).as_integers())
    if cumulative:
        for i in range(1, len(counts)):
            counts[i] += counts[i - 1]
    if as_json:
        payload = {"group": group.spec, "q": q, "cumulative": cumulative, "coefficients": [str(c) for c in counts]}
        _emit_json(payload)
    else:
        _emit_csv(["n", "count"], [(i, str(c)) for i, c in enumerate(counts)])
    return EXIT_OK


@cli.command()
@group_option
@q_option
@format_option
@click.option("--formula", is_flag=True, help="Include the exact coefficient formula by residue class")
def asymptotics(group: AbelianPGroup, q: int, as_json: bool, formula: bool) -> int:
    """Innermost pole, leading constant and pole spectrum of the global GF."""
    f = global_asc_gf(group, q)
    report = asymptotic_report(group, q)
    spectrum = pole_spectrum(f)
    if not as_json:
        _emit_csv(
            ["radius_exponent", "count", "order", "kind", "a_prime", "leading_constant"],
            [
                (
                    str(entry.radius_exponent),
                    entry.count,
                    entry.order,
                    entry.kind,
                    str(report.radius_exponent),
                    str(report.leading_constant),
                )
                for entry in spectrum
            ],
        )
        return EXIT_OK

    payload: dict[str, Any] = {
        "group": group.spec,
        "q": q,
        "a_prime": str(report.radius_exponent),
        "leading_constant": str(report.leading_constant),
        "pole_report": report.model_dump(mode="json"),
        "spectrum": [{**entry.model_dump(mode="json"), "kind": entry.kind} for entry in spectrum],
    }
    if formula:
        coefficient_formula = exact_coefficient_formula(f)
        payload["formula"] = {
            "valid_from": coefficient_formula.valid_from,
            "polynomial_part": [str(c) for c in coefficient_formula.polynomial_part],
            "blocks": [
                {**block.model_dump(mode="json"), "description": block.describe()}
                for block in coefficient_formula.blocks
            ],
        }
    _emit_json(payload)
    return EXIT_OK


@cli.command()
@group_option
@q_option
@order_option
@format_option
@click.pass_obj
def fields(settings: AscSettings, group: AbelianPGroup, q: int, order: Optional[int], as_json: bool) -> int:
    """Surjections onto G (field extensions times |Aut|) by conductor degree, via Moebius inversion."""
    n = _order(settings, order)
    report = field_count_report(group, q, n, bound_exponent=settings.lattice_bound_exponent)
    if as_json:
        _emit_json(report.model_dump(mode="json"))
    else:
        _emit_csv(["n", "surjections"], _series_rows(report.series))
    return EXIT_OK


@cli.command()
@click.option("--suite", type=click.Choice(SUITES), default="all", show_default=True)
@format_option
@click.pass_obj
def verify(settings: AscSettings, suite: str, as_json: bool) -> int:
    """Check the closed forms against independent oracles; exit status 2 if any verdict fails."""
    verdicts = run_suite(suite, settings)
    passed = all(v.passed for v in verdicts)
    if as_json:
        _emit_json({"suite": suite, "passed": passed, "verdicts": [v.model_dump(mode="json") for v in verdicts]})
    else:
        _emit_csv(
            ["name", "passed", "first_mismatch"],
            [(v.name, v.passed, "" if v.first_mismatch is None else v.first_mismatch) for v in verdicts],
        )
    return EXIT_OK if passed else EXIT_VERDICT_FAILED


@cli.group()
def demo() -> None:
    """Numerical demonstrations."""


@demo.command("c3-poles")
@click.option("--q", "q", type=click.IntRange(min=2), default=3, show_default=True)
@click.option("--a-max", "a_max", type=click.IntRange(min=2), default=6, show_default=True)
@click.option("--order", "order", type=click.IntRange(min=1), default=20, show_default=True)
@format_option
def demo_c3_poles(q: int, a_max: int, order: int, as_json: bool) -> int:
    """Poles of the C_3 conductor approximants accumulating on |X| = q^(-1/2)."""
    report = pole_accumulation_report(q, a_max, order)
    if as_json:
        _emit_json({**report.model_dump(mode="json"), "passed": report.passed})
    else:
        _emit_csv(
            ["A", "new_radius_exponent", "new_radius", "limit_radius"],
            [(r.A, str(r.new_radius_exponent), r.new_radius, report.limit_radius) for r in report.approximants],
        )
    return EXIT_OK if report.passed else EXIT_VERDICT_FAILED


@cli.command()
@q_option
@order_option
@format_option
@click.pass_obj
def places(settings: AscSettings, q: int, order: Optional[int], as_json: bool) -> int:
    """Number of places of F_q(T) of each degree."""
    table = place_counts(q, max(_order(settings, order), 1))
    if as_json:
        _emit_json(table.model_dump(mode="json"))
    else:
        _emit_csv(["degree", "places"], [(n, str(b)) for n, b in table.csv_rows()])
    return EXIT_OK


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and map failures to exit statuses: 1 for bad input, 2 for failed verdicts."""
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        result = cli.main(args=args, prog_name="asc-counts", standalone_mode=False)
    except click.ClickException as e:
        click.echo(f"Error: {e.format_message()}", err=True)
        return EXIT_USAGE
    except click.Abort:
        click.echo("Error: aborted", err=True)
        return EXIT_USAGE
    except ValueError as e:
        message = str(e).splitlines()[0] if str(e) else type(e).__name__
        click.echo(f"Error: {message}", err=True)
        return EXIT_USAGE
    return result if isinstance(result, int) else EXIT_OK


def main() -> None:
    sys.exit(run())
