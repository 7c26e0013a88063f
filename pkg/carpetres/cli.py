"""
Command line interface for carpetres.

Usage:
    carpetres gen --N 2 --level 2
    carpetres graph --N 2 --m 1 --kind G
    carpetres resist --N 2 --kind G --m 1
    carpetres fem --N 2 --n 0 --k 4
    carpetres verify --suite duality --N 2 --m-max 3
    carpetres scaling --N 2
    carpetres config --write carpetres.env
"""

import json
import sys
from pathlib import Path
from typing import Optional

import click
from rich.table import Table

from carpetres import __version__
from carpetres.errors import CarpetError
from carpetres.models import RunConfig
from carpetres.utils.logger import console, log, setup_logging


def _fail(message: str):
    console.print(f"[bold red]Error: {message}[/bold red]")
    sys.exit(1)


def _run_config(ctx: click.Context, **overrides) -> RunConfig:
    try:
        return ctx.obj["run_config"].overlay(**overrides)
    except ValueError as e:
        _fail(f"invalid configuration: {e}")


def _write_json(path: Path, payload) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


N_OPTION = click.option("--N", "N", type=int, default=None, help="Carpet parameter N (4N-gon, N >= 2)")
OUT_OPTION = click.option("--out", "-o", "output_dir", type=click.Path(path_type=Path), default=None,
                          help="Output directory")


@click.group()
@click.version_option(version=__version__, prog_name="carpetres")
@click.option("--debug", is_flag=True, help="Enable debug logging")
@click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              default=None, help="KEY=VALUE config file")
@click.option("--cache-dir", type=click.Path(path_type=Path), default=None,
              help="Result cache directory (default: $CARPETRES_CACHE_DIR)")
@click.option("--no-cache", is_flag=True, help="Disable the result cache")
@click.pass_context
def main(ctx: click.Context, debug: bool, config_file: Optional[Path], cache_dir: Optional[Path],
         no_cache: bool):
    """
    carpetres - effective resistance and resistance scaling of 4N-carpets.
    """
    from carpetres.config import get_config

    config = get_config()
    setup_logging(level="DEBUG" if debug else config.logging.level, log_file=config.logging.log_file)
    try:
        run_config = RunConfig.from_config(config)
        if config_file is not None:
            run_config = RunConfig.load(config_file, base=run_config)
        run_config = run_config.overlay(cache_dir=cache_dir, cache_enabled=False if no_cache else None)
    except ValueError as e:
        _fail(f"invalid configuration: {e}")
    ctx.obj = {"run_config": run_config}


@main.command()
@N_OPTION
@click.option("--level", "-n", type=int, default=0, help="Pre-carpet level n")
@click.option("--highlight-ab", is_flag=True, help="Draw A_n and B_n")
@click.option("--format", "formats", type=click.Choice(["svg", "json"]), multiple=True,
              default=("svg",), help="Output formats")
@OUT_OPTION
@click.pass_context
def gen(ctx, N, level, highlight_ab, formats, output_dir):
    """Draw the pre-carpet F_n (SVG) and dump its cells (JSON)."""
    from carpetres.geometry import CarpetParams, cells_json, emit_carpet_svg

    cfg = _run_config(ctx, N=N, output_dir=output_dir)
    try:
        params = CarpetParams.from_n(cfg.N)
        stem = cfg.output_dir / f"carpet_N{cfg.N}_n{level}"
        if "svg" in formats:
            path = stem.with_suffix(".svg")
            emit_carpet_svg(params, level, highlight_ab=highlight_ab, path=path)
            log.success(f"Wrote {path}")
        if "json" in formats:
            path = _write_json(stem.with_suffix(".json"), cells_json(params, level, cfg.max_cells))
            log.success(f"Wrote {path}")
    except (CarpetError, OSError, ValueError) as e:
        _fail(str(e))


@main.command()
@N_OPTION
@click.option("--m", "m", type=int, default=1, help="Graph level m")
@click.option("--kind", type=click.Choice(["G", "D"]), default="G", help="Graph kind")
@click.option("--format", "formats", type=click.Choice(["json", "svg"]), multiple=True,
              default=("json",), help="Output formats")
@OUT_OPTION
@click.pass_context
def graph(ctx, N, m, kind, formats, output_dir):
    """Build G_m or D_m and print its statistics."""
    from carpetres.geometry import CarpetParams
    from carpetres.graphs import build_graph, emit_graph_svg, graph_json, graph_stats

    cfg = _run_config(ctx, N=N, output_dir=output_dir)
    try:
        params = CarpetParams.from_n(cfg.N)
        built = build_graph(params, m, kind, tol=params.tolerance(m, cfg.snap_tolerance),
                            max_cells=cfg.max_cells)
        stats = graph_stats(built)
        table = Table(title=f"{kind}_{m} for N={cfg.N}")
        table.add_column("Property", style="cyan")
        table.add_column("Value", style="green")
        table.add_row("Vertices", str(stats.num_vertices))
        table.add_row("Edges", str(stats.num_edges))
        table.add_row("Components", str(stats.components))
        table.add_row("|A|, |B|", f"{stats.size_A}, {stats.size_B}")
        table.add_row("Degrees", ", ".join(f"{d}: {c}" for d, c in stats.degree_histogram.items()))
        console.print(table)

        stem = cfg.output_dir / f"graph_{kind}{m}_N{cfg.N}"
        if "json" in formats:
            log.success(f"Wrote {_write_json(stem.with_suffix('.json'), graph_json(built))}")
        if "svg" in formats:
            path = stem.with_suffix(".svg")
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(emit_graph_svg(built), encoding="utf-8")
            log.success(f"Wrote {path}")
    except (CarpetError, OSError, ValueError) as e:
        _fail(str(e))


@main.command()
@N_OPTION
@click.option("--kind", type=click.Choice(["G", "D"]), default="G", help="Graph kind")
@click.option("--m", "m", type=int, required=True, help="Graph level m (>= 1)")
@click.option("--tol", type=float, default=None, help="Solver relative tolerance")
@click.option("--csv", "with_csv", is_flag=True, help="Also write potentials and currents as CSV")
@OUT_OPTION
@click.pass_context
def resist(ctx, N, kind, m, tol, with_csv, output_dir):
    """Effective resistance of G_m or D_m between A_m and B_m."""
    from carpetres.geometry import CarpetParams
    from carpetres.graphs import build_graph
    from carpetres.network.results import currents_csv, potentials_csv, resistance_result, solve_graph

    cfg = _run_config(ctx, N=N, solver_rtol=tol, output_dir=output_dir)
    try:
        params = CarpetParams.from_n(cfg.N)
        result = resistance_result(params, m, kind, cfg.solver_options(), cfg.result_cache(),
                                   cfg.snap_tolerance, cfg.max_cells)
        path = cfg.output_dir / f"resist_{kind}{m}_N{cfg.N}.json"
        _write_json(path, json.loads(result.model_dump_json()))
        click.echo(result.model_dump_json(indent=2))
        if with_csv:
            built = build_graph(params, m, kind, tol=params.tolerance(m, cfg.snap_tolerance),
                                max_cells=cfg.max_cells)
            sol = solve_graph(built, cfg.solver_options())
            potentials_csv(path.with_name(f"potential_{kind}{m}_N{cfg.N}.csv"), built, sol.potential)
            currents_csv(path.with_name(f"current_{kind}{m}_N{cfg.N}.csv"), sol.current)
    except (CarpetError, OSError, ValueError) as e:
        _fail(str(e))


@main.command()
@N_OPTION
@click.option("--n", "n", type=int, default=0, help="Pre-carpet level n")
@click.option("--k", "k", type=int, default=None, help="Refinement depth")
@click.option("--convergence", is_flag=True, help="Tabulate R_est for k = 0..K")
@click.option("--sectors", is_flag=True, help="Report the sector energy identities")
@OUT_OPTION
@click.pass_context
def fem(ctx, N, n, k, convergence, sectors, output_dir):
    """Finite element resistance of the pre-carpet F_n."""
    from carpetres.fem import build_mesh, convergence_table, sector_analysis, solve_mixed_bvp
    from carpetres.fem.export import convergence_csv, mesh_json, solution_csv
    from carpetres.geometry import CarpetParams

    cfg = _run_config(ctx, N=N, k_max=k, output_dir=output_dir)
    try:
        params = CarpetParams.from_n(cfg.N)
        stem = cfg.output_dir / f"fem_N{cfg.N}_n{n}_k{cfg.k_max}"
        mesh = build_mesh(params, n, cfg.k_max, cfg.snap_tolerance, cfg.max_triangles)
        sol = solve_mixed_bvp(mesh, cfg.solver_options())
        log.key_value("Nodes", str(mesh.num_nodes))
        log.key_value("Triangles", str(mesh.num_triangles))
        log.key_value("Energy", repr(sol.energy))
        log.key_value("R_est", repr(sol.R_est))
        if "csv" in cfg.formats:
            solution_csv(stem.with_suffix(".csv"), sol)
        if "json" in cfg.formats:
            _write_json(stem.with_name(stem.name + "_mesh.json"), mesh_json(mesh))

        if sectors:
            data = sector_analysis(sol)
            log.section("Sector energies")
            log.key_value("E_v", repr(data.E_v))
            log.key_value("E_w", repr(data.E_w))
            log.key_value("a(v, w) relative", repr(data.orthogonality_relative))
            log.key_value("Energy identity residual", repr(data.identity_residual))

        if convergence:
            table = convergence_table(params, n, cfg.k_max, cfg.solver_options(), cfg.snap_tolerance,
                                      cfg.max_triangles)
            rich_table = Table(title=f"Convergence of R_est, N={cfg.N}, n={n}")
            for column in ("k", "nodes", "energy", "R_est", "delta"):
                rich_table.add_column(column)
            for row in table.rows:
                rich_table.add_row(str(row.k), str(row.nodes), repr(row.energy), repr(row.R_est),
                                   "" if row.delta is None else repr(row.delta))
            console.print(rich_table)
            if table.aitken_estimate is not None:
                log.key_value("Aitken estimate (not a bound)", repr(table.aitken_estimate))
            convergence_csv(cfg.output_dir / f"convergence_N{cfg.N}_n{n}.csv", table)
    except (CarpetError, OSError, ValueError) as e:
        _fail(str(e))


@main.command()
@click.option("--suite", "-s", required=True, type=click.Choice(
    ["duality", "symmetry", "sector", "beta", "sandwich", "thomson"]), help="Suite to run")
@N_OPTION
@click.option("--m-max", type=int, default=None, help="Largest graph level")
@click.option("--n-max", type=int, default=None, help="Largest FEM level")
@click.option("--k", "k", type=int, default=None, help="FEM refinement depth")
@click.option("--slack", type=float, default=None, help="FEM slack for inequalities")
@click.pass_context
def verify(ctx, suite, N, m_max, n_max, k, slack):
    """Run a verification suite; exits 1 if any check fails."""
    from carpetres.verify import SUITE_REGISTRY, run_suite

    cfg = _run_config(ctx, N=N, m_max=m_max, n_max=n_max, k_max=k, slack=slack)
    log.section(f"Verify: {suite} (N={cfg.N})")
    console.print(f"[dim]{SUITE_REGISTRY[suite]['description']}[/dim]")
    try:
        records = run_suite(suite, cfg, cfg.result_cache())
    except (CarpetError, OSError, ValueError) as e:
        _fail(str(e))

    for rec in records:
        log.check(rec.label(), rec.passed, f"{rec.value:.3e} (tol {rec.tolerance:.1e})")
    failures = [rec for rec in records if not rec.passed]
    if failures:
        console.print(f"\n[bold red]{len(failures)} of {len(records)} checks failed:[/bold red]")
        for rec in failures:
            console.print(f"  [red]• N={rec.N}, m={rec.m}, {rec.check}[/red]")
        sys.exit(1)
    log.success(f"All {len(records)} checks passed")


@main.command()
@N_OPTION
@click.option("--m-max", type=int, default=None, help="Largest graph level")
@click.option("--n-max", type=int, default=None, help="Largest FEM level")
@click.option("--k", "k", type=int, default=None, help="FEM refinement depth")
@click.option("--slack", type=float, default=None, help="FEM slack for inequalities")
@click.option("--format", "formats", type=click.Choice(["json", "csv"]), multiple=True,
              default=("json", "csv"), help="Output formats")
@OUT_OPTION
@click.pass_context
def scaling(ctx, N, m_max, n_max, k, slack, formats, output_dir):
    """Resistance sequences, rho estimates, sandwich bounds and Fekete brackets."""
    from carpetres.scaling import build_report, report_passed, write_report

    cfg = _run_config(ctx, N=N, m_max=m_max, n_max=n_max, k_max=k, slack=slack, output_dir=output_dir)
    log.section(f"Scaling report for N={cfg.N}")
    try:
        report = build_report(cfg, cfg.result_cache())
        paths = write_report(report, cfg.output_dir, tuple(formats))
    except (CarpetError, OSError, ValueError) as e:
        _fail(str(e))

    for kind, seq in report.sequences.items():
        log.key_value(f"R^{kind}", ", ".join(repr(v) for v in seq))
    for kind, rho in report.rho.items():
        log.key_value(f"rho ({kind})", f"last ratio {rho.last_ratio!r}, regression {rho.regression_slope_exp!r}")
    if report.fekete_intersection is not None:
        lo, hi = report.fekete_intersection
        log.key_value("log rho bracket", f"[{lo!r}, {hi!r}]")
    for flag in report.flags:
        console.print(f"[warning]flag: {flag}[/warning]")
    for path in paths:
        log.success(f"Wrote {path}")
    if not report_passed(report):
        _fail("some inequality checks failed")


@main.command()
@click.option("--write", "write_path", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Write the effective configuration to this file")
@click.pass_context
def config(ctx, write_path):
    """Show the effective run configuration."""
    from carpetres.config import get_config

    cfg = _run_config(ctx)
    table = Table(title="Run configuration")
    table.add_column("Key", style="cyan")
    table.add_column("Value", style="green")
    for line in cfg.to_text().splitlines():
        key, _, value = line.partition("=")
        table.add_row(key, value)
    console.print(table)

    errors = get_config().validate()
    for error in errors:
        console.print(f"  [red]• {error}[/red]")
    if write_path is not None:
        try:
            cfg.save(write_path)
        except OSError as e:
            _fail(str(e))
        log.success(f"Wrote {write_path}")


if __name__ == "__main__":
    main()
