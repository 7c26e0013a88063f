"""
Assembly of the full scaling report for one carpet.
"""

import json
from pathlib import Path
from typing import Optional

from carpetres.errors import SequenceError
from carpetres.geometry.carpet import CarpetParams
from carpetres.graphs.builder import GraphKind
from carpetres.models.records import ScalingReport
from carpetres.models.run_config import RunConfig
from carpetres.scaling.bounds import fekete_report, glued_bounds, sandwich_check
from carpetres.scaling.sequences import (
    duality_from_sequences,
    fem_resistances,
    ratio_differences_nonincreasing,
    resistance_sequence,
    rho_estimate,
    successive_ratios,
)
from carpetres.utils.cache import ResultCache
from carpetres.utils.logger import log
from carpetres.utils.numfmt import write_csv


def build_report(config: RunConfig, cache: Optional[ResultCache] = None,
                 with_glued: bool = True) -> ScalingReport:
    """
    Graph sequences, duality, rho estimates, FEM resistances, sandwich and glued
    bounds, and Fekete brackets for carpet N = config.N.

    A failed graph level truncates its sequence and marks the report incomplete.
    """
    params = CarpetParams.from_n(config.N)
    options = config.solver_options()
    report = ScalingReport(N=config.N)

    for kind in (GraphKind.G, GraphKind.D):
        try:
            seq = resistance_sequence(params, kind, config.m_max, options, cache, config.workers,
                                      config.snap_tolerance, config.max_cells)
        except SequenceError as e:
            log.warning(str(e))
            seq = e.partial
            report.complete = False
            report.flags.append(f"{kind.value}-sequence-truncated-at-m={len(seq) + 1}")
        report.sequences[kind.value] = seq
        report.ratios[kind.value] = successive_ratios(seq)
        report.increasing[kind.value] = all(b > a for a, b in zip(seq, seq[1:]))
        if len(seq) >= 2:
            report.rho[kind.value] = rho_estimate(seq)

    R_G, R_D = report.sequences["G"], report.sequences["D"]
    report.duality = duality_from_sequences(config.N, R_G, R_D)
    if not ratio_differences_nonincreasing(report.ratios["G"]):
        report.flags.append("G-ratio-differences-increase")

    log.info(f"FEM resistances n=0..{config.n_max} at k={config.k_max}")
    report.fem = fem_resistances(params, config.n_max, config.k_max, options,
                                 config.snap_tolerance, config.max_triangles)
    report.fem_refine = config.k_max

    graph_D = dict(enumerate(R_D, start=1))
    graph_G = dict(enumerate(R_G, start=1))
    report.sandwich = sandwich_check(params, report.fem, graph_D, graph_G, config.slack)
    if any(rec.skipped and rec.reason and rec.reason.startswith("missing") for rec in report.sandwich):
        report.complete = False
        report.flags.append("sandwich-missing-levels")

    if with_glued:
        pairs = [(m, total - m) for total in range(1, config.n_max + 1) for m in range(1, total + 1)]
        for done, (m, n) in enumerate(pairs, start=1):
            bounds = glued_bounds(params, m, n, config.k_max, options,
                                  R_total=report.fem[m + n],
                                  snap_tolerance=config.snap_tolerance,
                                  max_triangles=config.max_triangles)
            report.glued.extend(bounds.checks(config.slack))
            log.progress(done, len(pairs), f"glued bounds m={m}, n={n}")

    report.fekete, report.fekete_intersection = fekete_report(params, report.fem)
    if report.fekete and report.fekete_intersection is None:
        report.flags.append("fekete-empty-intersection")
    return report


def report_passed(report: ScalingReport) -> bool:
    checks = [*report.sandwich, *report.glued]
    return all(rec.passed or rec.skipped for rec in checks)


def write_report(report: ScalingReport, out_dir: Path, formats: tuple[str, ...] = ("json", "csv")) -> list[Path]:
    """Write scaling_N{N}.json and one CSV per sequence (m, R, ratio)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if "json" in formats:
        path = out_dir / f"scaling_N{report.N}.json"
        payload = json.loads(report.model_dump_json())
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        written.append(path)
    if "csv" in formats:
        for kind, seq in report.sequences.items():
            ratios = [""] + report.ratios.get(kind, [])
            rows = ((m, R, ratio) for m, (R, ratio) in enumerate(zip(seq, ratios), start=1))
            written.append(write_csv(out_dir / f"sequence_{kind}_N{report.N}.csv", ["m", "R", "ratio"], rows))
        fem_rows = sorted(report.fem.items())
        written.append(write_csv(out_dir / f"fem_N{report.N}.csv", ["n", "R"], fem_rows))
    return written
