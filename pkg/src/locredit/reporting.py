"""Report serialization: canonical JSON, delimited tables, and plain text.

The CLI and the HTTP service both emit grids through ``canonical_json`` so
cross-interface outputs compare byte-for-byte: keys sorted, floats rounded
to six decimals, no timestamps.  Reported decisions are recomputed from
the rounded final grid, so a consumer re-running the threshold rule on the
published numbers always reproduces the published verdict.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .assessment import AssessmentResult, SweepResult, decide
from .bloom import ClusterAssignment, OutcomeReport
from .grids import SimilarityGrid
from .verbsim import MeasureReport


def round6(value: float) -> float:
    rounded = round(value, 6)
    return 0.0 if rounded == 0.0 else rounded  # normalize -0.0


def _canonical(value):
    if isinstance(value, float):
        return round6(value)
    if isinstance(value, dict):
        return {k: _canonical(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_canonical(v) for v in value]
    return value


def canonical_json(payload) -> str:
    return json.dumps(_canonical(payload), sort_keys=True, separators=(",", ":"))


# -- dict builders -----------------------------------------------------------


def grid_to_dict(grid: SimilarityGrid) -> dict:
    return {
        "kind": grid.kind,
        "row_ids": list(grid.row_ids),
        "col_ids": list(grid.col_ids),
        "cells": [list(row) for row in grid.cells],
        "neutral_cells": [list(c) for c in grid.neutral_cells],
    }


def rounded_grid(grid: SimilarityGrid) -> SimilarityGrid:
    """The grid as a consumer of canonical JSON sees it: six-decimal cells."""
    return SimilarityGrid(grid.kind, grid.row_ids, grid.col_ids,
                          tuple(tuple(round6(v) for v in row)
                                for row in grid.cells),
                          grid.neutral_cells)


def assignment_to_dict(assignment: ClusterAssignment) -> dict:
    return {
        "verb": assignment.verb,
        "level": assignment.level,
        "method": assignment.method,
        "silhouette_scores": (None if assignment.silhouette_scores is None
                              else list(assignment.silhouette_scores)),
    }


def outcome_report_to_dict(report: OutcomeReport) -> dict:
    return {
        "outcome_id": report.outcome_id,
        "text": report.text,
        "verbs": list(report.verbs),
        "assignments": [assignment_to_dict(a) for a in report.assignments],
        "skipped_verbs": list(report.skipped_verbs),
        "level": report.level,
    }


def result_to_dict(result: AssessmentResult) -> dict:
    # Re-decide on the rounded grid so the published decision is exactly
    # recomputable from the published cells (the engine decision can only
    # differ when a cell sits within 5e-7 of sim_threshold).
    decision = decide(rounded_grid(result.final), result.config)
    return {
        "receiving_course": result.receiving_id,
        "sending_course": result.sending_id,
        "config": {
            "impact": result.config.impact,
            "sim_threshold": result.config.sim_threshold,
            "lo_threshold": result.config.lo_threshold,
        },
        "grids": {
            "taxonomic": grid_to_dict(result.taxonomic),
            "semantic": grid_to_dict(result.semantic),
            "final": grid_to_dict(result.final),
        },
        "outcome_diagnostics": {
            "receiving": [outcome_report_to_dict(r) for r in result.receiving_reports],
            "sending": [outcome_report_to_dict(r) for r in result.sending_reports],
        },
        "matched_rows": [
            {"receiving_lo": m.row_id, "best_sending_lo": m.best_col_id,
             "score": m.score}
            for m in decision.matched_rows
        ],
        "match_fraction": decision.match_fraction,
        "decision": decision.decision,
    }


def measure_report_to_dict(report: MeasureReport) -> dict:
    return {
        "total_pairs": report.total_pairs,
        "best_measure": report.best_measure,
        "measures": [
            {"measure": row.measure, "r": row.r, "coverage": row.coverage,
             "scored_pairs": row.scored}
            for row in report.rows
        ],
    }


def sweep_to_dict(result: SweepResult) -> dict:
    payload = {
        "param": result.param,
        "values": list(result.values),
        "pairs": [
            {"pair_id": pid,
             "decisions": list(result.decisions[i]),
             "match_fractions": list(result.match_fractions[i])}
            for i, pid in enumerate(result.pair_ids)
        ],
    }
    if result.agreements is not None:
        payload["agreement"] = list(result.agreements)
    return payload


# -- delimited writers -------------------------------------------------------


def write_grid_csv(grid: SimilarityGrid, path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([grid.kind] + list(grid.col_ids))
        for row_id, row in zip(grid.row_ids, grid.cells):
            writer.writerow([row_id] + [f"{round6(v):.6f}" for v in row])


def write_measures_csv(report: MeasureReport, path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["measure", "pearson_r", "coverage", "scored_pairs"])
        for row in report.rows:
            writer.writerow([row.measure,
                             "" if row.r is None else f"{round6(row.r):.6f}",
                             f"{round6(row.coverage):.6f}", row.scored])


def write_sweep_csv(result: SweepResult, path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"{result.param}="] +
                        [f"{v:g}" for v in result.values])
        for i, pid in enumerate(result.pair_ids):
            writer.writerow([pid] + list(result.decisions[i]))
        if result.agreements is not None:
            writer.writerow(["agreement_percent"] +
                            [f"{a:.2f}" for a in result.agreements])


# -- plain-text renderers ----------------------------------------------------


def _grid_lines(grid: SimilarityGrid, title: str) -> list[str]:
    width = max([len(r) for r in grid.row_ids] + [8])
    lines = [title, " " * width + "  " + "  ".join(f"{c:>8}" for c in grid.col_ids)]
    for row_id, row in zip(grid.row_ids, grid.cells):
        lines.append(f"{row_id:>{width}}  " + "  ".join(f"{v:8.4f}" for v in row))
    return lines


def render_result_text(result: AssessmentResult) -> str:
    decision = result.decision
    cfg = result.config
    lines = [
        f"Receiving course: {result.receiving_id}",
        f"Sending course:   {result.sending_id}",
        f"Parameters: impact={cfg.impact:g}%  sim_threshold={cfg.sim_threshold:g}  "
        f"lo_threshold={cfg.lo_threshold:g}",
        "",
    ]
    lines += _grid_lines(result.taxonomic, "Taxonomic similarity grid:")
    lines.append("")
    lines += _grid_lines(result.semantic, "Semantic similarity grid:")
    lines.append("")
    lines += _grid_lines(result.final, "Final similarity grid:")
    lines.append("")
    if decision.matched_rows:
        lines.append("Matched learning outcomes:")
        for m in decision.matched_rows:
            lines.append(f"  {m.row_id} <- {m.best_col_id}  ({m.score:.4f})")
    else:
        lines.append("Matched learning outcomes: none")
    lines.append(f"Match fraction: {decision.match_fraction:.4f}")
    lines.append(f"Credit decision: {decision.decision.upper()}")
    return "\n".join(lines)


def render_measure_text(report: MeasureReport) -> str:
    lines = [f"Measure evaluation over {report.total_pairs} verb pairs:",
             f"{'measure':<16}{'pearson r':>12}{'coverage':>12}{'scored':>8}"]
    for row in report.rows:
        r_text = "undefined" if row.r is None else f"{row.r:.4f}"
        lines.append(f"{row.measure:<16}{r_text:>12}{row.coverage:>12.4f}"
                     f"{row.scored:>8}")
    lines.append(f"Best measure: {report.best_measure or 'none'}")
    return "\n".join(lines)


def render_sweep_text(result: SweepResult) -> str:
    header = [f"{result.param}"] + [f"{v:g}" for v in result.values]
    widths = [max(12, len(h) + 2) for h in header]
    lines = ["".join(h.ljust(w) for h, w in zip(header, widths))]
    for i, pid in enumerate(result.pair_ids):
        row = [pid] + list(result.decisions[i])
        lines.append("".join(str(c).ljust(w) for c, w in zip(row, widths)))
    if result.agreements is not None:
        row = ["agreement %"] + [f"{a:.2f}" for a in result.agreements]
        lines.append("".join(str(c).ljust(w) for c, w in zip(row, widths)))
    return "\n".join(lines)
