"""Regenerate the frontend test fixtures from the engine.

Writes, for every golden course pair, the exact /assess response payload
plus a server-computed verdict table over the full 0.00..1.00 slider range
(step 0.01) for both thresholds.  The vitest suite replays the client
logic over the same range and demands identical verdicts everywhere.

Run from the repository root:  python frontend/tools/gen_fixtures.py
"""

from __future__ import annotations

import json
from dataclasses import replace
from pathlib import Path

from locredit import (AssessmentConfig, DeterministicProvider, assess_pair,
                      load_course_pairs, load_seed_verbs, load_wordnet)
from locredit.assessment import decide
from locredit.reporting import _canonical, result_to_dict, rounded_grid

ROOT = Path(__file__).resolve().parent.parent.parent
FIXTURES = ROOT / "frontend" / "fixtures"
GOLDEN = ROOT / "tests" / "data" / "golden"

STEPS = 101  # 0.00 .. 1.00 inclusive


def main() -> None:
    tax = load_wordnet(ROOT / "tests" / "data" / "wn_campus")
    clusters = load_seed_verbs()
    provider = DeterministicProvider()
    base = AssessmentConfig()

    payloads = {}
    tables = {}
    for pair in load_course_pairs(GOLDEN / "course_pairs.json"):
        result = assess_pair(pair.receiving, pair.sending, base, clusters, tax,
                             provider)
        payloads[pair.pair_id] = _canonical(result_to_dict(result))
        published = rounded_grid(result.final)
        rows = []
        for sim_step in range(STEPS):
            row = []
            for lo_step in range(STEPS):
                cfg = replace(base, sim_threshold=sim_step / 100,
                              lo_threshold=lo_step / 100)
                row.append("Y" if decide(published, cfg).decision == "yes"
                           else "N")
            rows.append("".join(row))
        tables[pair.pair_id] = rows

    FIXTURES.mkdir(parents=True, exist_ok=True)
    (FIXTURES / "golden_responses.json").write_text(
        json.dumps(payloads, indent=1, sort_keys=True) + "\n")
    (FIXTURES / "verdict_tables.json").write_text(
        json.dumps({"steps": STEPS, "tables": tables}, sort_keys=True) + "\n")
    print(f"wrote fixtures for {len(payloads)} pairs under {FIXTURES}")


if __name__ == "__main__":
    main()
