"""Pass 3: grid aggregation, thresholding, credit decisions, and agreement.

The ``impact`` parameter is the taxonomic share of the final cell value
(the semantic grid gets the remaining 100 − impact percent).  A receiving
outcome is matched when its best final-grid cell reaches ``sim_threshold``;
credit is granted when the matched fraction reaches ``lo_threshold``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from .bloom import (BloomClusterSet, LearningOutcome, OutcomeReport,
                    VerbAssigner, classify_outcomes, taxonomic_grid)
from .embeddings import semantic_grid
from .errors import ContractError, DatasetError, LocreditError
from .grids import SimilarityGrid
from .wordnet import VerbTaxonomy

ROLES = ("receiving", "sending")


@dataclass(frozen=True)
class AssessmentConfig:
    """The three leniency parameters; higher values mean stricter decisions."""

    impact: float = 30.0
    sim_threshold: float = 0.65
    lo_threshold: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.impact <= 100.0:
            raise ContractError(f"impact must be in 0..100, got {self.impact}")
        if not 0.0 <= self.sim_threshold <= 1.0:
            raise ContractError(
                f"sim_threshold must be in 0..1, got {self.sim_threshold}")
        if not 0.0 <= self.lo_threshold <= 1.0:
            raise ContractError(
                f"lo_threshold must be in 0..1, got {self.lo_threshold}")


@dataclass(frozen=True)
class Course:
    course_id: str
    role: str
    outcomes: tuple[LearningOutcome, ...]

    def __post_init__(self):
        if self.role not in ROLES:
            raise ContractError(f"course role must be one of {ROLES}, "
                                f"got {self.role!r}")


@dataclass(frozen=True)
class MatchedRow:
    row_id: str
    best_col_id: str
    score: float


@dataclass(frozen=True)
class CreditDecision:
    decision: str  # "yes" | "no"
    matched_rows: tuple[MatchedRow, ...]
    match_fraction: float
    final_grid: SimilarityGrid


@dataclass(frozen=True)
class AssessmentResult:
    """Everything a report needs: grids, diagnostics, and the decision."""

    receiving_id: str
    sending_id: str
    taxonomic: SimilarityGrid
    semantic: SimilarityGrid
    final: SimilarityGrid
    receiving_reports: tuple[OutcomeReport, ...]
    sending_reports: tuple[OutcomeReport, ...]
    decision: CreditDecision
    config: AssessmentConfig


@dataclass(frozen=True)
class AnnotationRecord:
    course_pair_id: str
    human_decision: str


def final_grid(ssg: SimilarityGrid, tsg: SimilarityGrid,
               impact: float) -> SimilarityGrid:
    """Blend the two grids: (1 − impact/100)·semantic + (impact/100)·taxonomic.

    Cells driven negative by a negative cosine clamp at 0.
    """
    if ssg.kind != "semantic" or tsg.kind != "taxonomic":
        raise ContractError(
            f"expected semantic and taxonomic grids, got {ssg.kind} and {tsg.kind}")
    if not ssg.same_shape_as(tsg):
        raise ContractError("semantic and taxonomic grids disagree on "
                            "dimensions or outcome ids")
    if not 0.0 <= impact <= 100.0:
        raise ContractError(f"impact must be in 0..100, got {impact}")
    weight = impact / 100.0
    cells = tuple(
        tuple(max(0.0, (1.0 - weight) * s + weight * t)
              for s, t in zip(srow, trow))
        for srow, trow in zip(ssg.cells, tsg.cells))
    return SimilarityGrid("final", ssg.row_ids, ssg.col_ids, cells,
                          tsg.neutral_cells)


def decide(fg: SimilarityGrid, cfg: AssessmentConfig) -> CreditDecision:
    """Threshold row maxima, then the matched fraction.

    The fraction test compares exact rationals (match count over row count
    against the decimal form of lo_threshold) so boundary settings like
    1/3 and 2/3 cannot flip on float noise.
    """
    if fg.kind != "final":
        raise ContractError(f"decide needs a final grid, got {fg.kind!r}")
    matched = []
    for i in range(fg.m):
        best_j, best = fg.row_max(i)
        if best >= cfg.sim_threshold:
            matched.append(MatchedRow(fg.row_ids[i], fg.col_ids[best_j], best))
    fraction = Fraction(len(matched), fg.m)
    granted = fraction >= Fraction(str(cfg.lo_threshold))
    return CreditDecision("yes" if granted else "no", tuple(matched),
                          len(matched) / fg.m, fg)


def _stage(exc: LocreditError, stage: str) -> LocreditError:
    exc.stage = stage
    return exc


def assess_pair(receiving: Course, sending: Course, cfg: AssessmentConfig,
                clusters: BloomClusterSet, tax: VerbTaxonomy,
                provider) -> AssessmentResult:
    """Run all three passes on a course pair.

    Deterministic for deterministic providers.  Errors gain a ``stage``
    attribute naming the pass that raised.
    """
    if receiving.role != "receiving":
        raise ContractError(f"course {receiving.course_id!r} is labeled "
                            f"{receiving.role!r}, expected 'receiving'")
    if sending.role != "sending":
        raise ContractError(f"course {sending.course_id!r} is labeled "
                            f"{sending.role!r}, expected 'sending'")
    if not receiving.outcomes or not sending.outcomes:
        raise ContractError("both courses must carry at least one learning outcome")

    assigner = VerbAssigner(clusters, tax)
    rlos, slos = list(receiving.outcomes), list(sending.outcomes)
    try:
        _, r_reports = classify_outcomes(rlos, clusters, tax, assigner)
        _, s_reports = classify_outcomes(slos, clusters, tax, assigner)
        tsg = taxonomic_grid(rlos, slos, clusters, tax, assigner)
    except LocreditError as exc:
        raise _stage(exc, "taxonomic")
    try:
        ssg = semantic_grid(rlos, slos, provider)
    except LocreditError as exc:
        raise _stage(exc, "semantic")
    try:
        fg = final_grid(ssg, tsg, cfg.impact)
        decision = decide(fg, cfg)
    except LocreditError as exc:
        raise _stage(exc, "aggregation")
    return AssessmentResult(receiving.course_id, sending.course_id,
                            tsg, ssg, fg, tuple(r_reports), tuple(s_reports),
                            decision, cfg)


def round_percent(value: float) -> float:
    """Two decimals, round half up (report convention for percentages)."""
    return float(Decimal(str(value)).quantize(Decimal("0.01"), ROUND_HALF_UP))


def agreement(decisions: Mapping[str, str | CreditDecision],
              annotations: list[AnnotationRecord]) -> float:
    """Percent of course pairs where the engine matches the annotation."""
    if not annotations:
        raise ContractError("no annotations to compare against")
    ids = [a.course_pair_id for a in annotations]
    if len(set(ids)) != len(ids):
        raise ContractError("duplicate course_pair_id in annotations")
    missing = [i for i in ids if i not in decisions]
    if missing:
        raise ContractError(f"no decision for annotated pairs: {', '.join(missing)}")
    extra = [i for i in decisions if i not in set(ids)]
    if extra:
        raise ContractError(f"decisions without annotations: {', '.join(extra)}")
    equal = 0
    for record in annotations:
        verdict = decisions[record.course_pair_id]
        if isinstance(verdict, CreditDecision):
            verdict = verdict.decision
        if verdict == record.human_decision:
            equal += 1
    return round_percent(100.0 * equal / len(annotations))


# -- input documents ---------------------------------------------------------


def course_from_dict(data: dict, source: str = "course",
                     expected_role: str | None = None) -> Course:
    """Build a Course from the document format
    {course_id, role, learning_outcomes: [{id, text}]}."""
    if not isinstance(data, dict):
        raise DatasetError("course document must be a JSON object", source=source)
    try:
        course_id = data["course_id"]
        role = data["role"]
        raw_outcomes = data["learning_outcomes"]
    except KeyError as exc:
        raise DatasetError(f"course document missing field {exc}", source=source) from exc
    if role not in ROLES:
        raise DatasetError(f"role must be one of {ROLES}, got {role!r}", source=source)
    if expected_role and role != expected_role:
        raise DatasetError(
            f"course {course_id!r} is labeled {role!r}, expected {expected_role!r}",
            source=source)
    if not isinstance(raw_outcomes, list) or not raw_outcomes:
        raise DatasetError("learning_outcomes must be a nonempty list", source=source)
    outcomes = []
    seen = set()
    for i, lo in enumerate(raw_outcomes):
        if not isinstance(lo, dict) or "id" not in lo or "text" not in lo:
            raise DatasetError(f"learning_outcomes[{i}] needs id and text",
                               source=source)
        if lo["id"] in seen:
            raise DatasetError(f"duplicate outcome id {lo['id']!r}", source=source)
        seen.add(lo["id"])
        outcomes.append(LearningOutcome(str(lo["id"]), str(lo["text"])))
    return Course(str(course_id), role, tuple(outcomes))


def load_course(path: str | Path, expected_role: str | None = None) -> Course:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except ValueError as exc:
        raise DatasetError(f"invalid JSON: {exc}", source=str(path)) from exc
    return course_from_dict(data, source=str(path), expected_role=expected_role)


@dataclass(frozen=True)
class CoursePair:
    pair_id: str
    receiving: Course
    sending: Course


def load_course_pairs(path: str | Path) -> list[CoursePair]:
    """Read a JSON list of {pair_id, receiving: <course>, sending: <course>}."""
    source = str(path)
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except ValueError as exc:
        raise DatasetError(f"invalid JSON: {exc}", source=source) from exc
    if not isinstance(data, list) or not data:
        raise DatasetError("expected a nonempty JSON list of course pairs",
                           source=source)
    pairs = []
    seen = set()
    for i, entry in enumerate(data):
        if not isinstance(entry, dict) or "pair_id" not in entry:
            raise DatasetError(f"pair [{i}] needs a pair_id", source=source)
        pair_id = str(entry["pair_id"])
        if pair_id in seen:
            raise DatasetError(f"duplicate pair_id {pair_id!r}", source=source)
        seen.add(pair_id)
        pairs.append(CoursePair(
            pair_id,
            course_from_dict(entry.get("receiving"), source=f"{source}[{pair_id}]",
                             expected_role="receiving"),
            course_from_dict(entry.get("sending"), source=f"{source}[{pair_id}]",
                             expected_role="sending")))
    return pairs


def load_annotations(path: str | Path) -> list[AnnotationRecord]:
    """Read annotation rows: ``course_pair_id,yes|no`` (comma or tab)."""
    source = str(path)
    records = []
    seen = set()
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(),
                                  start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in re.split(r"[,\t]", line)]
        if len(fields) != 2:
            raise DatasetError("expected 'pair_id,yes|no'", source=source, line=lineno)
        pair_id, verdict = fields
        verdict = verdict.lower()
        if verdict not in ("yes", "no"):
            raise DatasetError(f"decision must be yes or no, got {verdict!r}",
                               source=source, line=lineno)
        if pair_id in seen:
            raise DatasetError(f"duplicate pair id {pair_id!r}",
                               source=source, line=lineno)
        seen.add(pair_id)
        records.append(AnnotationRecord(pair_id, verdict))
    if not records:
        raise DatasetError("no annotation rows", source=source)
    return records


# -- parameter sweeps --------------------------------------------------------

SWEEP_PARAMS = ("impact", "sim_threshold", "lo_threshold")


@dataclass(frozen=True)
class SweepResult:
    param: str
    values: tuple[float, ...]
    pair_ids: tuple[str, ...]
    decisions: tuple[tuple[str, ...], ...]        # [pair][value]
    match_fractions: tuple[tuple[float, ...], ...]
    agreements: tuple[float, ...] | None          # per value, when annotated


def sweep(pairs: list[CoursePair], base: AssessmentConfig, param: str,
          values: list[float], clusters: BloomClusterSet, tax: VerbTaxonomy,
          provider, annotations: list[AnnotationRecord] | None = None) -> SweepResult:
    """Re-decide every pair at each parameter value.

    Grids are computed once per pair; only the final grid (for impact) or
    the decision (for thresholds) is recomputed per value.  Output order
    follows the declared value order.
    """
    if param not in SWEEP_PARAMS:
        raise ContractError(f"sweep parameter must be one of {SWEEP_PARAMS}")
    if not values:
        raise ContractError("empty sweep value range")
    if not pairs:
        raise ContractError("no course pairs to sweep")
    for value in values:
        replace(base, **{param: value})  # range check before any work

    decisions: list[list[str]] = []
    fractions: list[list[float]] = []
    per_value_verdicts: list[dict[str, str]] = [dict() for _ in values]
    for pair in pairs:
        base_result = assess_pair(pair.receiving, pair.sending, base,
                                  clusters, tax, provider)
        row_decisions = []
        row_fractions = []
        for k, value in enumerate(values):
            cfg = replace(base, **{param: value})
            fg = (final_grid(base_result.semantic, base_result.taxonomic, cfg.impact)
                  if param == "impact" else base_result.final)
            verdict = decide(fg, cfg)
            row_decisions.append(verdict.decision)
            row_fractions.append(verdict.match_fraction)
            per_value_verdicts[k][pair.pair_id] = verdict.decision
        decisions.append(row_decisions)
        fractions.append(row_fractions)

    agreements = None
    if annotations is not None:
        agreements = tuple(agreement(per_value_verdicts[k], annotations)
                           for k in range(len(values)))
    return SweepResult(param, tuple(values), tuple(p.pair_id for p in pairs),
                       tuple(tuple(r) for r in decisions),
                       tuple(tuple(r) for r in fractions), agreements)
