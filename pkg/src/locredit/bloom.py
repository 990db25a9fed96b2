"""Pass 1: verb detection, Bloom-cluster assignment, and the taxonomic grid.

Each outcome's verbs are found with a lexicon-plus-position heuristic,
placed into one of six ordered competency clusters (direct seed lookup,
silhouette-width assignment otherwise), and the outcome takes the highest
verb level.  Grid cells publish 1 − |level difference| / 5.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, replace
from pathlib import Path

from . import verbsim
from .errors import ContractError, SeedFileError, VerbAssignmentError
from .grids import SimilarityGrid
from .wordnet import VerbTaxonomy, suffix_candidates

logger = logging.getLogger(__name__)

LEVEL_COUNT = 6

#: Auxiliary/support verbs ignored by detection.
DEFAULT_STOP_VERBS = frozenset({"be", "have", "do", "use"})

#: Tokens after which a verb is accepted mid-sentence.
_CONTINUATION_TOKENS = frozenset({"to", "and", ","})

_TOKEN_RE = re.compile(r"[A-Za-z][A-Za-z'-]*|,")

_SECTION_RE = re.compile(r"^\[(\d+)\]\s*(.+?)\s*$")

_DEFAULT_SEED_PATH = Path(__file__).parent / "data" / "bloom_seed_verbs.txt"


@dataclass(frozen=True)
class BloomCluster:
    level: int
    name: str
    seed_verbs: tuple[str, ...]


@dataclass(frozen=True)
class BloomClusterSet:
    """Six ordered clusters of illustrative verbs, one per competency level."""

    clusters: tuple[BloomCluster, ...]

    def __post_init__(self):
        if [c.level for c in self.clusters] != list(range(1, LEVEL_COUNT + 1)):
            raise SeedFileError("cluster levels must be exactly 1..6 in order")
        seen: dict[str, int] = {}
        for cluster in self.clusters:
            if not cluster.seed_verbs:
                raise SeedFileError(f"cluster {cluster.level} has no seed verbs")
            for verb in cluster.seed_verbs:
                if verb in seen:
                    raise SeedFileError(
                        f"seed verb {verb!r} appears in levels {seen[verb]} "
                        f"and {cluster.level}")
                seen[verb] = cluster.level

    def seed_match(self, verb: str) -> tuple[str, int] | None:
        """(seed lemma, level) for a seed verb, trying suffix-stripped
        variants of the token; None for non-seeds."""
        table = self._seed_table()
        for candidate in suffix_candidates(verb):
            if candidate in table:
                return candidate, table[candidate]
        return None

    def seed_level(self, verb: str) -> int | None:
        match = self.seed_match(verb)
        return match[1] if match else None

    def _seed_table(self) -> dict[str, int]:
        table = getattr(self, "_table", None)
        if table is None:
            table = {v: c.level for c in self.clusters for v in c.seed_verbs}
            object.__setattr__(self, "_table", table)
        return table

    def level_name(self, level: int) -> str:
        return self.clusters[level - 1].name

    def unresolved_seeds(self, tax: VerbTaxonomy) -> list[str]:
        """Seed verbs with no synset in the taxonomy (warned, not fatal)."""
        missing = [v for c in self.clusters for v in c.seed_verbs
                   if tax.normalize_lemma(v) is None]
        if missing:
            logger.warning("seed verbs missing from the taxonomy: %s",
                           ", ".join(missing))
        return missing


def parse_seed_verbs(text: str, source: str = "seed-verbs") -> BloomClusterSet:
    """Parse the seed-verb file: six ``[level] Name`` sections, each followed
    by comma- or whitespace-separated verbs.  ``#`` starts a comment."""
    clusters: list[BloomCluster] = []
    current: tuple[int, str, list[str]] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        header = _SECTION_RE.match(line)
        if header:
            if current:
                clusters.append(BloomCluster(current[0], current[1], tuple(current[2])))
            try:
                level = int(header.group(1))
            except ValueError as exc:
                raise SeedFileError("bad level number", source=source, line=lineno) from exc
            current = (level, header.group(2), [])
            continue
        if current is None:
            raise SeedFileError(f"verbs before any [level] section: {line!r}",
                                source=source, line=lineno)
        for verb in re.split(r"[,\s]+", line):
            if verb:
                current[2].append(verb.lower())
    if current:
        clusters.append(BloomCluster(current[0], current[1], tuple(current[2])))
    if len(clusters) != LEVEL_COUNT:
        raise SeedFileError(f"expected {LEVEL_COUNT} sections, found {len(clusters)}",
                            source=source)
    return BloomClusterSet(tuple(clusters))


def load_seed_verbs(path: str | Path | None = None) -> BloomClusterSet:
    seed_path = Path(path) if path else _DEFAULT_SEED_PATH
    return parse_seed_verbs(seed_path.read_text(encoding="utf-8"), source=str(seed_path))


@dataclass(frozen=True)
class LearningOutcome:
    id: str
    text: str
    verbs: tuple[str, ...] | None = None
    level: int | None = None


@dataclass(frozen=True)
class ClusterAssignment:
    verb: str
    level: int
    method: str  # "seed" | "silhouette"
    silhouette_scores: tuple[float | None, ...] | None = None


@dataclass(frozen=True)
class OutcomeReport:
    """Per-outcome diagnostics: what was detected and how it was placed."""

    outcome_id: str
    text: str
    verbs: tuple[str, ...]
    assignments: tuple[ClusterAssignment, ...]
    skipped_verbs: tuple[str, ...]
    level: int | None


def detect_verbs(lo_text: str, tax: VerbTaxonomy,
                 stop_verbs: frozenset[str] = DEFAULT_STOP_VERBS) -> list[str]:
    """Find the action verbs of a learning outcome.

    A token counts as a verb when its normalized form has a verb synset
    and it sits in an imperative position: first word of the outcome, or
    right after "to", "and", or a comma.  Stop verbs are dropped.
    """
    if not lo_text or not lo_text.strip():
        raise ContractError("empty learning outcome text")
    found: list[str] = []
    previous: str | None = None
    for token in _TOKEN_RE.findall(lo_text):
        if token == ",":
            previous = ","
            continue
        eligible = previous is None or previous in _CONTINUATION_TOKENS
        previous = token.lower()
        if not eligible:
            continue
        lemma = tax.normalize_lemma(token)
        if lemma is None or lemma in stop_verbs or lemma in found:
            continue
        found.append(lemma)
    return found


def silhouette_assign(verb: str, clusters: BloomClusterSet,
                      tax: VerbTaxonomy) -> ClusterAssignment:
    """Place a non-seed verb in the cluster with the widest silhouette.

    Distances are 1 − wup_max.  For each candidate cluster, a is the mean
    distance to that cluster's seeds and b the smallest mean distance to
    any other cluster; the silhouette is (b − a) / max(a, b).  Seeds the
    taxonomy cannot score are skipped; a cluster with no scorable seed is
    excluded.  Ties go to the lower level.
    """
    lemma = tax.normalize_lemma(verb)
    if lemma is None:
        raise VerbAssignmentError(f"verb {verb!r} has no synsets in the taxonomy")

    means: list[float | None] = []
    for cluster in clusters.clusters:
        distances = []
        for seed in cluster.seed_verbs:
            similarity = verbsim.verb_sim(tax, "wup_max", lemma, seed)
            if similarity is not None:
                distances.append(1.0 - similarity)
        means.append(sum(distances) / len(distances) if distances else None)

    candidates = [i for i, mean in enumerate(means) if mean is not None]
    if not candidates:
        raise VerbAssignmentError(
            f"no cluster has seeds scorable against {verb!r}")

    scores: list[float | None] = [None] * LEVEL_COUNT
    if len(candidates) == 1:
        scores[candidates[0]] = 0.0
    else:
        for i in candidates:
            a = means[i]
            b = min(means[j] for j in candidates if j != i)
            denom = max(a, b)
            scores[i] = (b - a) / denom if denom > 0 else 0.0

    best = min(candidates)
    for i in candidates:
        if scores[i] > scores[best]:
            best = i
    return ClusterAssignment(lemma, best + 1, "silhouette", tuple(scores))


def assign_verb(verb: str, clusters: BloomClusterSet,
                tax: VerbTaxonomy) -> ClusterAssignment:
    """Seed lookup first; silhouette assignment for everything else."""
    match = clusters.seed_match(verb)
    if match is not None:
        lemma, level = match
        return ClusterAssignment(lemma, level, "seed")
    return silhouette_assign(verb, clusters, tax)


class VerbAssigner:
    """Memoizing wrapper over assign_verb; one instance per assessment run."""

    def __init__(self, clusters: BloomClusterSet, tax: VerbTaxonomy):
        self.clusters = clusters
        self.tax = tax
        self._memo: dict[str, ClusterAssignment] = {}

    def assign(self, verb: str) -> ClusterAssignment:
        key = verb.lower()
        if key not in self._memo:
            self._memo[key] = assign_verb(key, self.clusters, self.tax)
        return self._memo[key]


def lo_level(lo: LearningOutcome, clusters: BloomClusterSet, tax: VerbTaxonomy,
             assigner: VerbAssigner | None = None) -> int | None:
    """Highest assignable verb level of an outcome; None when nothing assigns."""
    if lo.verbs is None:
        raise ContractError(f"outcome {lo.id!r} has no detected verbs yet")
    assigner = assigner or VerbAssigner(clusters, tax)
    levels = []
    for verb in lo.verbs:
        try:
            levels.append(assigner.assign(verb).level)
        except VerbAssignmentError:
            continue
    return max(levels) if levels else None


def classify_outcome(lo: LearningOutcome, clusters: BloomClusterSet,
                     tax: VerbTaxonomy, assigner: VerbAssigner | None = None,
                     ) -> tuple[LearningOutcome, OutcomeReport]:
    """Detect verbs if needed, assign each, and lift the outcome level."""
    assigner = assigner or VerbAssigner(clusters, tax)
    verbs = lo.verbs if lo.verbs is not None else tuple(detect_verbs(lo.text, tax))
    assignments: list[ClusterAssignment] = []
    skipped: list[str] = []
    for verb in verbs:
        try:
            assignments.append(assigner.assign(verb))
        except VerbAssignmentError:
            logger.debug("verb skipped: %r has no cluster", verb)
            skipped.append(verb)
    level = max((a.level for a in assignments), default=None)
    annotated = replace(lo, verbs=tuple(verbs), level=level)
    report = OutcomeReport(lo.id, lo.text, tuple(verbs), tuple(assignments),
                           tuple(skipped), level)
    return annotated, report


def classify_outcomes(outcomes: list[LearningOutcome], clusters: BloomClusterSet,
                      tax: VerbTaxonomy, assigner: VerbAssigner | None = None,
                      ) -> tuple[list[LearningOutcome], list[OutcomeReport]]:
    assigner = assigner or VerbAssigner(clusters, tax)
    annotated, reports = [], []
    for lo in outcomes:
        one, report = classify_outcome(lo, clusters, tax, assigner)
        annotated.append(one)
        reports.append(report)
    return annotated, reports


def level_similarity(level_a: int, level_b: int) -> float:
    """1 − |Δlevel| / 5: 1.0 for equal levels, 0.0 for levels 1 vs 6."""
    return 1.0 - abs(level_a - level_b) / (LEVEL_COUNT - 1)


def taxonomic_grid(receiving: list[LearningOutcome], sending: list[LearningOutcome],
                   clusters: BloomClusterSet, tax: VerbTaxonomy,
                   assigner: VerbAssigner | None = None) -> SimilarityGrid:
    """Taxonomic similarity grid over receiving (rows) × sending (columns).

    Cells involving an outcome with no assignable level carry the neutral
    value 0.5 and are flagged in ``neutral_cells``.
    """
    if not receiving or not sending:
        raise ContractError("both courses need at least one learning outcome")
    assigner = assigner or VerbAssigner(clusters, tax)
    rows, _ = classify_outcomes(receiving, clusters, tax, assigner)
    cols, _ = classify_outcomes(sending, clusters, tax, assigner)
    cells = []
    neutral = []
    for i, r in enumerate(rows):
        row = []
        for j, s in enumerate(cols):
            if r.level is None or s.level is None:
                row.append(0.5)
                neutral.append((i, j))
            else:
                row.append(level_similarity(r.level, s.level))
        cells.append(tuple(row))
    return SimilarityGrid("taxonomic",
                          tuple(lo.id for lo in receiving),
                          tuple(lo.id for lo in sending),
                          tuple(cells), tuple(neutral))
