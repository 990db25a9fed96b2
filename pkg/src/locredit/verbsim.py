"""Knowledge-based verb similarity measures and the verb-pair benchmark harness.

Implements path, wup, and lch over the verb taxonomy, each in a
first-synset variant and a max-over-all-synset-pairs variant, plus
optional word-vector measures, and a Pearson-correlation evaluation
against a gold-scored verb-pair dataset.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from pathlib import Path

from .errors import ComputationError, ContractError, DatasetError
from .wordnet import SynsetId, VerbTaxonomy

#: Measures defined directly on the taxonomy, in canonical report order.
KNOWLEDGE_MEASURES = ("path", "wup", "lch", "path_max", "wup_max", "lch_max")

_VECTOR_PREFIX = "vector:"


def validate_measure(name: str) -> str:
    if name in KNOWLEDGE_MEASURES:
        return name
    if name.startswith(_VECTOR_PREFIX) and len(name) > len(_VECTOR_PREFIX):
        return name
    raise ContractError(
        f"unknown measure {name!r}; expected one of {', '.join(KNOWLEDGE_MEASURES)} "
        f"or vector:<name>")


def vector_table_name(measure: str) -> str | None:
    if measure.startswith(_VECTOR_PREFIX):
        return measure[len(_VECTOR_PREFIX):]
    return None


def sim_path(tax: VerbTaxonomy, t1: SynsetId, t2: SynsetId) -> float:
    """1 / (1 + shortest path length); 1.0 for identical synsets."""
    return 1.0 / (1.0 + tax.shortest_path_len(t1, t2))


def sim_wup(tax: VerbTaxonomy, t1: SynsetId, t2: SynsetId) -> float:
    """2·depth(lcs) / (depth(t1) + depth(t2)); 0.0 when only the virtual
    root subsumes both."""
    _, depth_lcs, depth_1, depth_2 = tax.lcs_and_depths(t1, t2)
    if depth_1 + depth_2 == 0:
        return 0.0
    return 2.0 * depth_lcs / (depth_1 + depth_2)


def sim_lch(tax: VerbTaxonomy, t1: SynsetId, t2: SynsetId) -> float:
    """−log(path_len / (2·max_depth)) with path_len clamped to at least 1.

    The clamp keeps identical synsets finite at log(2·max_depth).
    """
    length = max(tax.shortest_path_len(t1, t2), 1)
    return -math.log(length / (2.0 * tax.max_depth))


def _lch_from_len(tax: VerbTaxonomy, length: int) -> float:
    return -math.log(max(length, 1) / (2.0 * tax.max_depth))


@dataclass(frozen=True)
class WordVectorTable:
    """Plain-text word vectors: one ``word v1 … vD`` row per line."""

    name: str
    dimension: int
    vectors: dict[str, tuple[float, ...]]

    @classmethod
    def load(cls, path: str | Path, name: str | None = None) -> "WordVectorTable":
        source = str(path)
        vectors: dict[str, tuple[float, ...]] = {}
        dimension: int | None = None
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(),
                                      start=1):
            if not line.strip():
                continue
            fields = line.split()
            if len(fields) < 2:
                raise DatasetError("expected 'word v1 … vD'", source=source, line=lineno)
            word = fields[0].lower()
            try:
                values = tuple(float(f) for f in fields[1:])
            except ValueError as exc:
                raise DatasetError(f"bad vector component: {exc}",
                                   source=source, line=lineno) from exc
            if dimension is None:
                dimension = len(values)
            elif len(values) != dimension:
                raise DatasetError(
                    f"vector has {len(values)} components, expected {dimension}",
                    source=source, line=lineno)
            vectors[word] = values
        if not vectors:
            raise DatasetError("no vectors in file", source=source)
        return cls(name or Path(path).stem, dimension or 0, vectors)

    def similarity(self, v1: str, v2: str) -> float | None:
        a = self.vectors.get(v1.lower())
        b = self.vectors.get(v2.lower())
        if a is None or b is None:
            return None
        dot = sum(x * y for x, y in zip(a, b))
        na = math.sqrt(sum(x * x for x in a))
        nb = math.sqrt(sum(y * y for y in b))
        if na == 0.0 or nb == 0.0:
            return None
        return dot / (na * nb)


def verb_sim(tax: VerbTaxonomy, measure: str, v1: str, v2: str,
             vector_tables: dict[str, WordVectorTable] | None = None) -> float | None:
    """Similarity of two verb lemmas under a named measure.

    First-synset measures pair the first database senses; ``*_max``
    measures take the maximum over every synset pair.  Returns None when
    either lemma cannot be scored (absent from the taxonomy or vector
    vocabulary) rather than raising.
    """
    validate_measure(measure)
    table_name = vector_table_name(measure)
    if table_name is not None:
        table = (vector_tables or {}).get(table_name)
        if table is None:
            raise ContractError(f"no vector table loaded under name {table_name!r}")
        return table.similarity(v1, v2)

    lemma1 = tax.normalize_lemma(v1)
    lemma2 = tax.normalize_lemma(v2)
    if lemma1 is None or lemma2 is None:
        return None
    senses1 = tax.synsets_of(lemma1)
    senses2 = tax.synsets_of(lemma2)

    if measure == "path":
        return sim_path(tax, senses1[0], senses2[0])
    if measure == "wup":
        return sim_wup(tax, senses1[0], senses2[0])
    if measure == "lch":
        return sim_lch(tax, senses1[0], senses2[0])
    if measure == "path_max":
        return 1.0 / (1.0 + tax.min_path_len_over(senses1, senses2))
    if measure == "lch_max":
        return _lch_from_len(tax, tax.min_path_len_over(senses1, senses2))
    # wup_max: the maximizing synset pair is not the closest pair in
    # general, so enumerate.
    return max(sim_wup(tax, s1, s2) for s1 in senses1 for s2 in senses2)


def pearson(xs: list[float], ys: list[float]) -> float:
    """Sample Pearson correlation coefficient."""
    if len(xs) != len(ys):
        raise ComputationError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise ComputationError("need at least two points")
    try:
        return statistics.correlation(xs, ys)
    except statistics.StatisticsError as exc:
        raise ComputationError(str(exc)) from exc


@dataclass(frozen=True)
class VerbPairRecord:
    v1: str
    v2: str
    gold_score: float


def load_verb_pairs(path: str | Path) -> list[VerbPairRecord]:
    """Read a SimVerb-style TSV: verb1, verb2, POS, score, relation.

    Rows whose POS is not "V" are skipped; scores live on a 0–10 scale.
    """
    source = str(path)
    records: list[VerbPairRecord] = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(),
                                  start=1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) < 4:
            raise DatasetError("expected at least 4 tab-separated fields",
                               source=source, line=lineno)
        v1, v2, pos, score_field = fields[0], fields[1], fields[2], fields[3]
        if pos.strip().upper() != "V":
            continue
        if not v1.strip() or not v2.strip():
            raise DatasetError("empty verb field", source=source, line=lineno)
        try:
            score = float(score_field)
        except ValueError as exc:
            raise DatasetError(f"bad score {score_field!r}",
                               source=source, line=lineno) from exc
        if not 0.0 <= score <= 10.0:
            raise DatasetError(f"score {score} outside the 0–10 scale",
                               source=source, line=lineno)
        records.append(VerbPairRecord(v1.strip().lower(), v2.strip().lower(), score))
    if not records:
        raise DatasetError("no verb pairs in dataset", source=source)
    return records


@dataclass(frozen=True)
class MeasureScore:
    measure: str
    r: float | None
    coverage: float
    scored: int


@dataclass(frozen=True)
class MeasureReport:
    rows: tuple[MeasureScore, ...]
    best_measure: str | None
    total_pairs: int


def evaluate_measures(tax: VerbTaxonomy, dataset: list[VerbPairRecord],
                      measures: list[str],
                      vector_tables: dict[str, WordVectorTable] | None = None,
                      ) -> MeasureReport:
    """Correlate each measure's scores with the gold scores.

    Pairs a measure cannot score are skipped and reflected in its
    coverage.  A measure with fewer than two scored pairs, or with no
    score variance, is reported with r = None and excluded from the
    best-measure argmax.  Ties break toward the earlier measure in the
    caller's list.
    """
    if not dataset:
        raise ContractError("empty dataset")
    rows: list[MeasureScore] = []
    best: str | None = None
    best_r = -math.inf
    for measure in measures:
        validate_measure(measure)
        golds: list[float] = []
        scores: list[float] = []
        for record in dataset:
            score = verb_sim(tax, measure, record.v1, record.v2, vector_tables)
            if score is not None:
                golds.append(record.gold_score)
                scores.append(score)
        coverage = len(scores) / len(dataset)
        try:
            r: float | None = pearson(golds, scores)
        except ComputationError:
            r = None
        rows.append(MeasureScore(measure, r, coverage, len(scores)))
        if r is not None and r > best_r:
            best, best_r = measure, r
    return MeasureReport(tuple(rows), best, len(dataset))
