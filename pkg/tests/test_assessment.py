from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locredit.assessment import (AnnotationRecord, AssessmentConfig, Course,
                                 CoursePair, agreement, assess_pair, decide,
                                 final_grid, load_annotations, load_course,
                                 load_course_pairs, round_percent, sweep)
from locredit.bloom import LearningOutcome
from locredit.embeddings import DeterministicProvider, EmbeddingVector
from locredit.errors import ContractError, DatasetError, TransportError
from locredit.grids import SimilarityGrid


def grid(kind, cells, row_ids=None, col_ids=None):
    m, n = len(cells), len(cells[0])
    return SimilarityGrid(kind,
                          tuple(row_ids or [f"r{i}" for i in range(m)]),
                          tuple(col_ids or [f"s{j}" for j in range(n)]),
                          tuple(tuple(row) for row in cells))


def final(cells, **kwargs):
    return grid("final", cells, **kwargs)


class TestFinalGrid:
    def test_neutral_setting_arithmetic(self):
        fg = final_grid(grid("semantic", [[0.8]]), grid("taxonomic", [[1.0]]), 30)
        assert fg.cells[0][0] == pytest.approx(0.7 * 0.8 + 0.3 * 1.0)
        assert fg.cells[0][0] == pytest.approx(0.86)

    def test_impact_zero_equals_semantic(self):
        ssg = grid("semantic", [[0.1, 0.9], [0.4, 0.2]])
        tsg = grid("taxonomic", [[1.0, 0.0], [0.5, 0.5]])
        fg = final_grid(ssg, tsg, 0)
        assert fg.cells == ssg.cells

    def test_impact_hundred_equals_taxonomic(self):
        ssg = grid("semantic", [[0.1, 0.9], [0.4, 0.2]])
        tsg = grid("taxonomic", [[1.0, 0.0], [0.5, 0.5]])
        fg = final_grid(ssg, tsg, 100)
        assert fg.cells == tsg.cells

    def test_negative_semantic_clamps_to_zero(self):
        fg = final_grid(grid("semantic", [[-0.9]]), grid("taxonomic", [[0.1]]), 30)
        assert fg.cells[0][0] == 0.0

    def test_random_grids_match_formula(self):
        rng = random.Random(20260809)
        for _ in range(200):
            m, n = rng.randint(1, 4), rng.randint(1, 4)
            s = [[rng.random() for _ in range(n)] for _ in range(m)]
            t = [[rng.random() for _ in range(n)] for _ in range(m)]
            fg = final_grid(grid("semantic", s), grid("taxonomic", t), 30)
            for i in range(m):
                for j in range(n):
                    assert abs(fg.cells[i][j] - (0.7 * s[i][j] + 0.3 * t[i][j])) \
                        <= 1e-12

    def test_cell_between_semantic_and_taxonomic(self):
        rng = random.Random(7)
        for _ in range(100):
            s, t = rng.random(), rng.random()
            impact = rng.uniform(0, 100)
            fg = final_grid(grid("semantic", [[s]]), grid("taxonomic", [[t]]),
                            impact)
            low, high = min(s, t), max(s, t)
            assert low - 1e-12 <= fg.cells[0][0] <= high + 1e-12

    def test_kind_and_shape_mismatches_rejected(self):
        ssg = grid("semantic", [[0.5]])
        tsg = grid("taxonomic", [[0.5]])
        with pytest.raises(ContractError):
            final_grid(tsg, tsg, 30)
        with pytest.raises(ContractError):
            final_grid(ssg, grid("taxonomic", [[0.5, 0.5]]), 30)
        with pytest.raises(ContractError):
            final_grid(ssg, grid("taxonomic", [[0.5]], row_ids=["other"]), 30)
        with pytest.raises(ContractError):
            final_grid(ssg, tsg, 120)


NEUTRAL = AssessmentConfig()


class TestDecide:
    def test_single_matched_row(self):
        fg = final([[0.9, 0.2], [0.3, 0.1]])
        verdict = decide(fg, AssessmentConfig(30, 0.65, 0.5))
        assert [m.row_id for m in verdict.matched_rows] == ["r0"]
        assert verdict.matched_rows[0].best_col_id == "s0"
        assert verdict.match_fraction == 0.5
        assert verdict.decision == "yes"

    def test_higher_lo_threshold_flips_no(self):
        fg = final([[0.9, 0.2], [0.3, 0.1]])
        assert decide(fg, AssessmentConfig(30, 0.65, 0.66)).decision == "no"

    def test_nothing_matched(self):
        fg = final([[0.5, 0.2], [0.3, 0.1]])
        verdict = decide(fg, AssessmentConfig(30, 0.65, 0.5))
        assert verdict.matched_rows == ()
        assert verdict.match_fraction == 0.0
        assert verdict.decision == "no"

    def test_row_tie_picks_lowest_column(self):
        fg = final([[0.7, 0.7, 0.7]])
        verdict = decide(fg, NEUTRAL)
        assert verdict.matched_rows[0].best_col_id == "s0"

    def test_threshold_boundary_is_inclusive(self):
        fg = final([[0.65]])
        assert decide(fg, AssessmentConfig(30, 0.65, 0.5)).decision == "yes"

    @pytest.mark.parametrize("matched_rows,total,lo,expected", [
        (1, 3, 0.33, "yes"),   # 1/3 >= 33/100 exactly as rationals
        (1, 3, 0.34, "no"),
        (2, 3, 0.66, "yes"),   # 2/3 >= 66/100
        (2, 3, 0.67, "no"),
        (1, 2, 0.5, "yes"),
        (0, 2, 0.0, "yes"),    # degenerate threshold: zero matches suffice
    ])
    def test_exact_fraction_boundaries(self, matched_rows, total, lo, expected):
        cells = [[0.9] if i < matched_rows else [0.1] for i in range(total)]
        fg = final(cells)
        verdict = decide(fg, AssessmentConfig(30, 0.65, lo))
        assert verdict.decision == expected

    def test_column_permutation_invariance(self):
        cells = [[0.9, 0.7, 0.1], [0.2, 0.66, 0.3]]
        fg = final(cells)
        permuted = final([[row[2], row[0], row[1]] for row in cells],
                         col_ids=["s2", "s0", "s1"])
        a = decide(fg, NEUTRAL)
        b = decide(permuted, NEUTRAL)
        assert a.decision == b.decision
        assert a.match_fraction == b.match_fraction
        assert {m.row_id for m in a.matched_rows} == {m.row_id for m in b.matched_rows}

    def test_wrong_kind_rejected(self):
        with pytest.raises(ContractError):
            decide(grid("semantic", [[0.9]]), NEUTRAL)

    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_threshold_monotonicity(self, data):
        m = data.draw(st.integers(1, 5))
        n = data.draw(st.integers(1, 5))
        cells = [[data.draw(st.floats(0, 1)) for _ in range(n)] for _ in range(m)]
        fg = final(cells)
        low_sim = data.draw(st.floats(0, 1))
        high_sim = data.draw(st.floats(low_sim, 1))
        lo = data.draw(st.floats(0, 1))
        lenient = decide(fg, AssessmentConfig(30, low_sim, lo))
        strict = decide(fg, AssessmentConfig(30, high_sim, lo))
        assert {r.row_id for r in strict.matched_rows} <= \
            {r.row_id for r in lenient.matched_rows}
        if strict.decision == "yes":
            assert lenient.decision == "yes"
        low_lo = data.draw(st.floats(0, 1))
        high_lo = data.draw(st.floats(low_lo, 1))
        sim = data.draw(st.floats(0, 1))
        if decide(fg, AssessmentConfig(30, sim, high_lo)).decision == "yes":
            assert decide(fg, AssessmentConfig(30, sim, low_lo)).decision == "yes"


class TestAgreement:
    def test_six_of_seven(self):
        annotations = [AnnotationRecord(f"p{i}", "yes") for i in range(7)]
        decisions = {f"p{i}": "yes" for i in range(6)} | {"p6": "no"}
        assert agreement(decisions, annotations) == 85.71

    def test_four_of_seven(self):
        annotations = [AnnotationRecord(f"p{i}", "yes") for i in range(7)]
        decisions = {f"p{i}": ("yes" if i < 4 else "no") for i in range(7)}
        assert agreement(decisions, annotations) == 57.14

    def test_perfect(self):
        annotations = [AnnotationRecord("a", "yes"), AnnotationRecord("b", "no")]
        assert agreement({"a": "yes", "b": "no"}, annotations) == 100.00

    def test_relabel_symmetry(self):
        annotations = [AnnotationRecord("a", "yes"), AnnotationRecord("b", "no"),
                       AnnotationRecord("c", "yes")]
        decisions = {"a": "no", "b": "no", "c": "yes"}
        flip = {"yes": "no", "no": "yes"}
        flipped_annotations = [AnnotationRecord(r.course_pair_id,
                                                flip[r.human_decision])
                               for r in annotations]
        flipped_decisions = {k: flip[v] for k, v in decisions.items()}
        assert agreement(decisions, annotations) == \
            agreement(flipped_decisions, flipped_annotations)

    def test_id_mismatch_rejected(self):
        annotations = [AnnotationRecord("a", "yes")]
        with pytest.raises(ContractError):
            agreement({}, annotations)
        with pytest.raises(ContractError):
            agreement({"a": "yes", "b": "no"}, annotations)

    def test_round_half_up(self):
        assert round_percent(57.145) == 57.15
        assert round_percent(6 / 7 * 100) == 85.71
        assert round_percent(4 / 7 * 100) == 57.14


def course(role, cid, texts):
    outcomes = tuple(LearningOutcome(f"{cid}-lo{i}", text)
                     for i, text in enumerate(texts, start=1))
    return Course(cid, role, outcomes)


class OrthogonalProvider:
    """One axis per distinct text: every cross-text cosine is zero."""

    name = "orthogonal"
    kind = "deterministic-test"
    dimension = 16

    def __init__(self):
        self._seen: dict[str, int] = {}

    def embed_batch(self, texts):
        vectors = []
        for text in texts:
            axis = self._seen.setdefault(text, len(self._seen))
            values = [0.0] * self.dimension
            values[axis] = 1.0
            vectors.append(EmbeddingVector.of(values))
        return vectors


class FailingProvider:
    name = "failing"
    kind = "remote-service"
    dimension = None

    def embed_batch(self, texts):
        raise TransportError("endpoint down", url="http://example.invalid")


class TestAssessPair:
    def test_self_comparison_grants_credit(self, campus_tax, default_clusters):
        texts = ["Design and implement simple algorithms",
                 "Explain basic sorting routines"]
        result = assess_pair(course("receiving", "CS101", texts),
                             course("sending", "CS101-s", texts),
                             NEUTRAL, default_clusters, campus_tax,
                             DeterministicProvider())
        assert result.decision.decision == "yes"
        assert result.decision.match_fraction == 1.0
        for i in range(2):
            assert result.final.cells[i][i] == pytest.approx(1.0)

    def test_orthogonal_and_distant_denies_credit(self, campus_tax,
                                                  default_clusters):
        receiving = course("receiving", "CS201", ["Recall basic definitions"])
        sending = course("sending", "CS999", ["Design novel frameworks"])
        result = assess_pair(receiving, sending, NEUTRAL, default_clusters,
                             campus_tax, OrthogonalProvider())
        assert result.taxonomic.cells[0][0] == 0.0   # levels 1 vs 6
        assert result.semantic.cells[0][0] == 0.0
        assert result.final.cells[0][0] == 0.0
        assert result.decision.decision == "no"

    def test_role_mislabels_rejected(self, campus_tax, default_clusters):
        sending = course("sending", "A", ["Design things"])
        receiving = course("receiving", "B", ["Design things"])
        with pytest.raises(ContractError):
            assess_pair(sending, sending, NEUTRAL, default_clusters,
                        campus_tax, DeterministicProvider())
        with pytest.raises(ContractError):
            assess_pair(receiving, receiving, NEUTRAL, default_clusters,
                        campus_tax, DeterministicProvider())

    def test_provider_failure_tagged_with_stage(self, campus_tax,
                                                default_clusters):
        with pytest.raises(TransportError) as err:
            assess_pair(course("receiving", "A", ["Design things"]),
                        course("sending", "B", ["Explain things"]),
                        NEUTRAL, default_clusters, campus_tax, FailingProvider())
        assert err.value.stage == "semantic"

    def test_deterministic_across_runs(self, campus_tax, default_clusters):
        receiving = course("receiving", "A", ["Design and test data structures"])
        sending = course("sending", "B", ["Analyze and explain algorithms"])
        one = assess_pair(receiving, sending, NEUTRAL, default_clusters,
                          campus_tax, DeterministicProvider())
        two = assess_pair(receiving, sending, NEUTRAL, default_clusters,
                          campus_tax, DeterministicProvider())
        assert one.final.cells == two.final.cells
        assert one.decision == two.decision


class TestDocuments:
    def test_load_course_roundtrip(self, tmp_path):
        doc = {"course_id": "CS101", "role": "receiving",
               "learning_outcomes": [{"id": "lo1", "text": "Design things"}]}
        path = tmp_path / "course.json"
        path.write_text(json.dumps(doc), encoding="utf-8")
        loaded = load_course(path, expected_role="receiving")
        assert loaded.course_id == "CS101"
        assert loaded.outcomes[0].text == "Design things"

    def test_role_mismatch_rejected(self, tmp_path):
        doc = {"course_id": "CS101", "role": "sending",
               "learning_outcomes": [{"id": "lo1", "text": "Design things"}]}
        path = tmp_path / "course.json"
        path.write_text(json.dumps(doc), encoding="utf-8")
        with pytest.raises(DatasetError, match="expected 'receiving'"):
            load_course(path, expected_role="receiving")

    def test_missing_fields_rejected(self, tmp_path):
        path = tmp_path / "course.json"
        path.write_text(json.dumps({"course_id": "X"}), encoding="utf-8")
        with pytest.raises(DatasetError):
            load_course(path)

    def test_duplicate_outcome_ids_rejected(self, tmp_path):
        doc = {"course_id": "CS101", "role": "sending",
               "learning_outcomes": [{"id": "lo1", "text": "a"},
                                     {"id": "lo1", "text": "b"}]}
        path = tmp_path / "course.json"
        path.write_text(json.dumps(doc), encoding="utf-8")
        with pytest.raises(DatasetError, match="duplicate"):
            load_course(path)

    def test_load_annotations(self, tmp_path):
        path = tmp_path / "ann.csv"
        path.write_text("# header comment\npair-1,yes\npair-2,no\n",
                        encoding="utf-8")
        records = load_annotations(path)
        assert [(r.course_pair_id, r.human_decision) for r in records] == [
            ("pair-1", "yes"), ("pair-2", "no")]

    def test_bad_annotation_row(self, tmp_path):
        path = tmp_path / "ann.csv"
        path.write_text("pair-1,maybe\n", encoding="utf-8")
        with pytest.raises(DatasetError) as err:
            load_annotations(path)
        assert err.value.line == 1


def _sweep_pairs():
    return [
        CoursePair("twin",
                   course("receiving", "R1", ["Design and test algorithms"]),
                   course("sending", "S1", ["Design and test algorithms"])),
        CoursePair("distant",
                   course("receiving", "R2", ["Recall basic definitions"]),
                   course("sending", "S2", ["Invent novel frameworks"])),
    ]


class TestSweep:
    def test_match_fractions_monotone_in_sim_threshold(self, campus_tax,
                                                       default_clusters):
        result = sweep(_sweep_pairs(), NEUTRAL, "sim_threshold",
                       [0.3, 0.5, 0.7, 0.9], default_clusters, campus_tax,
                       DeterministicProvider())
        for fractions in result.match_fractions:
            assert list(fractions) == sorted(fractions, reverse=True)

    def test_impact_sweep_recomputes_grid(self, campus_tax, default_clusters):
        result = sweep(_sweep_pairs(), NEUTRAL, "impact", [0, 50, 100],
                       default_clusters, campus_tax, DeterministicProvider())
        assert result.decisions[0] == ("yes", "yes", "yes")  # identical texts

    def test_agreement_row(self, campus_tax, default_clusters):
        annotations = [AnnotationRecord("twin", "yes"),
                       AnnotationRecord("distant", "no")]
        result = sweep(_sweep_pairs(), NEUTRAL, "sim_threshold", [0.65],
                       default_clusters, campus_tax, DeterministicProvider(),
                       annotations)
        assert result.agreements == (100.00,)

    def test_bad_param_and_empty_values(self, campus_tax, default_clusters):
        with pytest.raises(ContractError):
            sweep(_sweep_pairs(), NEUTRAL, "alpha", [0.5], default_clusters,
                  campus_tax, DeterministicProvider())
        with pytest.raises(ContractError):
            sweep(_sweep_pairs(), NEUTRAL, "impact", [], default_clusters,
                  campus_tax, DeterministicProvider())

    def test_out_of_range_value_rejected_before_work(self, campus_tax,
                                                     default_clusters):
        with pytest.raises(ContractError):
            sweep(_sweep_pairs(), NEUTRAL, "impact", [120], default_clusters,
                  campus_tax, DeterministicProvider())

    def test_pairs_file_loading(self, tmp_path):
        payload = [{"pair_id": "p1",
                    "receiving": {"course_id": "R", "role": "receiving",
                                  "learning_outcomes": [{"id": "a", "text": "t"}]},
                    "sending": {"course_id": "S", "role": "sending",
                                "learning_outcomes": [{"id": "b", "text": "u"}]}}]
        path = tmp_path / "pairs.json"
        path.write_text(json.dumps(payload), encoding="utf-8")
        pairs = load_course_pairs(path)
        assert pairs[0].pair_id == "p1"
        assert pairs[0].receiving.role == "receiving"
