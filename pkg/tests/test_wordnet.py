from __future__ import annotations

import itertools
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locredit.errors import IntegrityError, UnknownSynsetError, WordNetParseError
from locredit.wordnet import (VIRTUAL_ROOT, Synset, SynsetId, VerbTaxonomy,
                              parse_wordnet, suffix_candidates, write_wordnet)

from .oracles import bfs_min_len, depth, undirected_graph

HEADER = "  1 license header line\n  2 another header line\n"

CHAIN_DATA = HEADER + "\n".join([
    "00001740 00 v 01 move 0 000 01 + 01 00 | change position",
    "00002000 00 v 01 travel 0 001 @ 00001740 v 0000 01 + 01 00 | journey",
    "00003000 00 v 01 run 0 001 @ 00002000 v 0000 01 + 01 00 | move fast",
]) + "\n"

CHAIN_INDEX = HEADER + "\n".join([
    "move v 1 1 ~ 1 0 00001740",
    "run v 1 1 @ 1 1 00003000",
    "travel v 1 2 @ ~ 1 0 00002000",
]) + "\n"


def sid(offset: int) -> SynsetId:
    return SynsetId(offset)


class TestParsing:
    def test_chain_fixture_shape(self, chain_tax):
        assert len(chain_tax) == 3
        assert chain_tax.max_depth == 3  # virtual-root edge counts
        assert chain_tax.synset(sid(3000)).hypernyms == (sid(2000),)
        assert chain_tax.synset(sid(1740)).hypernyms == ()

    def test_inline_chain_matches_fixture_files(self, chain_tax):
        tax = parse_wordnet(CHAIN_INDEX, CHAIN_DATA)
        assert tax.max_depth == 3
        assert tax.synsets_of("run") == [sid(3000)]

    def test_header_only_is_no_synsets(self):
        with pytest.raises(IntegrityError, match="no synsets"):
            parse_wordnet(HEADER, HEADER)

    def test_empty_input_is_parse_error(self):
        with pytest.raises(WordNetParseError):
            parse_wordnet("", "")

    def test_malformed_data_line_carries_line_number(self):
        bad = HEADER + "00001740 00 v zz move | broken\n"
        with pytest.raises(WordNetParseError) as err:
            parse_wordnet(CHAIN_INDEX, bad)
        assert err.value.line == 3
        assert "data.verb" in str(err.value)

    def test_malformed_index_line_carries_line_number(self):
        bad = HEADER + "move v one 0 1 0 00001740\n"
        with pytest.raises(WordNetParseError) as err:
            parse_wordnet(bad, CHAIN_DATA)
        assert err.value.line == 3

    def test_dangling_hypernym_is_integrity_error(self):
        data = HEADER + ("00001740 00 v 01 move 0 001 @ 00999999 v 0000 "
                         "01 + 01 00 | dangling\n")
        index = HEADER + "move v 1 0 1 0 00001740\n"
        with pytest.raises(IntegrityError, match="00999999"):
            parse_wordnet(index, data)

    def test_dangling_index_offset_is_integrity_error(self):
        index = CHAIN_INDEX + "zap v 1 0 1 0 00777777\n"
        with pytest.raises(IntegrityError, match="zap"):
            parse_wordnet(index, CHAIN_DATA)

    def test_self_hypernym_rejected(self):
        data = HEADER + ("00001740 00 v 01 move 0 001 @ 00001740 v 0000 "
                         "01 + 01 00 | self\n")
        with pytest.raises(IntegrityError, match="itself"):
            parse_wordnet(HEADER + "move v 1 0 1 0 00001740\n", data)

    def test_hypernym_cycle_rejected(self):
        data = HEADER + "\n".join([
            "00001000 00 v 01 spin 0 001 @ 00002000 v 0000 01 + 01 00 | a",
            "00002000 00 v 01 whirl 0 001 @ 00001000 v 0000 01 + 01 00 | b",
        ]) + "\n"
        index = HEADER + "spin v 1 0 1 0 00001000\nwhirl v 1 0 1 0 00002000\n"
        with pytest.raises(IntegrityError, match="cycle"):
            parse_wordnet(index, data)

    def test_non_hypernym_pointers_ignored(self):
        data = HEADER + "\n".join([
            "00001740 00 v 01 move 0 000 01 + 01 00 | root",
            "00002000 00 v 01 travel 0 002 @ 00001740 v 0000 ~ 00003000 v 0000 "
            "01 + 01 00 | journey",
            "00003000 00 v 01 run 0 001 @ 00002000 v 0000 01 + 01 00 | fast",
        ]) + "\n"
        tax = parse_wordnet(CHAIN_INDEX, data)
        assert tax.synset(sid(2000)).hypernyms == (sid(1740),)

    def test_reparse_is_idempotent(self, all_fixture_taxonomies, campus_tax):
        taxonomies = dict(all_fixture_taxonomies, campus=campus_tax)
        for tax in taxonomies.values():
            index_text, data_text = write_wordnet(tax)
            again = parse_wordnet(index_text, data_text)
            assert again.canonical_dump() == tax.canonical_dump()


class TestLemmaLookup:
    def test_sense_order_follows_index_file(self, web_tax):
        assert web_tax.synsets_of("toil") == [sid(3000), sid(4000)]
        assert web_tax.synsets_of("moil") == [sid(4000), sid(14000)]

    def test_unknown_lemma_is_empty(self, chain_tax):
        assert chain_tax.synsets_of("zzzz") == []

    def test_normalization_reaches_same_senses(self, campus_tax):
        normalized = campus_tax.normalize_lemma("Analyze")
        assert normalized == "analyze"
        assert campus_tax.synsets_of(normalized) == campus_tax.synsets_of("analyze")

    @pytest.mark.parametrize("token,lemma", [
        ("Analyzes", "analyze"),
        ("analyzed", "analyze"),
        ("analyzing", "analyze"),
        ("applies", "apply"),
        ("designing", "design"),
        ("defined", "define"),
        ("studies", "study"),
    ])
    def test_suffix_stripping(self, campus_tax, token, lemma):
        assert campus_tax.normalize_lemma(token) == lemma

    def test_unstrippable_token_is_none(self, campus_tax):
        assert campus_tax.normalize_lemma("databases") is None

    def test_suffix_candidates_start_with_literal(self):
        assert suffix_candidates("Defines")[0] == "defines"
        assert "define" in suffix_candidates("Defines")


class TestPathQueries:
    def test_identity_distance_zero(self, chain_tax):
        assert chain_tax.shortest_path_len(sid(3000), sid(3000)) == 0

    def test_chain_run_to_move_is_two(self, chain_tax):
        assert chain_tax.shortest_path_len(sid(3000), sid(1740)) == 2

    def test_two_roots_meet_at_virtual_root(self, forest_tax):
        # travel (00001000) and think (00005000) are both roots
        assert forest_tax.shortest_path_len(sid(1000), sid(5000)) == 2

    def test_symmetry(self, forest_tax):
        ids = list(forest_tax.synsets)
        for a, b in itertools.combinations(ids, 2):
            assert (forest_tax.shortest_path_len(a, b)
                    == forest_tax.shortest_path_len(b, a))

    def test_unknown_id_raises(self, chain_tax):
        with pytest.raises(UnknownSynsetError):
            chain_tax.shortest_path_len(sid(3000), sid(424242))

    def test_shared_descendant_shortcut(self, web_tax):
        # tinker (13000) hangs under both drudge (4000) and invent (12000),
        # so the shortest route between its parents is down-and-up.
        assert web_tax.shortest_path_len(sid(4000), sid(12000)) == 2

    def test_exhaustive_against_bfs_oracle(self, all_fixture_taxonomies):
        for tax in all_fixture_taxonomies.values():
            graph = undirected_graph(tax)
            ids = list(tax.synsets) + [VIRTUAL_ROOT]
            for a, b in itertools.combinations_with_replacement(ids, 2):
                assert tax.shortest_path_len(a, b) == bfs_min_len(graph, a, b)

    def test_triangle_inequality_exhaustive(self, web_tax):
        ids = list(web_tax.synsets)
        dist = {(a, b): web_tax.shortest_path_len(a, b)
                for a in ids for b in ids}
        for a in ids:
            for b in ids:
                for c in ids:
                    assert dist[a, b] <= dist[a, c] + dist[c, b]

    def test_min_path_len_over_sets(self, web_tax):
        toil = web_tax.synsets_of("toil")
        moil = web_tax.synsets_of("moil")
        expected = min(web_tax.shortest_path_len(a, b)
                       for a in toil for b in moil)
        assert web_tax.min_path_len_over(toil, moil) == expected


class TestLcs:
    def test_identity(self, forest_tax):
        lcs, d_lcs, d_a, d_b = forest_tax.lcs_and_depths(sid(4000), sid(4000))
        assert lcs == sid(4000)
        assert d_lcs == d_a == d_b == 3

    def test_siblings_share_parent(self, forest_tax):
        # run (00003000) and walk (00002000) both hang under travel (00001000)
        lcs, d_lcs, d_a, d_b = forest_tax.lcs_and_depths(sid(3000), sid(2000))
        assert lcs == sid(1000)
        assert (d_lcs, d_a, d_b) == (1, 2, 2)

    def test_disjoint_trees_fall_back_to_virtual_root(self, forest_tax):
        lcs, d_lcs, _, _ = forest_tax.lcs_and_depths(sid(3000), sid(6000))
        assert lcs == VIRTUAL_ROOT
        assert d_lcs == 0

    def test_depth_of_lcs_bounded_exhaustive(self, all_fixture_taxonomies):
        for tax in all_fixture_taxonomies.values():
            ids = list(tax.synsets)
            for a in ids:
                for b in ids:
                    _, d_lcs, d_a, d_b = tax.lcs_and_depths(a, b)
                    assert d_lcs <= min(d_a, d_b)

    def test_depths_match_oracle(self, all_fixture_taxonomies):
        for tax in all_fixture_taxonomies.values():
            for a in tax.synsets:
                assert tax.depth_of(a) == depth(tax, a)


def _real_wordnet_dir():
    import os
    env = os.environ.get("LOCREDIT_WORDNET_DIR")
    candidates = ([env] if env else []) + [str(Path(__file__).parent / "data" / "real")]
    for candidate in candidates:
        directory = Path(candidate)
        if (directory / "index.verb").is_file() and (directory / "data.verb").is_file():
            return directory
    return None


def test_real_wordnet_sense_counts_match_index_file():
    """With a real database, sense lists mirror the shipped index rows
    (count and first-offset), e.g. the famously polysemous 'run'."""
    directory = _real_wordnet_dir()
    if directory is None:
        pytest.skip("real WordNet not available; set LOCREDIT_WORDNET_DIR")
    from locredit import load_wordnet
    tax = load_wordnet(directory)
    for line in (directory / "index.verb").read_text().splitlines():
        if line.startswith("run "):
            fields = line.split()
            count = int(fields[2])
            first = int(fields[-count])
            break
    else:
        pytest.fail("no 'run' entry in index.verb")
    senses = tax.synsets_of("run")
    assert len(senses) == count
    assert senses[0].byte_offset == first


@st.composite
def random_taxonomy(draw):
    n = draw(st.integers(min_value=2, max_value=18))
    rows = []
    for i in range(n):
        offset = 1000 + i * 100
        if i == 0:
            parents = []
        else:
            k = draw(st.integers(min_value=0, max_value=min(2, i)))
            parents = draw(st.lists(
                st.sampled_from([1000 + j * 100 for j in range(i)]),
                min_size=k, max_size=k, unique=True))
        rows.append((offset, (f"verb{i}",), tuple(parents)))
    synsets = {SynsetId(o): Synset(SynsetId(o), lemmas,
                                   tuple(SynsetId(p) for p in parents), "g")
               for o, lemmas, parents in rows}
    lemma_index = {lemmas[0]: (SynsetId(o),) for o, lemmas, _ in rows}
    return VerbTaxonomy(synsets, lemma_index)


@settings(max_examples=60, deadline=None)
@given(random_taxonomy(), st.data())
def test_random_graphs_match_bfs_oracle(tax, data):
    graph = undirected_graph(tax)
    ids = sorted(tax.synsets, key=lambda s: s.byte_offset)
    a = data.draw(st.sampled_from(ids))
    b = data.draw(st.sampled_from(ids))
    assert tax.shortest_path_len(a, b) == bfs_min_len(graph, a, b)
    assert tax.depth_of(a) == depth(tax, a)
