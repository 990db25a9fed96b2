"""Princeton WordNet verb-database parsing and hypernym-graph queries.

Reads the plain-text ``index.verb``/``data.verb`` files exactly as
distributed with WordNet 3.x and builds an immutable taxonomy over the
``@`` (hypernym) relation.  Verb hierarchies form a forest, so a single
virtual root is adopted as the parent of every parentless synset; all
path and depth queries count edges from that root.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from pathlib import Path

from .errors import IntegrityError, UnknownSynsetError, WordNetParseError

POS_VERB = "v"

_OFFSET_RE = re.compile(r"^\d{8}$")

# Suffix rewrites tried in order against the lemma index; standard verb
# detachment rules (s/ies/es/ed/ing with e-restoration).
SUFFIX_RULES = (
    ("s", ""),
    ("ies", "y"),
    ("es", "e"),
    ("es", ""),
    ("ed", "e"),
    ("ed", ""),
    ("ing", "e"),
    ("ing", ""),
)


@dataclass(frozen=True)
class SynsetId:
    """Identity of a synset: its data-file byte offset plus part of speech."""

    byte_offset: int
    pos: str = POS_VERB

    def __str__(self) -> str:
        return f"{self.pos}{self.byte_offset:08d}"


#: Synthetic parent of every root synset; offset 0 never occurs in real files.
VIRTUAL_ROOT = SynsetId(0)


@dataclass(frozen=True)
class Synset:
    id: SynsetId
    lemmas: tuple[str, ...]
    hypernyms: tuple[SynsetId, ...]
    gloss: str = ""


def suffix_candidates(token: str) -> list[str]:
    """Lowercased token plus its suffix-stripped variants, most literal first."""
    word = token.lower()
    candidates = [word]
    for suffix, replacement in SUFFIX_RULES:
        if word.endswith(suffix) and len(word) > len(suffix):
            candidate = word[: -len(suffix)] + replacement
            if candidate and candidate not in candidates:
                candidates.append(candidate)
    return candidates


def _parse_offset(field: str, source: str, lineno: int) -> int:
    if not _OFFSET_RE.match(field):
        raise WordNetParseError(
            f"expected 8-digit synset offset, got {field!r}",
            source=source, line=lineno,
        )
    offset = int(field)
    if offset == 0:
        raise WordNetParseError(
            "offset 00000000 is reserved for the virtual root",
            source=source, line=lineno,
        )
    return offset


def _is_content_line(line: str) -> bool:
    # License header lines start with two spaces; blank lines are ignored.
    return bool(line.strip()) and not line.startswith("  ")


def _parse_data_line(line: str, lineno: int) -> Synset:
    source = "data.verb"
    head, _, gloss = line.partition("|")
    fields = head.split()
    try:
        offset = _parse_offset(fields[0], source, lineno)
        ss_type = fields[2]
        if ss_type != POS_VERB:
            raise WordNetParseError(
                f"synset type {ss_type!r} is not a verb", source=source, line=lineno)
        w_cnt = int(fields[3], 16)
        if w_cnt < 1:
            raise WordNetParseError("empty word list", source=source, line=lineno)
        words = tuple(fields[4 + 2 * i].lower() for i in range(w_cnt))
        p_pos = 4 + 2 * w_cnt
        p_cnt = int(fields[p_pos], 10)
        hypernyms: list[SynsetId] = []
        for i in range(p_cnt):
            base = p_pos + 1 + 4 * i
            if base + 4 > len(fields):
                raise WordNetParseError(
                    f"pointer list truncated (expected {p_cnt} pointers)",
                    source=source, line=lineno)
            symbol, target, target_pos = fields[base], fields[base + 1], fields[base + 2]
            if symbol == "@" and target_pos == POS_VERB:
                hid = SynsetId(_parse_offset(target, source, lineno))
                if hid not in hypernyms:
                    hypernyms.append(hid)
        # verb frames after the pointer list are not used and are skipped
    except WordNetParseError:
        raise
    except (IndexError, ValueError) as exc:
        raise WordNetParseError(
            f"malformed synset record: {exc}", source=source, line=lineno) from exc
    return Synset(SynsetId(offset), words, tuple(hypernyms), gloss.strip())


def _parse_index_line(line: str, lineno: int) -> tuple[str, list[SynsetId]]:
    source = "index.verb"
    fields = line.split()
    try:
        lemma = fields[0].lower()
        pos = fields[1]
        if pos != POS_VERB:
            raise WordNetParseError(
                f"index entry for pos {pos!r} is not a verb", source=source, line=lineno)
        synset_cnt = int(fields[2], 10)
        p_cnt = int(fields[3], 10)
        tail = 4 + p_cnt
        int(fields[tail], 10)      # sense_cnt
        int(fields[tail + 1], 10)  # tagsense_cnt
        offsets = fields[tail + 2:]
        if len(offsets) != synset_cnt or synset_cnt < 1:
            raise WordNetParseError(
                f"expected {synset_cnt} sense offsets, found {len(offsets)}",
                source=source, line=lineno)
        senses = [SynsetId(_parse_offset(f, source, lineno)) for f in offsets]
    except WordNetParseError:
        raise
    except (IndexError, ValueError) as exc:
        raise WordNetParseError(
            f"malformed index record: {exc}", source=source, line=lineno) from exc
    return lemma, senses


class VerbTaxonomy:
    """Immutable hypernym graph over verb synsets.

    Safe to share across threads once constructed; every query is
    read-only.
    """

    def __init__(self, synsets: dict[SynsetId, Synset],
                 lemma_index: dict[str, tuple[SynsetId, ...]]):
        if not synsets:
            raise IntegrityError("no synsets in database")
        self._synsets = dict(synsets)
        self._lemma_index = dict(lemma_index)
        self.virtual_root = VIRTUAL_ROOT
        self._check_references()
        self._ancestors = self._compute_ancestors()
        self._depth = {sid: anc[VIRTUAL_ROOT] for sid, anc in self._ancestors.items()}
        self._depth[VIRTUAL_ROOT] = 0
        self.max_depth = max(self._depth.values())
        self._build_adjacency()

    # -- construction ------------------------------------------------------

    def _check_references(self) -> None:
        for sid, synset in self._synsets.items():
            for hid in synset.hypernyms:
                if hid == sid:
                    raise IntegrityError(f"synset {sid} lists itself as hypernym")
                if hid not in self._synsets:
                    raise IntegrityError(
                        f"synset {sid} points to unknown hypernym {hid}")
        for lemma, senses in self._lemma_index.items():
            for sid in senses:
                if sid not in self._synsets:
                    raise IntegrityError(
                        f"index entry {lemma!r} points to unknown synset {sid}")

    def _compute_ancestors(self) -> dict[SynsetId, dict[SynsetId, int]]:
        # Kahn order over hypernym edges: every synset after all its parents.
        children: dict[SynsetId, list[SynsetId]] = {sid: [] for sid in self._synsets}
        pending = {sid: len(s.hypernyms) for sid, s in self._synsets.items()}
        queue = deque(sid for sid, n in pending.items() if n == 0)
        ancestors: dict[SynsetId, dict[SynsetId, int]] = {}
        for sid, synset in self._synsets.items():
            for hid in synset.hypernyms:
                children[hid].append(sid)
        processed = 0
        while queue:
            sid = queue.popleft()
            processed += 1
            anc: dict[SynsetId, int] = {sid: 0}
            parents = self._synsets[sid].hypernyms
            if not parents:
                anc[VIRTUAL_ROOT] = 1
            for pid in parents:
                for aid, dist in ancestors[pid].items():
                    new = dist + 1
                    if new < anc.get(aid, new + 1):
                        anc[aid] = new
            ancestors[sid] = anc
            for cid in children[sid]:
                pending[cid] -= 1
                if pending[cid] == 0:
                    queue.append(cid)
        if processed != len(self._synsets):
            cyclic = sorted(str(s) for s, n in pending.items() if n > 0)[:5]
            raise IntegrityError(f"hypernym cycle involving {', '.join(cyclic)}")
        return ancestors

    def _build_adjacency(self) -> None:
        ids = sorted(self._synsets, key=lambda s: s.byte_offset)
        index = {sid: i for i, sid in enumerate(ids)}
        root_idx = len(ids)
        index[VIRTUAL_ROOT] = root_idx
        neighbors: list[list[int]] = [[] for _ in range(root_idx + 1)]
        for sid, synset in self._synsets.items():
            i = index[sid]
            parents = synset.hypernyms or (VIRTUAL_ROOT,)
            for pid in parents:
                j = index[pid]
                neighbors[i].append(j)
                neighbors[j].append(i)
        self._idx = index
        self._neighbors = neighbors

    # -- lookups -----------------------------------------------------------

    def __len__(self) -> int:
        return len(self._synsets)

    def __contains__(self, sid: SynsetId) -> bool:
        return sid in self._synsets or sid == VIRTUAL_ROOT

    @property
    def synsets(self) -> dict[SynsetId, Synset]:
        return dict(self._synsets)

    @property
    def lemmas(self) -> list[str]:
        return sorted(self._lemma_index)

    def synset(self, sid: SynsetId) -> Synset:
        try:
            return self._synsets[sid]
        except KeyError:
            raise UnknownSynsetError(f"no synset {sid} in taxonomy") from None

    def synsets_of(self, lemma: str) -> list[SynsetId]:
        """Sense list for an already-normalized lemma, in database order."""
        return list(self._lemma_index.get(lemma, ()))

    def normalize_lemma(self, token: str) -> str | None:
        """Lowercase and suffix-strip a token until it hits the index."""
        for candidate in suffix_candidates(token):
            if candidate in self._lemma_index:
                return candidate
        return None

    def depth_of(self, sid: SynsetId) -> int:
        """Edges from the virtual root along the shortest hypernym chain."""
        try:
            return self._depth[sid]
        except KeyError:
            raise UnknownSynsetError(f"no synset {sid} in taxonomy") from None

    # -- graph queries -----------------------------------------------------

    def _require(self, sid: SynsetId) -> None:
        if sid not in self._idx:
            raise UnknownSynsetError(f"no synset {sid} in taxonomy")

    def shortest_path_len(self, a: SynsetId, b: SynsetId) -> int:
        """Minimum hypernym/hyponym edge count between two synsets.

        Routes through the virtual root when the synsets share no other
        subsumer, so every pair is connected.
        """
        self._require(a)
        self._require(b)
        return self._bfs({self._idx[a]}, {self._idx[b]})

    def min_path_len_over(self, avs: list[SynsetId], bvs: list[SynsetId]) -> int:
        """Smallest shortest_path_len over the cross product of two sense lists."""
        if not avs or not bvs:
            raise UnknownSynsetError("empty synset list")
        for sid in (*avs, *bvs):
            self._require(sid)
        return self._bfs({self._idx[s] for s in avs}, {self._idx[s] for s in bvs})

    def _bfs(self, sources: set[int], targets: set[int]) -> int:
        if sources & targets:
            return 0
        seen = bytearray(len(self._neighbors))
        frontier = list(sources)
        for i in frontier:
            seen[i] = 1
        neighbors = self._neighbors
        dist = 0
        while frontier:
            dist += 1
            nxt = []
            for u in frontier:
                for v in neighbors[u]:
                    if not seen[v]:
                        if v in targets:
                            return dist
                        seen[v] = 1
                        nxt.append(v)
            frontier = nxt
        raise IntegrityError("taxonomy is disconnected")  # unreachable by construction

    def lcs_and_depths(self, a: SynsetId, b: SynsetId) -> tuple[SynsetId, int, int, int]:
        """Deepest common subsumer and the depths of it and both arguments.

        Falls back to the virtual root when the synsets live in disjoint
        trees; equal-depth ties resolve to the smaller offset.
        """
        anc_a = self._ancestors_of(a)
        anc_b = self._ancestors_of(b)
        if len(anc_b) < len(anc_a):
            anc_a, anc_b = anc_b, anc_a
        best: SynsetId | None = None
        best_depth = -1
        for aid in anc_a:
            if aid in anc_b:
                d = self._depth[aid]
                if d > best_depth or (d == best_depth and
                                      best is not None and
                                      aid.byte_offset < best.byte_offset):
                    best, best_depth = aid, d
        assert best is not None  # virtual root is common to all
        return best, best_depth, self.depth_of(a), self.depth_of(b)

    def _ancestors_of(self, sid: SynsetId) -> dict[SynsetId, int]:
        if sid == VIRTUAL_ROOT:
            return {VIRTUAL_ROOT: 0}
        try:
            return self._ancestors[sid]
        except KeyError:
            raise UnknownSynsetError(f"no synset {sid} in taxonomy") from None

    # -- serialization -----------------------------------------------------

    def canonical_dump(self) -> str:
        """Stable text form used to compare taxonomies for equality."""
        lines = []
        for sid in sorted(self._synsets, key=lambda s: s.byte_offset):
            s = self._synsets[sid]
            hyps = ",".join(str(h.byte_offset) for h in
                            sorted(s.hypernyms, key=lambda h: h.byte_offset))
            lines.append(f"{sid.byte_offset:08d}|{','.join(s.lemmas)}|{hyps}|{s.gloss}")
        lines.append("--index--")
        for lemma in sorted(self._lemma_index):
            senses = ",".join(f"{s.byte_offset:08d}" for s in self._lemma_index[lemma])
            lines.append(f"{lemma}|{senses}")
        return "\n".join(lines) + "\n"


def parse_wordnet(index_text: str, data_text: str) -> VerbTaxonomy:
    """Build a taxonomy from ``index.verb``/``data.verb`` file contents."""
    if not data_text.strip():
        raise WordNetParseError("empty data file", source="data.verb")
    if not index_text.strip():
        raise WordNetParseError("empty index file", source="index.verb")

    synsets: dict[SynsetId, Synset] = {}
    for lineno, line in enumerate(data_text.splitlines(), start=1):
        if not _is_content_line(line):
            continue
        synset = _parse_data_line(line, lineno)
        if synset.id in synsets:
            raise WordNetParseError(
                f"duplicate synset offset {synset.id}", source="data.verb", line=lineno)
        synsets[synset.id] = synset
    if not synsets:
        raise IntegrityError("no synsets in data file")

    lemma_index: dict[str, tuple[SynsetId, ...]] = {}
    for lineno, line in enumerate(index_text.splitlines(), start=1):
        if not _is_content_line(line):
            continue
        lemma, senses = _parse_index_line(line, lineno)
        if lemma in lemma_index:
            raise WordNetParseError(
                f"duplicate index entry for {lemma!r}", source="index.verb", line=lineno)
        lemma_index[lemma] = tuple(senses)
    if not lemma_index:
        raise IntegrityError("no synsets indexed")

    return VerbTaxonomy(synsets, lemma_index)


def load_wordnet(directory: str | Path) -> VerbTaxonomy:
    """Parse ``index.verb`` and ``data.verb`` from a WordNet ``dict`` directory."""
    root = Path(directory)
    index_path = root / "index.verb"
    data_path = root / "data.verb"
    for path in (index_path, data_path):
        if not path.is_file():
            raise FileNotFoundError(f"missing WordNet file: {path}")
    return parse_wordnet(index_path.read_text(encoding="utf-8"),
                         data_path.read_text(encoding="utf-8"))


def write_wordnet(tax: VerbTaxonomy) -> tuple[str, str]:
    """Serialize a taxonomy back to (index.verb, data.verb) text.

    Round-trips through parse_wordnet; used for fixture authoring and
    idempotence checks.
    """
    header = ("  1 This file is generated fixture data in WordNet database format.\n"
              "  2 Lines beginning with two spaces are ignored by parsers.\n")
    data_lines = []
    for sid in sorted(tax.synsets, key=lambda s: s.byte_offset):
        s = tax.synset(sid)
        words = " ".join(f"{w} 0" for w in s.lemmas)
        ptrs = " ".join(f"@ {h.byte_offset:08d} v 0000" for h in s.hypernyms)
        ptr_part = f"{len(s.hypernyms):03d}" + (f" {ptrs}" if ptrs else "")
        data_lines.append(
            f"{sid.byte_offset:08d} 00 v {len(s.lemmas):02x} {words} "
            f"{ptr_part} 01 + 01 00 | {s.gloss}")
    index_lines = []
    for lemma in sorted({l for l in tax.lemmas}):
        senses = tax.synsets_of(lemma)
        offsets = " ".join(f"{s.byte_offset:08d}" for s in senses)
        index_lines.append(f"{lemma} v {len(senses)} 0 {len(senses)} 0 {offsets}")
    return (header + "\n".join(index_lines) + "\n",
            header + "\n".join(data_lines) + "\n")
