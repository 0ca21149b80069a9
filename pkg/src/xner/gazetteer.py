"""Entity dictionary, longest-match mention detection and NER pre-annotation.

Matching is case-sensitive on exact token sequences. The dictionary is a
token-level prefix trie, so a full scan costs O(sentence length x longest
entry) and stays practical on corpora of 10^8 tokens.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from xner.corpus import Sentence, split_text
from xner.errors import DataError

_SOURCES = frozenset({"gazetteer", "gold", "hyperlink", "external"})

# Trie terminal marker; safe because token texts are never empty.
_END = ""


@dataclass(frozen=True)
class EntityMention:
    """A typed token span [start, end) within one sentence."""

    doc_id: str
    sentence_index: int
    start: int
    end: int
    entity_type: str
    source: str = "gazetteer"

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValueError(f"bad span [{self.start}, {self.end})")
        if self.source not in _SOURCES:
            raise ValueError(f"unknown mention source: {self.source!r}")

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


class TypeHierarchy:
    """Child-type to parent-type forest (e.g. politician -> person)."""

    def __init__(self, parent_of: Mapping[str, str] | None = None):
        self.parent_of = dict(parent_of or {})
        for child in self.parent_of:
            seen = {child}
            node = child
            while node in self.parent_of:
                node = self.parent_of[node]
                if node in seen:
                    raise ValueError(f"type hierarchy cycle through {node!r}")
                seen.add(node)

    def ancestors(self, entity_type: str) -> list[str]:
        out = []
        node = entity_type
        while node in self.parent_of:
            node = self.parent_of[node]
            out.append(node)
        return out

    def is_ancestor(self, ancestor: str, entity_type: str) -> bool:
        return ancestor in self.ancestors(entity_type)

    @classmethod
    def load(cls, path) -> "TypeHierarchy":
        """Load a TSV of "child<TAB>parent" rows."""
        parent_of = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\n")
                if not line.strip():
                    continue
                parts = line.split("\t")
                if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
                    raise DataError(f"{path}:{lineno}: expected 'child<TAB>parent'")
                parent_of[parts[0].strip()] = parts[1].strip()
        return cls(parent_of)


class Gazetteer:
    """Surface-form dictionary mapping token sequences to entity-type sets."""

    def __init__(
        self,
        entries: Mapping[Sequence[str], Iterable[str]] | None = None,
        specialized_types: Iterable[str] = (),
    ):
        self.entries: dict[tuple[str, ...], frozenset[str]] = {}
        self._trie: dict = {}
        self.max_entry_len = 0
        for surface, types in (entries or {}).items():
            self._add(tuple(surface), frozenset(types))
        self.specialized_types = frozenset(specialized_types)

    def _add(self, surface: tuple[str, ...], types: frozenset[str]) -> None:
        if not surface or not all(surface):
            raise ValueError(f"empty gazetteer surface form: {surface!r}")
        if not types:
            raise ValueError(f"gazetteer entry without types: {surface!r}")
        self.entries[surface] = self.entries.get(surface, frozenset()) | types
        node = self._trie
        for token in surface:
            node = node.setdefault(token, {})
        node[_END] = self.entries[surface]
        self.max_entry_len = max(self.max_entry_len, len(surface))

    def __len__(self):
        return len(self.entries)

    def __contains__(self, surface) -> bool:
        return tuple(surface) in self.entries

    def longest_match(self, texts: Sequence[str], start: int):
        """Longest entry starting at position start, as (end, types), or None."""
        node = self._trie
        best = None
        i = start
        n = len(texts)
        while i < n:
            node = node.get(texts[i])
            if node is None:
                break
            i += 1
            types = node.get(_END)
            if types is not None:
                best = (i, types)
        return best


def load_gazetteer(path, specialized_path=None) -> Gazetteer:
    """Load a "surface<TAB>type" TSV, tokenizing surfaces with the corpus rules.

    Duplicate (surface, type) rows are merged; one surface may carry
    several types. An optional file of one type per line marks the
    domain-specialized types.
    """
    entries: dict[tuple[str, ...], set[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[1].strip():
                raise DataError(f"{path}:{lineno}: expected 'surface<TAB>type'")
            surface = tuple(split_text(parts[0]))
            if not surface:
                raise DataError(f"{path}:{lineno}: empty surface form")
            entries.setdefault(surface, set()).add(parts[1].strip())
    specialized: list[str] = []
    if specialized_path is not None:
        with open(specialized_path, encoding="utf-8") as fh:
            specialized = [line.strip() for line in fh if line.strip()]
    return Gazetteer(entries, specialized)


def minimal_types(candidates: Iterable[str], hierarchy: TypeHierarchy) -> set[str]:
    """Candidates that are not ancestors of any other candidate."""
    cands = set(candidates)
    return {
        c for c in cands
        if not any(hierarchy.is_ancestor(c, other) for other in cands if other != c)
    }


def resolve_type(candidates: Iterable[str], hierarchy: TypeHierarchy) -> str:
    """Most-specific candidate type under the hierarchy.

    Ancestors of other candidates are discarded (politician beats person).
    If several incomparable candidates remain the lexicographically
    smallest wins; use resolve_type_flagged to detect that case.
    """
    return resolve_type_flagged(candidates, hierarchy)[0]


def resolve_type_flagged(
    candidates: Iterable[str], hierarchy: TypeHierarchy
) -> tuple[str, bool]:
    """Like resolve_type, plus an ambiguity flag for incomparable ties."""
    cands = set(candidates)
    if not cands:
        raise ValueError("candidate type set must be non-empty")
    minimal = minimal_types(cands, hierarchy)
    return min(minimal), len(minimal) > 1


def find_mentions(
    sentence: Sentence, gazetteer: Gazetteer, hierarchy: TypeHierarchy
) -> list[EntityMention]:
    """Leftmost-longest non-overlapping gazetteer matches.

    Scans left to right, takes the longest entry at each position and
    advances past it, so an inner entity never survives inside a larger
    span ("United Socialist Party of Venezuela" suppresses "Venezuela").
    """
    texts = sentence.texts()
    mentions = []
    i = 0
    n = len(texts)
    while i < n:
        match = gazetteer.longest_match(texts, i)
        if match is None:
            i += 1
            continue
        end, types = match
        mentions.append(
            EntityMention(
                sentence.doc_id,
                sentence.index,
                i,
                end,
                resolve_type(types, hierarchy),
                source="gazetteer",
            )
        )
        i = end
    return mentions


def mentions_to_bio(mentions: Iterable[EntityMention], length: int) -> list[str]:
    """BIO tags for non-overlapping mentions over a sentence of given length."""
    tags = ["O"] * length
    for m in mentions:
        if m.end > length:
            raise ValueError(f"mention {m.span} exceeds sentence length {length}")
        tags[m.start] = f"B-{m.entity_type}"
        for i in range(m.start + 1, m.end):
            tags[i] = f"I-{m.entity_type}"
    return tags


def pre_annotate(
    sentence: Sentence, gazetteer: Gazetteer, hierarchy: TypeHierarchy
) -> tuple[list[str], set[int]]:
    """Machine pre-annotation: BIO tags plus positions needing human review.

    Review flags mark hyperlinked tokens not covered by any mention;
    hyperlinked tokens are likely entities, so an unmatched one deserves
    annotator attention.
    """
    mentions = find_mentions(sentence, gazetteer, hierarchy)
    tags = mentions_to_bio(mentions, len(sentence))
    covered = set()
    for m in mentions:
        covered.update(range(m.start, m.end))
    flags = {
        i for i, token in enumerate(sentence.tokens)
        if token.has_hyperlink and i not in covered
    }
    return tags, flags
