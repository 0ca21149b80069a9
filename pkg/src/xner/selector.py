"""Pre-training corpus construction: entity-level, task-level, integrated, sampled.

All selectors are order-preserving streaming filters over sentences.
Mentions come either from gazetteer matching or from an externally
supplied mention file (e.g. produced by a separately trained NER model),
through the same code path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from xner.corpus import Sentence
from xner.errors import DataError
from xner.gazetteer import EntityMention, Gazetteer, TypeHierarchy, find_mentions
from xner.seeding import unit_interval

# Mention lookup for external annotations: (doc_id, sentence_index) -> mentions.
MentionIndex = Mapping[tuple[str, int], list[EntityMention]]


@dataclass(frozen=True)
class SelectorConfig:
    min_mentions: int = 2
    min_specialized: int = 1
    task_upsample: int = 2

    def __post_init__(self):
        for name in ("min_mentions", "min_specialized", "task_upsample"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


def _sentence_mentions(
    sentence: Sentence,
    gazetteer: Gazetteer | None,
    hierarchy: TypeHierarchy,
    mentions: MentionIndex | None,
) -> list[EntityMention]:
    if mentions is not None:
        return mentions.get((sentence.doc_id, sentence.index), [])
    if gazetteer is None:
        raise ValueError("either a gazetteer or an external mention index is required")
    return find_mentions(sentence, gazetteer, hierarchy)


def select_entity_level(
    corpus: Iterable[Sentence],
    gazetteer: Gazetteer | None,
    hierarchy: TypeHierarchy,
    cfg: SelectorConfig = SelectorConfig(),
    mentions: MentionIndex | None = None,
) -> Iterator[Sentence]:
    """Sentences containing at least cfg.min_mentions entity mentions."""
    for sentence in corpus:
        found = _sentence_mentions(sentence, gazetteer, hierarchy, mentions)
        if len(found) >= cfg.min_mentions:
            yield sentence


def select_task_level(
    corpus: Iterable[Sentence],
    gazetteer: Gazetteer | None,
    hierarchy: TypeHierarchy,
    cfg: SelectorConfig = SelectorConfig(),
    mentions: MentionIndex | None = None,
    specialized_types: Iterable[str] | None = None,
) -> Iterator[Sentence]:
    """Sentences with at least cfg.min_specialized domain-specialized mentions."""
    if specialized_types is None:
        specialized_types = gazetteer.specialized_types if gazetteer else frozenset()
    specialized = frozenset(specialized_types)
    if not specialized:
        raise ValueError("task-level selection requires a non-empty specialized type set")
    for sentence in corpus:
        found = _sentence_mentions(sentence, gazetteer, hierarchy, mentions)
        hits = sum(1 for m in found if m.entity_type in specialized)
        if hits >= cfg.min_specialized:
            yield sentence


def build_integrated(
    entity_level: Iterable[Sentence],
    task_level: Iterable[Sentence],
    cfg: SelectorConfig = SelectorConfig(),
) -> Iterator[Sentence]:
    """Entity-level corpus followed by the task-level corpus upsampled.

    The task-level sentences are physically duplicated cfg.task_upsample
    times, so token counts satisfy
    tokens(integrated) = tokens(entity) + task_upsample * tokens(task).
    """
    yield from entity_level
    task = list(task_level)
    for _ in range(cfg.task_upsample):
        yield from task


def sample_fraction(
    corpus: Iterable[Sentence], percent: float, seed: int
) -> Iterator[Sentence]:
    """Keep each sentence independently with probability percent/100.

    The decision is a pure function of (seed, doc_id, sentence_index), so
    the sample is identical across runs, workers and shard orders.
    """
    if not 0 <= percent <= 100:
        raise ValueError(f"percent must be in [0, 100], got {percent}")
    for sentence in corpus:
        if unit_interval(seed, sentence.doc_id, sentence.index) * 100.0 < percent:
            yield sentence


def load_external_mentions(path) -> dict[tuple[str, int], list[EntityMention]]:
    """Load a JSONL mention file into a (doc_id, sentence_index) index.

    Records: {"doc_id":…, "sentence_index":…, "start":…, "end":…, "type":…}.
    """
    index: dict[tuple[str, int], list[EntityMention]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                mention = EntityMention(
                    str(rec["doc_id"]),
                    int(rec["sentence_index"]),
                    int(rec["start"]),
                    int(rec["end"]),
                    str(rec["type"]),
                    source="external",
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise DataError(f"{path}:{lineno}: bad mention record: {exc}") from exc
            index.setdefault((mention.doc_id, mention.sentence_index), []).append(mention)
    return index
