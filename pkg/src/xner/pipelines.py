"""Document-sharded pipeline drivers.

Work is split by document across a process pool and merged back in
document order. Because every per-sentence decision is keyed on a stable
hash rather than shared RNG state, the worker count never changes a
single output byte, only the runtime.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Iterable, Sequence

from xner.corpus import CorpusStats, Document, corpus_stats, segment
from xner.gazetteer import Gazetteer, TypeHierarchy
from xner.masker import MaskingConfig, mask_corpus
from xner.selector import (
    MentionIndex,
    SelectorConfig,
    sample_fraction,
    select_entity_level,
    select_task_level,
)

LEVELS = ("entity", "task", "integrated")


def map_documents(worker, documents: Iterable[Document], workers: int) -> list:
    """Apply worker to each document, preserving document order."""
    docs = list(documents)
    if workers <= 1 or len(docs) <= 1:
        return [worker(d) for d in docs]
    chunksize = max(1, math.ceil(len(docs) / (workers * 4)))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, docs, chunksize=chunksize))


def _mask_doc(doc: Document, cfg: MaskingConfig, vocabulary: Sequence[str]) -> list[str]:
    return [
        json.dumps(example.to_record(), ensure_ascii=False)
        for example in mask_corpus(segment(doc), cfg, vocabulary)
    ]


def mask_documents(
    documents: Iterable[Document],
    cfg: MaskingConfig,
    vocabulary: Sequence[str],
    workers: int = 1,
) -> list[str]:
    """JSONL lines of masked examples, in corpus order."""
    worker = partial(_mask_doc, cfg=cfg, vocabulary=vocabulary)
    return [line for lines in map_documents(worker, documents, workers) for line in lines]


def _select_doc(
    doc: Document,
    gazetteer: Gazetteer | None,
    hierarchy: TypeHierarchy,
    cfg: SelectorConfig,
    need_task: bool,
    mentions: MentionIndex | None,
    specialized_types,
    percent: float | None,
    seed: int,
) -> tuple[list[str], list[str]]:
    sentences = segment(doc)
    if percent is not None:
        sentences = list(sample_fraction(sentences, percent, seed))
    entity = [
        s.text()
        for s in select_entity_level(sentences, gazetteer, hierarchy, cfg, mentions)
    ]
    task = []
    if need_task:
        task = [
            s.text()
            for s in select_task_level(
                sentences, gazetteer, hierarchy, cfg, mentions, specialized_types
            )
        ]
    return entity, task


def select_documents(
    documents: Iterable[Document],
    level: str,
    gazetteer: Gazetteer | None,
    hierarchy: TypeHierarchy,
    cfg: SelectorConfig = SelectorConfig(),
    mentions: MentionIndex | None = None,
    specialized_types=None,
    percent: float | None = None,
    seed: int = 0,
    workers: int = 1,
) -> list[list[str]]:
    """Selected sentence lines grouped by document.

    level "entity" or "task" yields one group per contributing document;
    "integrated" yields the entity groups followed by the task groups
    repeated cfg.task_upsample times.
    """
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    if level in ("task", "integrated"):
        specialized = frozenset(
            specialized_types
            if specialized_types is not None
            else (gazetteer.specialized_types if gazetteer else ())
        )
        if not specialized:
            raise ValueError(
                "task-level selection requires a non-empty specialized type set"
            )
        specialized_types = specialized
    worker = partial(
        _select_doc,
        gazetteer=gazetteer,
        hierarchy=hierarchy,
        cfg=cfg,
        need_task=level in ("task", "integrated"),
        mentions=mentions,
        specialized_types=specialized_types,
        percent=percent,
        seed=seed,
    )
    results = map_documents(worker, documents, workers)
    entity_groups = [entity for entity, _ in results]
    task_groups = [task for _, task in results]
    if level == "entity":
        return entity_groups
    if level == "task":
        return task_groups
    return entity_groups + task_groups * cfg.task_upsample


def write_groups(groups: Iterable[list[str]], fh) -> int:
    """Write sentence groups as plain text with blank lines between documents.

    Empty groups are skipped. Returns the number of sentences written.
    """
    written = 0
    first = True
    for group in groups:
        if not group:
            continue
        if not first:
            fh.write("\n")
        for line in group:
            fh.write(line)
            fh.write("\n")
            written += 1
        first = False
    return written


def stats_documents(documents: Iterable[Document], workers: int = 1) -> CorpusStats:
    """Corpus stats, shardable by document with associative merge."""
    results = map_documents(_doc_stats, documents, workers)
    total = CorpusStats()
    for stats in results:
        total = total + stats
    return total


def _doc_stats(doc: Document) -> CorpusStats:
    return corpus_stats([doc])
