"""Labeled NER dataset handling: CoNLL parsing, BIO validation, stats, sampling.

Entity-type strings are taken verbatim from the tags; no normalization is
applied, the on-disk label inventory is authoritative.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from xner.corpus import Token
from xner.errors import DataError
from xner.gazetteer import EntityMention


@dataclass(frozen=True)
class LabeledSentence:
    tokens: tuple[Token, ...]
    tags: tuple[str, ...]

    def __post_init__(self):
        if len(self.tokens) != len(self.tags):
            raise ValueError(
                f"{len(self.tokens)} tokens but {len(self.tags)} tags"
            )
        bad = validate_bio(self.tags)
        if bad:
            raise ValueError(f"invalid BIO tags at positions {bad}: {self.tags}")

    def __len__(self):
        return len(self.tokens)

    def texts(self) -> list[str]:
        return [t.text for t in self.tokens]


@dataclass(frozen=True)
class SplitStats:
    sentence_count: int
    per_type: dict  # type -> (mention count, percentage of all mentions)

    def as_dict(self) -> dict:
        return {
            "sentences": self.sentence_count,
            "entities": {
                t: {"count": c, "percent": round(p, 2)}
                for t, (c, p) in sorted(self.per_type.items())
            },
        }


@dataclass(frozen=True)
class JointConfig:
    multiplier: int = 100

    def __post_init__(self):
        if self.multiplier < 1:
            raise ValueError("multiplier must be >= 1")


def validate_bio(tags: Sequence[str]) -> list[int]:
    """Positions violating the BIO contract; empty list means valid.

    A tag is valid when it is "O", "B-<type>", or an "I-<type>"
    immediately preceded by "B-<type>" or "I-<type>" of the same type.
    """
    violations = []
    previous = "O"
    for i, tag in enumerate(tags):
        if tag == "O":
            previous = tag
            continue
        if len(tag) < 3 or tag[0] not in "BI" or tag[1] != "-":
            violations.append(i)
            previous = "O"
            continue
        if tag[0] == "I":
            if previous in (f"B-{tag[2:]}", f"I-{tag[2:]}"):
                previous = tag
            else:
                violations.append(i)
                previous = "O"
        else:
            previous = tag
    return violations


def parse_conll(path) -> list[LabeledSentence]:
    """Parse a CoNLL file: one "token tag" (space or tab) line per token,
    blank line between sentences, -DOCSTART- lines skipped."""
    sentences: list[LabeledSentence] = []
    tokens: list[Token] = []
    tags: list[str] = []
    start_line = 1

    def flush(lineno):
        if tokens:
            bad = validate_bio(tags)
            if bad:
                raise DataError(
                    f"{path}:{start_line + bad[0]}: invalid BIO tag "
                    f"{tags[bad[0]]!r} at sentence position {bad[0]}"
                )
            sentences.append(LabeledSentence(tuple(tokens), tuple(tags)))
        tokens.clear()
        tags.clear()

    with open(path, encoding="utf-8") as fh:
        lineno = 0
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip():
                flush(lineno)
                start_line = lineno + 1
                continue
            if line.startswith("-DOCSTART-"):
                start_line = lineno + 1
                continue
            parts = line.split()
            if len(parts) != 2:
                raise DataError(f"{path}:{lineno}: expected 'token tag', got {line!r}")
            if not tokens:
                start_line = lineno
            tokens.append(Token(parts[0]))
            tags.append(parts[1])
        flush(lineno + 1)
    return sentences


def serialize_conll(sentences: Iterable[LabeledSentence], fh) -> None:
    """Write space-separated CoNLL, one blank line between sentences."""
    for sentence in sentences:
        for token, tag in zip(sentence.tokens, sentence.tags):
            fh.write(f"{token.text} {tag}\n")
        fh.write("\n")


def extract_entities(
    sentence: LabeledSentence, doc_id: str = "", sentence_index: int = 0
) -> list[EntityMention]:
    """Maximal B-/I- runs as gold mentions with [start, end) token spans."""
    mentions = []
    start = None
    current = None
    for i, tag in enumerate(sentence.tags):
        if tag.startswith("B-"):
            if start is not None:
                mentions.append(
                    EntityMention(doc_id, sentence_index, start, i, current, "gold")
                )
            start, current = i, tag[2:]
        elif tag.startswith("I-"):
            continue
        else:
            if start is not None:
                mentions.append(
                    EntityMention(doc_id, sentence_index, start, i, current, "gold")
                )
            start = current = None
    if start is not None:
        mentions.append(
            EntityMention(
                doc_id, sentence_index, start, len(sentence.tags), current, "gold"
            )
        )
    return mentions


def entities_to_tags(mentions: Iterable[EntityMention], length: int) -> list[str]:
    """Inverse of extract_entities for non-overlapping mentions."""
    tags = ["O"] * length
    for m in mentions:
        tags[m.start] = f"B-{m.entity_type}"
        for i in range(m.start + 1, m.end):
            tags[i] = f"I-{m.entity_type}"
    return tags


def dataset_stats(split: Sequence[LabeledSentence]) -> SplitStats:
    """Sentence count plus per-type mention counts and percentages."""
    counts: dict[str, int] = {}
    for sentence in split:
        for mention in extract_entities(sentence):
            counts[mention.entity_type] = counts.get(mention.entity_type, 0) + 1
    total = sum(counts.values())
    per_type = {
        t: (c, 100.0 * c / total if total else 0.0) for t, c in counts.items()
    }
    return SplitStats(len(split), per_type)


def subsample(
    train: Sequence[LabeledSentence], n: int, seed: int
) -> list[LabeledSentence]:
    """Uniform sample of n sentences without replacement, order preserved."""
    if not 0 <= n <= len(train):
        raise ValueError(f"sample size {n} out of range for {len(train)} sentences")
    rng = random.Random(seed)
    keep = sorted(rng.sample(range(len(train)), n))
    return [train[i] for i in keep]


def build_joint(
    source: Sequence[LabeledSentence],
    target: Sequence[LabeledSentence],
    cfg: JointConfig = JointConfig(),
) -> list[LabeledSentence]:
    """Source data plus the target data repeated cfg.multiplier times.

    Upsampling balances a small target-domain training set against a much
    larger source-domain one for joint training.
    """
    return list(source) + list(target) * cfg.multiplier
