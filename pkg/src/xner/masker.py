"""Masked-language-model example generation with token- or span-level masking.

Token-level masking is the classic scheme: 15% of positions are chosen,
then each becomes [MASK] with probability 0.8, a random vocabulary token
with 0.1, or stays unchanged with 0.1. Span-level masking keeps the same
budget but first migrates isolated masked indices next to other masked
positions so the masks form longer contiguous spans; already-contiguous
masked runs are never touched.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from xner.corpus import Sentence, Token
from xner.seeding import stable_hash

_STRATEGIES = ("token", "span")
_KINDS = ("mask", "random", "keep")


@dataclass(frozen=True)
class MaskingConfig:
    mask_rate: float = 0.15
    mask_token_prob: float = 0.80
    random_token_prob: float = 0.10
    keep_prob: float = 0.10
    strategy: str = "token"
    seed: int = 0
    min_sentence_len: int = 5
    mask_symbol: str = "[MASK]"

    def __post_init__(self):
        if not 0 < self.mask_rate < 1:
            raise ValueError(f"mask_rate must be in (0, 1), got {self.mask_rate}")
        total = self.mask_token_prob + self.random_token_prob + self.keep_prob
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"replacement probabilities must sum to 1, got {total}")
        if self.strategy not in _STRATEGIES:
            raise ValueError(f"strategy must be one of {_STRATEGIES}")
        if self.min_sentence_len < 1:
            raise ValueError("min_sentence_len must be positive")


@dataclass(frozen=True)
class MaskTarget:
    position: int
    original: str
    kind: str  # mask | random | keep


@dataclass(frozen=True)
class MaskedExample:
    doc_id: str
    sentence_index: int
    original_tokens: tuple[Token, ...]
    output_tokens: tuple[str, ...]
    targets: tuple[MaskTarget, ...]

    def __post_init__(self):
        if len(self.output_tokens) != len(self.original_tokens):
            raise ValueError("output and original token counts differ")
        positions = [t.position for t in self.targets]
        if positions != sorted(set(positions)):
            raise ValueError("target positions must be strictly increasing")

    def to_record(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "sentence_index": self.sentence_index,
            "tokens": list(self.output_tokens),
            "targets": [
                {"pos": t.position, "orig": t.original, "kind": t.kind}
                for t in self.targets
            ],
        }


def mask_budget(length: int, mask_rate: float) -> int:
    """Number of positions to mask: round-half-up of rate*length, at least 1."""
    return max(1, math.floor(mask_rate * length + 0.5))


def select_mask_indices(
    length: int, cfg: MaskingConfig, rng: random.Random
) -> set[int]:
    """Uniformly random index subset of size mask_budget(length, rate)."""
    if length < 2:
        raise ValueError(f"sentence length must be >= 2, got {length}")
    return set(rng.sample(range(length), mask_budget(length, cfg.mask_rate)))


def _runs(indices: set[int]) -> list[tuple[int, int]]:
    """Maximal runs of consecutive indices as inclusive (lo, hi) pairs."""
    runs = []
    for i in sorted(indices):
        if runs and i == runs[-1][1] + 1:
            runs[-1] = (runs[-1][0], i)
        else:
            runs.append((i, i))
    return runs


def spanify(masked: Iterable[int], length: int) -> set[int]:
    """Migrate isolated masked indices next to other masked positions.

    Runs of length >= 2 are never touched. Initially-isolated indices are
    visited left to right; each one still isolated is moved to the free
    position adjacent to its nearest partner's current run, on the side
    facing it (distance ties go to the right partner). If that position
    is unavailable the opposite side of the run is used; if both are
    blocked the index stays put. The mask count is always preserved.
    """
    current = set(masked)
    for i in current:
        if not 0 <= i < length:
            raise ValueError(f"mask index {i} out of range for length {length}")
    isolated = [
        i for i in sorted(current) if i - 1 not in current and i + 1 not in current
    ]
    for i in isolated:
        if i - 1 in current or i + 1 in current:
            continue  # a previous move attached a neighbor
        others = current - {i}
        if not others:
            break
        partner = min(others, key=lambda k: (abs(k - i), k < i))
        lo, hi = partner, partner
        while lo - 1 in others:
            lo -= 1
        while hi + 1 in others:
            hi += 1
        facing = lo - 1 if i < lo else hi + 1
        opposite = hi + 1 if i < lo else lo - 1
        current.discard(i)
        for target in (facing, opposite):
            if 0 <= target < length and target not in current:
                current.add(target)
                break
        else:
            current.add(i)
    return current


def apply_replacements(
    tokens: Sequence[Token],
    indices: Iterable[int],
    cfg: MaskingConfig,
    rng: random.Random,
    vocabulary: Sequence[str],
    doc_id: str = "",
    sentence_index: int = 0,
) -> MaskedExample:
    """Materialize a masked example from a chosen index set.

    Each selected position independently becomes the mask symbol, a
    uniform vocabulary token, or its original text, per the configured
    probabilities.
    """
    if cfg.random_token_prob > 0 and not vocabulary:
        raise ValueError("non-empty vocabulary required when random_token_prob > 0")
    output = [t.text for t in tokens]
    targets = []
    for position in sorted(set(indices)):
        if not 0 <= position < len(tokens):
            raise ValueError(f"target position {position} out of range")
        original = tokens[position].text
        roll = rng.random()
        if roll < cfg.mask_token_prob:
            kind = "mask"
            output[position] = cfg.mask_symbol
        elif roll < cfg.mask_token_prob + cfg.random_token_prob:
            kind = "random"
            output[position] = vocabulary[rng.randrange(len(vocabulary))]
        else:
            kind = "keep"
        targets.append(MaskTarget(position, original, kind))
    return MaskedExample(
        doc_id, sentence_index, tuple(tokens), tuple(output), tuple(targets)
    )


def sentence_rng(cfg: MaskingConfig, doc_id: str, sentence_index: int) -> random.Random:
    """Per-sentence RNG; masking output never depends on scheduling order."""
    return random.Random(stable_hash(cfg.seed, doc_id, sentence_index))


def mask_sentence(
    sentence: Sentence, cfg: MaskingConfig, vocabulary: Sequence[str]
) -> MaskedExample:
    rng = sentence_rng(cfg, sentence.doc_id, sentence.index)
    indices = select_mask_indices(len(sentence), cfg, rng)
    if cfg.strategy == "span":
        indices = spanify(indices, len(sentence))
    return apply_replacements(
        sentence.tokens, indices, cfg, rng, vocabulary,
        doc_id=sentence.doc_id, sentence_index=sentence.index,
    )


def mask_corpus(
    corpus: Iterable[Sentence], cfg: MaskingConfig, vocabulary: Sequence[str]
) -> Iterator[MaskedExample]:
    """Masked examples for every sentence of at least min_sentence_len tokens."""
    threshold = max(2, cfg.min_sentence_len)
    for sentence in corpus:
        if len(sentence) < threshold:
            continue
        yield mask_sentence(sentence, cfg, vocabulary)


def build_vocabulary(token_texts: Iterable[str], size: int = 50_000) -> list[str]:
    """Most frequent token texts, ties broken lexicographically.

    Used as the draw pool for random replacements; computed once per run
    from the corpus being masked.
    """
    counts = Counter(token_texts)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [token for token, _ in ranked[:size]]
