"""Canonical text model: tokenization, sentence segmentation, corpus loading and stats.

The tokenizer and segmenter are deliberately simple, rule-based and
deterministic so that every downstream budget (selection thresholds, mask
counts, token statistics) is reproducible. Tokens are compared by exact
code points; no Unicode normalization is applied.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from xner.errors import DataError

# Punctuation peeled off token edges; clitics split as their own tokens.
SPLIT_PUNCT = frozenset(".,;:!?'\"()[]{}")
_CLITICS = ("'s", "n't")

# Terminal '.' after one of these never ends a sentence.
ABBREVIATIONS = frozenset({
    "mr.", "mrs.", "ms.", "dr.", "prof.", "st.", "jr.", "sr.", "gen.",
    "rep.", "sen.", "gov.", "capt.", "col.", "lt.", "sgt.",
    "vs.", "etc.", "e.g.", "i.e.", "cf.", "al.", "ca.", "approx.",
    "no.", "nos.", "fig.", "figs.", "vol.", "ch.", "pp.", "ed.", "eds.",
    "inc.", "ltd.", "co.", "corp.", "dept.", "univ.", "u.s.", "u.k.",
    "jan.", "feb.", "mar.", "apr.", "jun.", "jul.", "aug.", "sep.",
    "sept.", "oct.", "nov.", "dec.",
})

_TERMINALS = frozenset(".!?")


class Token:
    """A single non-whitespace token, optionally carrying a hyperlink mark."""

    __slots__ = ("text", "has_hyperlink")

    def __init__(self, text: str, has_hyperlink: bool = False):
        if not text:
            raise ValueError("token text must be non-empty")
        if any(c.isspace() for c in text):
            raise ValueError(f"token text contains whitespace: {text!r}")
        object.__setattr__(self, "text", text)
        object.__setattr__(self, "has_hyperlink", has_hyperlink)

    def __setattr__(self, name, value):
        raise AttributeError("Token is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, Token)
            and self.text == other.text
            and self.has_hyperlink == other.has_hyperlink
        )

    def __hash__(self):
        return hash((self.text, self.has_hyperlink))

    def __repr__(self):
        link = ", hyperlink" if self.has_hyperlink else ""
        return f"Token({self.text!r}{link})"


@dataclass(frozen=True)
class Sentence:
    """A tokenized sentence, addressable as (doc_id, index) within a corpus."""

    doc_id: str
    index: int
    tokens: tuple[Token, ...]

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("sentence index must be non-negative")
        if not self.tokens:
            raise ValueError("sentence must contain at least one token")

    def __len__(self):
        return len(self.tokens)

    def texts(self) -> list[str]:
        return [t.text for t in self.tokens]

    def text(self) -> str:
        return " ".join(t.text for t in self.tokens)


@dataclass(frozen=True)
class Document:
    """A raw document: ordered paragraphs plus a domain tag."""

    id: str
    domain: str
    paragraphs: tuple[str, ...]


@dataclass(frozen=True)
class CorpusStats:
    paragraph_count: int = 0
    sentence_count: int = 0
    token_count: int = 0

    def __add__(self, other: "CorpusStats") -> "CorpusStats":
        return CorpusStats(
            self.paragraph_count + other.paragraph_count,
            self.sentence_count + other.sentence_count,
            self.token_count + other.token_count,
        )

    def as_dict(self) -> dict:
        return {
            "paragraphs": self.paragraph_count,
            "sentences": self.sentence_count,
            "tokens": self.token_count,
        }


def split_text(text: str) -> list[str]:
    """Split raw text into token strings.

    Whitespace split, then leading/trailing punctuation peeled into
    separate tokens and English clitics ('s, n't) split off.
    """
    out: list[str] = []
    for chunk in text.split():
        _split_chunk(chunk, out)
    return out


def _split_chunk(chunk: str, out: list[str]) -> None:
    lead_end = 0
    while lead_end < len(chunk) and chunk[lead_end] in SPLIT_PUNCT:
        lead_end += 1
    trail_start = len(chunk)
    while trail_start > lead_end and chunk[trail_start - 1] in SPLIT_PUNCT:
        trail_start -= 1
    out.extend(chunk[:lead_end])
    core = chunk[lead_end:trail_start]
    if core:
        low = core.lower()
        for clitic in _CLITICS:
            if low.endswith(clitic) and len(core) > len(clitic):
                cut = len(core) - len(clitic)
                out.append(core[:cut])
                out.append(core[cut:])
                break
        else:
            out.append(core)
    out.extend(chunk[trail_start:])


def tokenize(text: str) -> list[Token]:
    """Tokenize raw text. Empty input yields an empty list."""
    return [Token(t) for t in split_text(text)]


def split_sentences(paragraph: str) -> list[str]:
    """Split a paragraph into sentence strings.

    A run of . ! ? ends a sentence when followed by whitespace plus an
    uppercase letter, or by the end of the paragraph; a '.' directly after
    a known abbreviation never splits.
    """
    sentences: list[str] = []
    start = 0
    i = 0
    n = len(paragraph)
    while i < n:
        if paragraph[i] in _TERMINALS:
            j = i + 1
            while j < n and paragraph[j] in _TERMINALS:
                j += 1
            if _is_boundary(paragraph, i, j):
                piece = paragraph[start:j].strip()
                if piece:
                    sentences.append(piece)
                start = j
            i = j
        else:
            i += 1
    tail = paragraph[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def _is_boundary(paragraph: str, term_start: int, term_end: int) -> bool:
    if paragraph[term_start] == ".":
        w = term_start
        while w > 0 and not paragraph[w - 1].isspace():
            w -= 1
        if paragraph[w:term_start + 1].lower() in ABBREVIATIONS:
            return False
    if term_end >= len(paragraph):
        return True
    if not paragraph[term_end].isspace():
        return False
    k = term_end
    while k < len(paragraph) and paragraph[k].isspace():
        k += 1
    return k < len(paragraph) and paragraph[k].isupper()


def segment(document: Document) -> list[Sentence]:
    """Segment a document into tokenized sentences with dense indices."""
    sentences: list[Sentence] = []
    index = 0
    for paragraph in document.paragraphs:
        for piece in split_sentences(paragraph):
            tokens = tokenize(piece)
            if tokens:
                sentences.append(Sentence(document.id, index, tuple(tokens)))
                index += 1
    return sentences


def iter_sentences(documents: Iterable[Document]) -> Iterator[Sentence]:
    for doc in documents:
        yield from segment(doc)


def corpus_stats(documents: Iterable[Document]) -> CorpusStats:
    """Exact paragraph/sentence/token counts over a document stream.

    Streams with bounded memory; counts are additive across shards.
    """
    paragraphs = sentences = tokens = 0
    for offset, doc in enumerate(documents):
        if not isinstance(doc, Document):
            raise DataError(f"record {offset}: not a Document: {type(doc).__name__}")
        paragraphs += len(doc.paragraphs)
        for paragraph in doc.paragraphs:
            for piece in split_sentences(paragraph):
                n = len(split_text(piece))
                if n:
                    sentences += 1
                    tokens += n
    return CorpusStats(paragraphs, sentences, tokens)


def load_corpus(path, format: str = "plain", domain: str = "") -> Iterator[Document]:
    """Lazily load documents from a file.

    plain: one paragraph per line, blank line starts a new document.
    jsonl: one JSON record per line with keys id, domain, text
    (paragraphs separated by newlines inside text).
    """
    path = Path(path)
    if format == "plain":
        return _load_plain(path, domain)
    if format == "jsonl":
        return _load_jsonl(path)
    raise ValueError(f"unknown corpus format: {format!r}")


def _load_plain(path: Path, domain: str) -> Iterator[Document]:
    paragraphs: list[str] = []
    count = 0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.strip():
                paragraphs.append(line)
            elif paragraphs:
                yield Document(f"{path.stem}-{count:06d}", domain, tuple(paragraphs))
                count += 1
                paragraphs = []
    if paragraphs:
        yield Document(f"{path.stem}-{count:06d}", domain, tuple(paragraphs))


def _load_jsonl(path: Path) -> Iterator[Document]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            if not isinstance(record, dict) or "id" not in record or "text" not in record:
                raise DataError(f"{path}:{lineno}: record must have 'id' and 'text'")
            paragraphs = tuple(p for p in str(record["text"]).split("\n") if p.strip())
            yield Document(str(record["id"]), str(record.get("domain", "")), paragraphs)


def write_sentence_corpus(sentences: Iterable[Sentence], fh) -> int:
    """Write sentences as plain text, one per line, blank line between documents.

    Returns the number of sentences written.
    """
    last_doc = None
    written = 0
    for sentence in sentences:
        if last_doc is not None and sentence.doc_id != last_doc:
            fh.write("\n")
        fh.write(sentence.text())
        fh.write("\n")
        last_doc = sentence.doc_id
        written += 1
    return written
