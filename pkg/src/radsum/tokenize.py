"""Deterministic word tokenizer and rule-based sentencizer.

Tokenization: whitespace split, then leading/trailing punctuation characters
are peeled off into standalone tokens. Interior hyphens, slashes-free cores,
and digits stay inside the token ("x-ray", "2-view"). The rules are a fixed
point: re-tokenizing the space-joined token list reproduces it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources

_PEEL_PUNCT = set(".,;:!?()[]{}\"'/")

_TERMINATOR_RE = re.compile(r"[.!?]+(?=\s|$)")


@dataclass(frozen=True)
class TokenSequence:
    """Ordered word tokens plus the casing they were produced with."""

    tokens: tuple[str, ...]
    casing: str = "original"

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def lowercased(self) -> "TokenSequence":
        return TokenSequence(tuple(t.lower() for t in self.tokens), casing="lowercased")


def _split_chunk(chunk: str) -> list[str]:
    head: list[str] = []
    tail: list[str] = []
    while chunk and chunk[0] in _PEEL_PUNCT:
        head.append(chunk[0])
        chunk = chunk[1:]
    while chunk and chunk[-1] in _PEEL_PUNCT:
        tail.append(chunk[-1])
        chunk = chunk[:-1]
    tail.reverse()
    return head + ([chunk] if chunk else []) + tail


def word_tokenize(text: str) -> TokenSequence:
    """Split text into word tokens; punctuation becomes standalone tokens."""
    tokens: list[str] = []
    for chunk in text.split():
        tokens.extend(_split_chunk(chunk))
    return TokenSequence(tuple(tokens))


def word_token_count(text: str) -> int:
    return len(word_tokenize(text))


def load_abbreviations() -> frozenset[str]:
    """Abbreviations (with trailing period, lowercase) that never end a sentence."""
    raw = resources.files("radsum.data").joinpath("abbreviations.txt").read_text()
    abbrevs = set()
    for line in raw.splitlines():
        line = line.split("#", 1)[0].strip().lower()
        if line:
            abbrevs.add(line)
    return frozenset(abbrevs)


_ABBREVIATIONS: frozenset[str] | None = None


def _abbreviations() -> frozenset[str]:
    global _ABBREVIATIONS
    if _ABBREVIATIONS is None:
        _ABBREVIATIONS = load_abbreviations()
    return _ABBREVIATIONS


def sentence_split(text: str, abbreviations: frozenset[str] | None = None) -> list[str]:
    """Split text into sentences at ./!/? runs followed by whitespace or EOF.

    A period does not end a sentence when the word it terminates is in the
    abbreviation list (e.g. "dr."). Sentences are stripped; empty sentences
    are dropped, so joining the result with single spaces reconstructs the
    input up to inter-sentence whitespace.
    """
    if abbreviations is None:
        abbreviations = _abbreviations()
    sentences: list[str] = []
    start = 0
    for match in _TERMINATOR_RE.finditer(text):
        end = match.end()
        if match.group().endswith("."):
            # Word ending at this terminator, including the final period.
            prefix = text[start:end]
            last_word = prefix.split()[-1].lower() if prefix.split() else ""
            if last_word in abbreviations:
                continue
        candidate = text[start:end].strip()
        if candidate:
            sentences.append(candidate)
        start = end
    trailing = text[start:].strip()
    if trailing:
        sentences.append(trailing)
    return sentences
