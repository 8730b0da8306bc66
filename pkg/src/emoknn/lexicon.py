"""Emotion lexicons: loading, word lookup, and tweet-level score vectors.

Five lexicons are supported, each mapping a lowercase word to a fixed-width
score vector; a sixth "combined" view concatenates all five (3 + 10 + 4 + 6 +
63 = 86 columns). Words absent from a lexicon score zero and still count in
the tweet-level mean.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import ParseError, ValidationError


class LexiconName(str, Enum):
    VAD = "VAD"
    EMOLEX = "EMOLEX"
    AI = "AI"
    ANEW = "ANEW"
    WARRINER = "Warriner"
    COMBINED = "Combined"


@dataclass(frozen=True)
class LexiconSchema:
    """Declared shape of one lexicon: name, column count, and score range.

    ``score_range`` is a single (min, max) pair applying to every column;
    the published lexicons use one range per file.
    """

    name: LexiconName
    width: int
    score_range: tuple[float, float]

    def __post_init__(self) -> None:
        if self.width <= 0:
            raise ValidationError("schema width must be positive")
        lo, hi = self.score_range
        if lo > hi:
            raise ValidationError("score_range min exceeds max")


SCHEMAS: dict[LexiconName, LexiconSchema] = {
    LexiconName.VAD: LexiconSchema(LexiconName.VAD, 3, (0.0, 1.0)),
    LexiconName.EMOLEX: LexiconSchema(LexiconName.EMOLEX, 10, (0.0, 1.0)),
    LexiconName.AI: LexiconSchema(LexiconName.AI, 4, (0.0, 1.0)),
    LexiconName.ANEW: LexiconSchema(LexiconName.ANEW, 6, (0.0, 10.0)),
    LexiconName.WARRINER: LexiconSchema(LexiconName.WARRINER, 63, (0.0, 1000.0)),
    LexiconName.COMBINED: LexiconSchema(LexiconName.COMBINED, 86, (0.0, 1000.0)),
}

# Concatenation order of the combined vector.
CANONICAL_ORDER: tuple[LexiconName, ...] = (
    LexiconName.VAD,
    LexiconName.EMOLEX,
    LexiconName.AI,
    LexiconName.ANEW,
    LexiconName.WARRINER,
)

COMBINED_WIDTH = sum(SCHEMAS[n].width for n in CANONICAL_ORDER)
assert COMBINED_WIDTH == SCHEMAS[LexiconName.COMBINED].width


@dataclass(frozen=True)
class FormatDescriptor:
    """Column layout of a lexicon file (wide format: one row per word).

    Long-format distributions (one row per word/score pair) must be reshaped
    to wide form before loading.
    """

    delimiter: str = "\t"
    header_lines: int = 1
    word_column: int = 0
    score_columns: tuple[int, ...] = ()

    @staticmethod
    def load(path: str | Path) -> "FormatDescriptor":
        with Path(path).open("r", encoding="utf-8") as fh:
            raw = json.load(fh)
        return FormatDescriptor(
            delimiter=raw.get("delimiter", "\t"),
            header_lines=int(raw.get("header_lines", 1)),
            word_column=int(raw.get("word_column", 0)),
            score_columns=tuple(int(c) for c in raw["score_columns"]),
        )


def default_descriptor(schema: LexiconSchema) -> FormatDescriptor:
    """Tab-separated, one header line, word first, scores in the next columns."""
    return FormatDescriptor(
        delimiter="\t",
        header_lines=1,
        word_column=0,
        score_columns=tuple(range(1, schema.width + 1)),
    )


class Lexicon:
    """Immutable word -> score-vector mapping under a declared schema."""

    def __init__(self, schema: LexiconSchema, entries: Mapping[str, np.ndarray]):
        self.schema = schema
        store: dict[str, np.ndarray] = {}
        lo, hi = schema.score_range
        for word, vec in entries.items():
            arr = np.asarray(vec, dtype=np.float64)
            if arr.shape != (schema.width,):
                raise ValidationError(
                    f"entry {word!r} has width {arr.shape}, schema wants {schema.width}"
                )
            if arr.min() < lo or arr.max() > hi:
                raise ValidationError(
                    f"entry {word!r} has scores outside [{lo}, {hi}]"
                )
            arr = arr.copy()
            arr.setflags(write=False)
            store[word.lower()] = arr
        self._entries = store
        self._zero = np.zeros(schema.width)
        self._zero.setflags(write=False)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, word: str) -> bool:
        return word.lower() in self._entries

    @property
    def words(self):
        return self._entries.keys()


def load_lexicon(
    path: str | Path,
    schema: LexiconSchema,
    descriptor: FormatDescriptor | None = None,
) -> Lexicon:
    """Load a lexicon file.

    The sidecar descriptor is looked up at ``<path>.desc.json`` when not given
    explicitly; failing that, the default layout for the schema is assumed.
    Duplicate words keep their first occurrence.
    """
    path = Path(path)
    if descriptor is None:
        sidecar = Path(str(path) + ".desc.json")
        descriptor = FormatDescriptor.load(sidecar) if sidecar.exists() else default_descriptor(schema)
    if len(descriptor.score_columns) != schema.width:
        raise ValidationError(
            f"descriptor declares {len(descriptor.score_columns)} score columns, "
            f"schema {schema.name.value} wants {schema.width}"
        )

    entries: dict[str, np.ndarray] = {}
    lo, hi = schema.score_range
    with path.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if lineno <= descriptor.header_lines:
                continue
            line = raw.rstrip("\r\n")
            if not line:
                continue
            fields = line.split(descriptor.delimiter)
            needed = max(descriptor.score_columns + (descriptor.word_column,))
            if len(fields) <= needed:
                raise ParseError(
                    f"expected at least {needed + 1} columns, found {len(fields)}",
                    str(path),
                    lineno,
                )
            word = fields[descriptor.word_column].strip().lower()
            if not word:
                raise ParseError("empty word field", str(path), lineno)
            try:
                scores = np.array(
                    [float(fields[c]) for c in descriptor.score_columns], dtype=np.float64
                )
            except ValueError:
                raise ParseError("non-numeric score", str(path), lineno) from None
            if scores.min() < lo or scores.max() > hi:
                raise ParseError(
                    f"score outside declared range [{lo}, {hi}]", str(path), lineno
                )
            if word not in entries:
                entries[word] = scores
    if not entries:
        raise ParseError("lexicon file contains no entries", str(path))
    return Lexicon(schema, entries)


def word_scores(lex: Lexicon, word: str) -> np.ndarray:
    """Stored vector for the lowercased word, or the all-zero vector if absent."""
    return lex._entries.get(word.lower(), lex._zero)


def tweet_lexicon_vector(lex: Lexicon, tokens: Sequence[str]) -> np.ndarray:
    """Mean of the tokens' score vectors.

    Absent words contribute zeros and still count in the denominator. An
    empty token list yields the zero vector.
    """
    if not tokens:
        return np.zeros(lex.schema.width)
    acc = np.zeros(lex.schema.width)
    for tok in tokens:
        acc += word_scores(lex, tok)
    return acc / len(tokens)


def combined_vector(lexicons: Sequence[Lexicon], tokens: Sequence[str]) -> np.ndarray:
    """Concatenate the five per-lexicon tweet vectors in canonical order."""
    names = tuple(lex.schema.name for lex in lexicons)
    if names != CANONICAL_ORDER:
        raise ValidationError(
            f"combined vector needs the five lexicons in order "
            f"{[n.value for n in CANONICAL_ORDER]}, got {[n.value for n in names]}"
        )
    return np.concatenate([tweet_lexicon_vector(lex, tokens) for lex in lexicons])
