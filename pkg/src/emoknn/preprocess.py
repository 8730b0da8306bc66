"""Tweet cleaning pipeline and tokenization.

General preprocessing applies nine steps in a fixed order: emoji replacement,
emoticon replacement, @-tag deletion, ``&`` expansion, ``#`` deletion, newline
replacement, punctuation/digit deletion, optional lowercasing, and whitespace
collapsing. Emoji and emoticon replacement must run before punctuation
deletion or strings like ``:)`` would be destroyed before they can be mapped.
Stop-word removal, when enabled, runs on the cleaned token stream.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Mapping

from .errors import ParseError, ValidationError

_TAG_RE = re.compile(r"(?<!\S)@\S*")


@dataclass(frozen=True)
class CleaningConfig:
    """Which cleaning stages to apply.

    ``remove_stopwords`` requires ``general``: stop-word removal is only
    defined on preprocessed text.
    """

    general: bool = True
    remove_stopwords: bool = False
    lowercase: bool = False

    def __post_init__(self) -> None:
        if self.remove_stopwords and not self.general:
            raise ValidationError("remove_stopwords requires general preprocessing")


RAW = CleaningConfig(general=False)
GENERAL = CleaningConfig(general=True)
GENERAL_STOPWORDS = CleaningConfig(general=True, remove_stopwords=True)


class _ReplacementTable:
    """Mapping from surface strings to descriptions, replaced longest-first."""

    def __init__(self, mapping: Mapping[str, str]):
        for key, desc in mapping.items():
            if not key:
                raise ValidationError("replacement key must be non-empty")
            if not desc:
                raise ValidationError(f"replacement for {key!r} must be non-empty")
        self.mapping = dict(mapping)
        # Longest key first so the longest match wins deterministically at
        # every position; ties broken lexicographically.
        ordered = sorted(self.mapping, key=lambda k: (-len(k), k))
        if ordered:
            self._pattern = re.compile("|".join(re.escape(k) for k in ordered))
        else:
            self._pattern = None

    def __len__(self) -> int:
        return len(self.mapping)

    def replace(self, text: str) -> str:
        if self._pattern is None:
            return text
        return self._pattern.sub(lambda m: f" {self.mapping[m.group(0)]} ", text)


class EmoticonTable(_ReplacementTable):
    """Punctuation/letter emoticons (``:)``, ``:-D``, ...) to descriptions.

    Keys must contain at least one character that is neither alphanumeric nor
    whitespace; allowing pure-letter keys (e.g. ``XD``) would break the
    idempotence of :func:`clean`, because replacement output is plain words.
    """

    def __init__(self, mapping: Mapping[str, str]):
        for key in mapping:
            if all(c.isalnum() or c.isspace() for c in key):
                raise ValidationError(
                    f"emoticon {key!r} has no punctuation anchor; pure-letter "
                    "emoticons are not supported"
                )
        super().__init__(mapping)


class EmojiTable(_ReplacementTable):
    """Unicode emoji codepoint sequences to descriptions (letters and spaces only)."""

    def __init__(self, mapping: Mapping[str, str]):
        for key, desc in mapping.items():
            if not all(c.isalpha() or c == " " for c in desc):
                raise ValidationError(
                    f"emoji description {desc!r} may contain only letters and spaces"
                )
        super().__init__(mapping)


@dataclass(frozen=True)
class StopwordList:
    words: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "words", frozenset(w.lower() for w in self.words))

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.words

    def __len__(self) -> int:
        return len(self.words)


def _load_tsv_table(path: str | Path) -> dict[str, str]:
    mapping: dict[str, str] = {}
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise ParseError("expected `key<TAB>description`", str(path), lineno)
            key, desc = fields
            mapping.setdefault(key, desc)
    return mapping


def load_emoticons(path: str | Path) -> EmoticonTable:
    return EmoticonTable(_load_tsv_table(path))


def load_emojis(path: str | Path) -> EmojiTable:
    return EmojiTable(_load_tsv_table(path))


def load_stopwords(path: str | Path) -> StopwordList:
    words = set()
    with Path(path).open("r", encoding="utf-8") as fh:
        for raw in fh:
            word = raw.strip()
            if word:
                words.add(word)
    return StopwordList(frozenset(words))


def _resource(name: str):
    return resources.files("emoknn") / "resources" / name


@lru_cache(maxsize=1)
def default_emoticons() -> EmoticonTable:
    with resources.as_file(_resource("emoticons.tsv")) as p:
        return load_emoticons(p)


@lru_cache(maxsize=1)
def default_emojis() -> EmojiTable:
    with resources.as_file(_resource("emojis.tsv")) as p:
        return load_emojis(p)


@lru_cache(maxsize=1)
def default_stopwords() -> StopwordList:
    with resources.as_file(_resource("stopwords.txt")) as p:
        return load_stopwords(p)


def _keep_char(ch: str) -> bool:
    if ch.isspace():
        return True
    return unicodedata.category(ch)[0] not in "PSN"


def clean(
    text: str,
    config: CleaningConfig,
    emoticons: EmoticonTable | None = None,
    emojis: EmojiTable | None = None,
    stopwords: StopwordList | None = None,
) -> str:
    """Apply the cleaning pipeline; with ``general=False`` the text passes through."""
    if not config.general:
        return text
    emoticons = default_emoticons() if emoticons is None else emoticons
    emojis = default_emojis() if emojis is None else emojis

    s = emojis.replace(text)
    s = emoticons.replace(s)
    s = _TAG_RE.sub("", s)
    s = s.replace("&", " and ")
    s = s.replace("#", "")
    s = s.replace("\r", " ").replace("\n", " ")
    s = "".join(ch for ch in s if _keep_char(ch))
    if config.lowercase:
        s = s.lower()
    s = " ".join(s.split())

    if config.remove_stopwords:
        stopwords = default_stopwords() if stopwords is None else stopwords
        if not stopwords.words:
            raise ValidationError("stop-word removal enabled with an empty stopword list")
        s = " ".join(tok for tok in s.split() if tok not in stopwords)
    return s


def tokenize(text: str) -> list[str]:
    """Whitespace tokenization; never yields empty tokens."""
    return text.split()
