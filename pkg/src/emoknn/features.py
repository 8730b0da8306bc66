"""Feature vectors: embedding stores, mean pooling, min-max scaling, appending.

Embeddings arrive precomputed through a plain-text interchange format::

    #model=<name> level=<sentence|token> dim=<d>
    id<TAB>token_index<TAB>f1 f2 ... fd

``token_index`` is always 0 at sentence level; at token level the rows of one
id must appear with consecutive indices starting at 0. Lines after the header
starting with ``#`` are comments.

Appended features concatenate a min-max normalized embedding with a min-max
normalized lexicon vector; both normalizers are fitted on training data only,
and out-of-range test values are clamped into [0, 1]. Embedding-only and
lexicon-only features are used raw.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import MissingInstanceError, ParseError, ValidationError
from .lexicon import CANONICAL_ORDER, Lexicon, LexiconName, combined_vector, tweet_lexicon_vector


class EmbeddingLevel(str, Enum):
    SENTENCE = "sentence"
    TOKEN = "token"


class EmbeddingStore:
    """Precomputed vectors per instance id, at sentence or token granularity.

    Sentence level stores one ``(dim,)`` vector per id; token level stores a
    ``(n_tokens, dim)`` matrix per id with at least one row.
    """

    def __init__(
        self,
        model_name: str,
        level: EmbeddingLevel,
        dim: int,
        vectors: Mapping[str, np.ndarray],
    ):
        if dim <= 0:
            raise ValidationError("embedding dim must be positive")
        self.model_name = model_name
        self.level = EmbeddingLevel(level)
        self.dim = dim
        store: dict[str, np.ndarray] = {}
        for iid, vec in vectors.items():
            arr = np.asarray(vec, dtype=np.float64)
            if self.level is EmbeddingLevel.SENTENCE:
                if arr.shape != (dim,):
                    raise ValidationError(
                        f"id {iid!r}: expected shape ({dim},), got {arr.shape}"
                    )
            else:
                if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] != dim:
                    raise ValidationError(
                        f"id {iid!r}: expected non-empty (n, {dim}) matrix, got {arr.shape}"
                    )
            arr = arr.copy()
            arr.setflags(write=False)
            store[iid] = arr
        self._vectors = store

    def __len__(self) -> int:
        return len(self._vectors)

    def __contains__(self, instance_id: str) -> bool:
        return instance_id in self._vectors

    def ids(self):
        return self._vectors.keys()

    def get(self, instance_id: str) -> np.ndarray:
        try:
            return self._vectors[instance_id]
        except KeyError:
            raise MissingInstanceError(
                f"id {instance_id!r} not in embedding store {self.model_name!r}"
            ) from None


_HEADER_RE = re.compile(r"^#model=(\S+) level=(sentence|token) dim=([0-9]+)\s*$")


def load_embeddings(path: str | Path) -> EmbeddingStore:
    """Parse an interchange file into an :class:`EmbeddingStore`."""
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\r\n")
        m = _HEADER_RE.match(header)
        if m is None:
            raise ParseError(
                "missing or malformed header `#model=<name> level=<level> dim=<d>`",
                str(path),
                1,
            )
        model_name, level_str, dim_str = m.groups()
        level = EmbeddingLevel(level_str)
        dim = int(dim_str)
        if dim <= 0:
            raise ParseError("dim must be positive", str(path), 1)

        rows: dict[str, list[np.ndarray]] = {}
        for lineno, raw in enumerate(fh, start=2):
            line = raw.rstrip("\r\n")
            if line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise ParseError(
                    f"expected `id<TAB>token_index<TAB>floats`, found {len(fields)} fields",
                    str(path),
                    lineno,
                )
            iid, idx_str, float_str = fields
            if not iid:
                raise ParseError("empty id", str(path), lineno)
            try:
                token_index = int(idx_str)
            except ValueError:
                raise ParseError(f"bad token_index {idx_str!r}", str(path), lineno) from None
            try:
                values = np.array([float(x) for x in float_str.split()], dtype=np.float64)
            except ValueError:
                raise ParseError("non-numeric vector component", str(path), lineno) from None
            if values.shape != (dim,):
                raise ParseError(
                    f"row has {values.shape[0]} floats, header declares dim={dim}",
                    str(path),
                    lineno,
                )
            if level is EmbeddingLevel.SENTENCE:
                if iid in rows:
                    raise ParseError(f"duplicate id {iid!r}", str(path), lineno)
                if token_index != 0:
                    raise ParseError(
                        "sentence-level rows must carry token_index 0", str(path), lineno
                    )
                rows[iid] = [values]
            else:
                expected = len(rows.get(iid, []))
                if token_index != expected:
                    raise ParseError(
                        f"id {iid!r}: token_index {token_index}, expected {expected} "
                        "(consecutive from 0; duplicates not allowed)",
                        str(path),
                        lineno,
                    )
                rows.setdefault(iid, []).append(values)

    if level is EmbeddingLevel.SENTENCE:
        vectors = {iid: vecs[0] for iid, vecs in rows.items()}
    else:
        vectors = {iid: np.vstack(vecs) for iid, vecs in rows.items()}
    return EmbeddingStore(model_name, level, dim, vectors)


class FeatureMode(str, Enum):
    EMBEDDING_ONLY = "embedding_only"
    LEXICON_ONLY = "lexicon_only"
    APPENDED = "appended"


@dataclass(frozen=True)
class FeatureSpec:
    """What one feature vector is made of."""

    mode: FeatureMode
    embedding: str | None = None
    lexicon: LexiconName | None = None

    def __post_init__(self) -> None:
        mode = FeatureMode(self.mode)
        if mode is FeatureMode.APPENDED and not (self.embedding and self.lexicon):
            raise ValidationError("appended mode requires both an embedding and a lexicon")
        if mode is FeatureMode.EMBEDDING_ONLY and (self.lexicon or not self.embedding):
            raise ValidationError("embedding_only mode takes an embedding and no lexicon")
        if mode is FeatureMode.LEXICON_ONLY and (self.embedding or not self.lexicon):
            raise ValidationError("lexicon_only mode takes a lexicon and no embedding")


@dataclass(frozen=True)
class MinMaxParams:
    """Per-dimension minima and maxima fitted on training vectors."""

    mins: np.ndarray
    maxs: np.ndarray

    def __post_init__(self) -> None:
        mins = np.asarray(self.mins, dtype=np.float64)
        maxs = np.asarray(self.maxs, dtype=np.float64)
        if mins.shape != maxs.shape or mins.ndim != 1:
            raise ValidationError("mins/maxs must be 1-D arrays of equal length")
        if np.any(mins > maxs):
            raise ValidationError("per-dimension min exceeds max")
        mins = mins.copy()
        maxs = maxs.copy()
        mins.setflags(write=False)
        maxs.setflags(write=False)
        object.__setattr__(self, "mins", mins)
        object.__setattr__(self, "maxs", maxs)

    @property
    def dim(self) -> int:
        return self.mins.shape[0]


def pool_tokens(vectors: Sequence[np.ndarray] | np.ndarray) -> np.ndarray:
    """Component-wise arithmetic mean of a non-empty list of equal-length vectors."""
    try:
        mat = np.asarray(vectors, dtype=np.float64)
    except ValueError:
        raise ValidationError("token vectors must share one length") from None
    if mat.size == 0:
        raise ValidationError("cannot pool an empty list of vectors")
    if mat.ndim == 1:
        mat = mat[np.newaxis, :]
    if mat.ndim != 2:
        raise ValidationError("token vectors must share one length")
    return mat.mean(axis=0)


def fit_minmax(train_vectors: Sequence[np.ndarray] | np.ndarray) -> MinMaxParams:
    """Per-dimension min and max over training vectors only."""
    try:
        mat = np.asarray(train_vectors, dtype=np.float64)
    except ValueError:
        raise ValidationError("need a non-empty list of equal-width vectors") from None
    if mat.ndim != 2 or mat.shape[0] == 0:
        raise ValidationError("need a non-empty list of equal-width vectors")
    return MinMaxParams(mins=mat.min(axis=0), maxs=mat.max(axis=0))


def apply_minmax(v: np.ndarray, params: MinMaxParams) -> np.ndarray:
    """Scale into [0, 1]: (v - min) / (max - min), clamped; flat dimensions map to 0."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (params.dim,):
        raise ValidationError(f"vector width {v.shape} does not match params ({params.dim},)")
    span = params.maxs - params.mins
    flat = span == 0
    safe_span = np.where(flat, 1.0, span)
    scaled = (v - params.mins) / safe_span
    scaled = np.where(flat, 0.0, scaled)
    return np.clip(scaled, 0.0, 1.0)


@dataclass(frozen=True)
class AppendedNorm:
    """The two normalizers an appended feature needs, fitted on training data."""

    embedding: MinMaxParams
    lexicon: MinMaxParams


def _embedding_vector(store: EmbeddingStore, instance_id: str) -> np.ndarray:
    vec = store.get(instance_id)
    if store.level is EmbeddingLevel.TOKEN:
        return pool_tokens(vec)
    return vec


def _lexicon_vector(
    name: LexiconName, lexicons: Mapping[LexiconName, Lexicon], tokens: Sequence[str]
) -> np.ndarray:
    name = LexiconName(name)
    if name is LexiconName.COMBINED:
        missing = [n.value for n in CANONICAL_ORDER if n not in lexicons]
        if missing:
            raise ValidationError(f"combined lexicon vector needs {missing} loaded")
        return combined_vector([lexicons[n] for n in CANONICAL_ORDER], tokens)
    if name not in lexicons:
        raise ValidationError(f"lexicon {name.value!r} not loaded")
    return tweet_lexicon_vector(lexicons[name], tokens)


def _resolve_store(spec: FeatureSpec, stores: Mapping[str, EmbeddingStore]) -> EmbeddingStore:
    if spec.embedding not in stores:
        raise ValidationError(f"embedding store {spec.embedding!r} not loaded")
    return stores[spec.embedding]


def fit_appended_norm(
    spec: FeatureSpec,
    stores: Mapping[str, EmbeddingStore],
    lexicons: Mapping[LexiconName, Lexicon],
    train_ids: Sequence[str],
    tokens_by_id: Mapping[str, Sequence[str]],
) -> AppendedNorm:
    """Fit both halves' min-max params on the training instances."""
    if spec.mode is not FeatureMode.APPENDED:
        raise ValidationError("normalization params are only fitted for appended mode")
    if not train_ids:
        raise ValidationError("cannot fit normalization on an empty training set")
    store = _resolve_store(spec, stores)
    emb = [_embedding_vector(store, iid) for iid in train_ids]
    lex = [_lexicon_vector(spec.lexicon, lexicons, tokens_by_id[iid]) for iid in train_ids]
    return AppendedNorm(embedding=fit_minmax(emb), lexicon=fit_minmax(lex))


def compose(
    instance_id: str,
    spec: FeatureSpec,
    stores: Mapping[str, EmbeddingStore],
    lexicons: Mapping[LexiconName, Lexicon],
    tokens: Sequence[str],
    norm: AppendedNorm | None = None,
) -> np.ndarray:
    """Build the feature vector for one instance under ``spec``.

    Appended mode requires ``norm`` (fitted with :func:`fit_appended_norm` on
    the training fold); the result width is embedding dim + lexicon width.
    """
    if spec.mode is FeatureMode.EMBEDDING_ONLY:
        return _embedding_vector(_resolve_store(spec, stores), instance_id)
    if spec.mode is FeatureMode.LEXICON_ONLY:
        return _lexicon_vector(spec.lexicon, lexicons, tokens)
    if norm is None:
        raise ValidationError("appended mode requires fitted normalization params")
    emb = apply_minmax(_embedding_vector(_resolve_store(spec, stores), instance_id), norm.embedding)
    lex = apply_minmax(_lexicon_vector(spec.lexicon, lexicons, tokens), norm.lexicon)
    return np.concatenate([emb, lex])
