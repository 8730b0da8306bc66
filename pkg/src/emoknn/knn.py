"""Cosine similarity, top-k retrieval, and the weighted-kNN predictor.

Similarity between vectors a and b is cos(a, b) = a.b / (|a||b|), shifted
into [0, 1] as (1 + cos) / 2. A query's k most similar training instances
vote with their similarities as weights; the trace of those neighbors is
returned with every prediction and is the unit of explainability.

All query operations are pure and deterministic: similarity ties break by
ascending training index, and per-query reductions run in a fixed order, so
results are bit-identical under any parallel schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .data import EmotionClass
from .errors import ValidationError


class Aggregation(str, Enum):
    WEIGHTED_MEAN = "weighted_mean"
    WEIGHTED_MAJORITY = "weighted_majority"


@dataclass(frozen=True)
class Neighbor:
    """One training instance retrieved for a query."""

    train_index: int
    train_id: str
    similarity: float
    label: EmotionClass

    def __post_init__(self) -> None:
        if not 0.0 <= self.similarity <= 1.0:
            raise ValidationError(f"similarity {self.similarity!r} outside [0, 1]")


class WknnModel:
    """Frozen training matrix + labels answering weighted-kNN queries."""

    def __init__(
        self,
        matrix: np.ndarray,
        labels: Sequence[EmotionClass],
        ids: Sequence[str],
        k: int,
        aggregation: Aggregation = Aggregation.WEIGHTED_MEAN,
    ):
        matrix = np.ascontiguousarray(matrix, dtype=np.float64)
        if matrix.ndim != 2:
            raise ValidationError("training matrix must be 2-D (instances x features)")
        n = matrix.shape[0]
        if len(labels) != n or len(ids) != n:
            raise ValidationError("matrix, labels and ids must have equal lengths")
        if k < 1 or k % 2 == 0:
            raise ValidationError(f"k must be an odd integer >= 1, got {k}")
        if n < k:
            raise ValidationError(f"k={k} exceeds training size {n}")
        matrix.setflags(write=False)
        self.matrix = matrix
        self.labels = tuple(EmotionClass(l) for l in labels)
        self.ids = tuple(str(i) for i in ids)
        self.k = k
        self.aggregation = Aggregation(aggregation)
        norms = np.linalg.norm(matrix, axis=1)
        norms.setflags(write=False)
        self._row_norms = norms

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """cos(a, b) in [-1, 1]; zero-norm inputs yield 0 (a neutral angle)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValidationError(f"vector widths differ: {a.shape} vs {b.shape}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


def cos_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Shift cosine into a [0, 1] similarity: (1 + cos(a, b)) / 2."""
    return (1.0 + cosine(a, b)) / 2.0


def _similarities(model: WknnModel, query: np.ndarray) -> np.ndarray:
    """cos_similarity of the query against every training row, vectorized."""
    query = np.asarray(query, dtype=np.float64)
    if query.shape != (model.dim,):
        raise ValidationError(
            f"query width {query.shape} does not match model width ({model.dim},)"
        )
    qnorm = float(np.linalg.norm(query))
    dots = model.matrix @ query
    denom = model._row_norms * qnorm
    cos = np.divide(dots, denom, out=np.zeros_like(dots), where=denom > 0.0)
    np.clip(cos, -1.0, 1.0, out=cos)
    return (1.0 + cos) / 2.0


def neighbors(model: WknnModel, query: np.ndarray) -> list[Neighbor]:
    """The k most similar training instances, most similar first.

    Equal similarities are ordered by ascending training index, so results
    are reproducible for duplicated training rows.
    """
    sims = _similarities(model, query)
    order = np.argsort(-sims, kind="stable")[: model.k]
    return [
        Neighbor(
            train_index=int(i),
            train_id=model.ids[i],
            similarity=float(sims[i]),
            label=model.labels[i],
        )
        for i in order
    ]


def predict(model: WknnModel, query: np.ndarray) -> tuple[float, list[Neighbor]]:
    """Score a query in [0, 3] from its k neighbors, with the trace.

    weighted_mean: sum(w_i * label_i) / sum(w_i), falling back to the
    unweighted mean when all weights are zero. weighted_majority: the class
    with the largest summed weight, lowest class on ties, returned as a
    float. Sums run over the trace in retrieval order via ``math.fsum``.
    """
    trace = neighbors(model, query)
    if model.aggregation is Aggregation.WEIGHTED_MEAN:
        total = math.fsum(n.similarity for n in trace)
        if total == 0.0:
            score = math.fsum(float(n.label) for n in trace) / len(trace)
        else:
            score = math.fsum(n.similarity * float(n.label) for n in trace) / total
        # A weighted mean lies between the extreme labels; clamp away the
        # one-ulp float overshoot the product sum can introduce.
        lo = float(min(n.label for n in trace))
        hi = float(max(n.label for n in trace))
        score = min(hi, max(lo, score))
    else:
        class_weight = [
            math.fsum(n.similarity for n in trace if n.label == cls)
            for cls in EmotionClass
        ]
        best = 0
        for cls in range(1, len(class_weight)):
            if class_weight[cls] > class_weight[best]:
                best = cls
        score = float(best)
    return score, trace


def rule_of_thumb_k(n: int) -> int:
    """sqrt(n)/2 rounded to the nearest odd integer, halves up, at least 1."""
    if n <= 0:
        raise ValidationError(f"dataset size must be positive, got {n}")
    target = math.sqrt(n) / 2.0
    half_steps = math.floor((target - 1.0) / 2.0 + 0.5)
    return max(1, 2 * half_steps + 1)
