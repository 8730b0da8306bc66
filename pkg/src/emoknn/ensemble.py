"""Mean-vote ensembles of weighted-kNN members and score rounding.

Every member gets the same weight: the final score is the arithmetic mean of
the member scores, computed with ``math.fsum`` so the result is independent
of member evaluation order. Final scores round half-up to submission labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .data import EmotionClass, round_label
from .errors import ValidationError
from .features import FeatureSpec
from .knn import Aggregation, Neighbor, WknnModel, predict
from .preprocess import CleaningConfig

__all__ = [
    "MemberSpec",
    "EnsembleConfig",
    "EnsemblePrediction",
    "predict_ensemble",
    "combine_member_outputs",
    "round_label",
]

_FINAL_SCORE_TOL = 1e-12


@dataclass(frozen=True)
class MemberSpec:
    """One ensemble member: its features, neighborhood size, and cleaning."""

    feature: FeatureSpec
    k: int
    aggregation: Aggregation = Aggregation.WEIGHTED_MEAN
    cleaning: CleaningConfig = CleaningConfig(general=False)
    label: str = ""

    def display_label(self, position: int) -> str:
        return self.label or f"member {position}"


@dataclass(frozen=True)
class EnsembleConfig:
    """Ordered member list; reports reference members by position."""

    members: tuple[MemberSpec, ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise ValidationError("ensemble needs at least one member")
        object.__setattr__(self, "members", tuple(self.members))


@dataclass(frozen=True)
class EnsemblePrediction:
    """Final score for one instance plus everything needed to explain it."""

    instance_id: str
    member_scores: tuple[float, ...]
    final_score: float
    rounded: EmotionClass
    traces: tuple[tuple[Neighbor, ...], ...]

    def __post_init__(self) -> None:
        if len(self.member_scores) != len(self.traces):
            raise ValidationError("one trace per member score required")
        mean = math.fsum(self.member_scores) / len(self.member_scores)
        if abs(self.final_score - mean) > _FINAL_SCORE_TOL:
            raise ValidationError(
                f"final score {self.final_score!r} is not the member mean {mean!r}"
            )
        if self.rounded != round_label(self.final_score):
            raise ValidationError(
                f"rounded label {int(self.rounded)} does not match score {self.final_score!r}"
            )


def combine_member_outputs(
    instance_id: str,
    member_scores: Sequence[float],
    traces: Sequence[Sequence[Neighbor]],
) -> EnsemblePrediction:
    """Average member scores with equal weights and round the result."""
    if not member_scores:
        raise ValidationError("ensemble needs at least one member score")
    if len(member_scores) != len(traces):
        raise ValidationError(
            f"{len(member_scores)} member scores but {len(traces)} traces"
        )
    final = math.fsum(member_scores) / len(member_scores)
    return EnsemblePrediction(
        instance_id=instance_id,
        member_scores=tuple(float(s) for s in member_scores),
        final_score=final,
        rounded=round_label(final),
        traces=tuple(tuple(t) for t in traces),
    )


def predict_ensemble(
    config: EnsembleConfig,
    models: Sequence[WknnModel],
    features_per_member: Sequence[np.ndarray],
    instance_id: str = "",
) -> EnsemblePrediction:
    """Run every member on its feature vector and mean-vote the scores."""
    n = len(config.members)
    if len(models) != n or len(features_per_member) != n:
        raise ValidationError(
            f"ensemble has {n} members but got {len(models)} models and "
            f"{len(features_per_member)} feature vectors"
        )
    scores: list[float] = []
    traces: list[list[Neighbor]] = []
    for model, query in zip(models, features_per_member):
        score, trace = predict(model, query)
        scores.append(score)
        traces.append(trace)
    return combine_member_outputs(instance_id, scores, traces)
