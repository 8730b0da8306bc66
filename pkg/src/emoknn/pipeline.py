"""Wiring from raw instances to ensemble predictions.

This is the glue the experiment runner and cross-validation share: clean and
tokenize each instance under a member's cleaning config, build its feature
vector, fit per-member models on training instances only (including min-max
normalizers for appended features), and combine member scores per instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .data import LabeledInstance
from .ensemble import EnsembleConfig, EnsemblePrediction, MemberSpec, combine_member_outputs
from .errors import ValidationError
from .features import (
    AppendedNorm,
    EmbeddingStore,
    FeatureMode,
    compose,
    fit_appended_norm,
)
from .knn import WknnModel, predict
from .lexicon import Lexicon, LexiconName
from .preprocess import (
    CleaningConfig,
    EmojiTable,
    EmoticonTable,
    StopwordList,
    clean,
    tokenize,
)


@dataclass(frozen=True)
class FeatureContext:
    """Everything resolved per emotion: stores, lexicons, cleaning tables.

    Embedding stores are keyed by (model name, cleaning variant): extraction
    runs on cleaned or raw text, so one model yields one store per variant.
    """

    stores: Mapping[tuple[str, str], EmbeddingStore]
    lexicons: Mapping[LexiconName, Lexicon]
    emoticons: EmoticonTable | None = None
    emojis: EmojiTable | None = None
    stopwords: StopwordList | None = None

    def store_map(self, variant: str) -> dict[str, EmbeddingStore]:
        return {name: store for (name, var), store in self.stores.items() if var == variant}


def cleaning_variant(config: CleaningConfig) -> str:
    """The config's name in store paths and result tables."""
    if not config.general:
        return "raw"
    if config.remove_stopwords:
        return "general+stopwords"
    return "general"


def parse_cleaning_variant(name: str) -> CleaningConfig:
    table = {
        "raw": CleaningConfig(general=False),
        "general": CleaningConfig(general=True),
        "general+stopwords": CleaningConfig(general=True, remove_stopwords=True),
    }
    if name not in table:
        raise ValidationError(
            f"unknown cleaning variant {name!r}; expected one of {sorted(table)}"
        )
    return table[name]


@dataclass(frozen=True)
class FittedMember:
    """One member's frozen model plus the normalizers it was fitted with."""

    spec: MemberSpec
    model: WknnModel
    norm: AppendedNorm | None


class EnsemblePipeline:
    """Fit-and-score pipeline for one ensemble config over one context."""

    def __init__(self, config: EnsembleConfig, context: FeatureContext):
        self.config = config
        self.context = context

    def _tokens(self, instances: Sequence[LabeledInstance], cleaning: CleaningConfig):
        ctx = self.context
        return {
            inst.id: tokenize(
                clean(inst.text, cleaning, ctx.emoticons, ctx.emojis, ctx.stopwords)
            )
            for inst in instances
        }

    def _member_vectors(
        self,
        member: MemberSpec,
        instances: Sequence[LabeledInstance],
        tokens_by_id: Mapping[str, Sequence[str]],
        norm: AppendedNorm | None,
    ) -> np.ndarray:
        stores = self.context.store_map(cleaning_variant(member.cleaning))
        rows = [
            compose(inst.id, member.feature, stores, self.context.lexicons,
                    tokens_by_id[inst.id], norm)
            for inst in instances
        ]
        return np.vstack(rows)

    def fit_member(self, member: MemberSpec, train: Sequence[LabeledInstance]) -> FittedMember:
        tokens_by_id = self._tokens(train, member.cleaning)
        norm = None
        if member.feature.mode is FeatureMode.APPENDED:
            stores = self.context.store_map(cleaning_variant(member.cleaning))
            norm = fit_appended_norm(
                member.feature, stores, self.context.lexicons,
                [inst.id for inst in train], tokens_by_id,
            )
        matrix = self._member_vectors(member, train, tokens_by_id, norm)
        labels = [inst.label for inst in train]
        if any(l is None for l in labels):
            raise ValidationError("training instances must be labeled")
        model = WknnModel(
            matrix=matrix,
            labels=labels,
            ids=[inst.id for inst in train],
            k=member.k,
            aggregation=member.aggregation,
        )
        return FittedMember(spec=member, model=model, norm=norm)

    def fit(self, train: Sequence[LabeledInstance]) -> list[FittedMember]:
        return [self.fit_member(m, train) for m in self.config.members]

    def predict_instances(
        self, fitted: Sequence[FittedMember], test: Sequence[LabeledInstance]
    ) -> list[EnsemblePrediction]:
        member_tokens = [
            self._tokens(test, fm.spec.cleaning) for fm in fitted
        ]
        predictions = []
        for inst in test:
            scores = []
            traces = []
            for fm, tokens_by_id in zip(fitted, member_tokens):
                stores = self.context.store_map(cleaning_variant(fm.spec.cleaning))
                query = compose(
                    inst.id, fm.spec.feature, stores, self.context.lexicons,
                    tokens_by_id[inst.id], fm.norm,
                )
                score, trace = predict(fm.model, query)
                scores.append(score)
                traces.append(trace)
            predictions.append(combine_member_outputs(inst.id, scores, traces))
        return predictions

    def __call__(
        self, train: Sequence[LabeledInstance], test: Sequence[LabeledInstance]
    ) -> list[float]:
        """The cross-validation entry point: fit on train, score test."""
        fitted = self.fit(train)
        return [p.final_score for p in self.predict_instances(fitted, test)]
