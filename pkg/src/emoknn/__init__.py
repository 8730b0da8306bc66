"""Explainable weighted-kNN ensembles for ordinal emotion-intensity labeling."""

from .data import (
    Dataset,
    Emotion,
    EmotionClass,
    LabeledInstance,
    PredictionRecord,
    Split,
    merge,
    parse_dataset,
    round_label,
    write_predictions,
)
from .ensemble import (
    EnsembleConfig,
    EnsemblePrediction,
    MemberSpec,
    combine_member_outputs,
    predict_ensemble,
)
from .errors import EmoknnError, MissingInstanceError, ParseError, ValidationError
from .evaluation import (
    EvalReport,
    FoldAssignment,
    assign_folds,
    average_emotions,
    cross_validate,
    imbalance_ratio,
    pcc,
    ttest_two_sided,
)
from .explain import (
    ClassHistogram,
    ExplanationReport,
    IntersectionReport,
    class_histogram,
    neighbor_intersection,
    render_explanation,
)
from .features import (
    AppendedNorm,
    EmbeddingLevel,
    EmbeddingStore,
    FeatureMode,
    FeatureSpec,
    MinMaxParams,
    apply_minmax,
    compose,
    fit_appended_norm,
    fit_minmax,
    load_embeddings,
    pool_tokens,
)
from .knn import (
    Aggregation,
    Neighbor,
    WknnModel,
    cos_similarity,
    cosine,
    neighbors,
    predict,
    rule_of_thumb_k,
)
from .lexicon import (
    CANONICAL_ORDER,
    Lexicon,
    LexiconName,
    LexiconSchema,
    SCHEMAS,
    combined_vector,
    load_lexicon,
    tweet_lexicon_vector,
    word_scores,
)
from .preprocess import (
    CleaningConfig,
    EmojiTable,
    EmoticonTable,
    StopwordList,
    clean,
    tokenize,
)

__version__ = "0.1.0"
