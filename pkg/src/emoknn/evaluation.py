"""Evaluation: Pearson correlation, stratified 5-fold CV, and setup comparison.

The ranking metric is the Pearson correlation coefficient between unrounded
float predictions and gold labels, averaged over folds; per-emotion scores
average into one bottom-line number. Setups are compared with a two-sided
Welch t-test over their per-fold PCC samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.special import betainc

from .data import Dataset, Emotion, EmotionClass, LabeledInstance
from .errors import EmoknnError, ValidationError


class UndefinedCorrelationError(ValidationError):
    """PCC is undefined for a constant input vector."""


class DegenerateTestError(ValidationError):
    """The t-test is undefined when both samples have zero variance."""


def pcc(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation coefficient of two equal-length vectors.

    sum((x-mean x)(y-mean y)) / sqrt(sum((x-mean x)^2) sum((y-mean y)^2)),
    clamped into [-1, 1]. Constant inputs raise
    :class:`UndefinedCorrelationError` rather than silently returning 0.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1 or x.shape != y.shape:
        raise ValidationError(f"length mismatch: {x.shape} vs {y.shape}")
    if x.shape[0] < 2:
        raise ValidationError("PCC needs at least 2 observations")
    if np.all(x == x[0]):
        raise UndefinedCorrelationError("first vector is constant")
    if np.all(y == y[0]):
        raise UndefinedCorrelationError("second vector is constant")
    xc = x - x.mean()
    yc = y - y.mean()
    r = float(xc @ yc) / math.sqrt(float(xc @ xc) * float(yc @ yc))
    return float(np.clip(r, -1.0, 1.0))


@dataclass(frozen=True)
class FoldAssignment:
    """A stratified partition of instance indices into folds.

    The assignment is a pure function of (seed, dataset order, labels):
    indices of each class, taken in dataset order, are shuffled with the
    seeded generator and dealt round-robin with a cursor that carries across
    classes, so overall fold sizes differ by at most one and per-fold class
    counts stay within one of proportional.
    """

    n_folds: int
    seed: int
    fold_of: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n_folds < 2:
            raise ValidationError("need at least 2 folds")
        if len(self.fold_of) < self.n_folds:
            raise ValidationError("fewer instances than folds")
        if any(f < 0 or f >= self.n_folds for f in self.fold_of):
            raise ValidationError("fold id out of range")

    def test_indices(self, fold: int) -> list[int]:
        return [i for i, f in enumerate(self.fold_of) if f == fold]

    def train_indices(self, fold: int) -> list[int]:
        return [i for i, f in enumerate(self.fold_of) if f != fold]


def assign_folds(labels: Sequence[int], n_folds: int = 5, seed: int = 0) -> FoldAssignment:
    """Deterministic stratified fold assignment over labels in dataset order."""
    if any(l is None for l in labels):
        raise ValidationError("fold assignment requires labeled instances")
    rng = np.random.default_rng(seed)
    fold_of = [-1] * len(labels)
    cursor = 0
    for cls in sorted({int(l) for l in labels}):
        class_indices = [i for i, l in enumerate(labels) if int(l) == cls]
        for j in rng.permutation(len(class_indices)):
            fold_of[class_indices[j]] = cursor % n_folds
            cursor += 1
    return FoldAssignment(n_folds=n_folds, seed=seed, fold_of=tuple(fold_of))


# A pipeline is fitted on the training instances and scores the test
# instances; it owns all leakage discipline (normalizers, models) internally.
PipelineFn = Callable[
    [Sequence[LabeledInstance], Sequence[LabeledInstance]], Sequence[float]
]


@dataclass(frozen=True)
class EvalReport:
    """Per-fold PCCs for one setup; failed folds carry an error message.

    ``mean_pcc`` is the mean over successful folds, or None if every fold
    failed.
    """

    setup: str
    per_fold_pcc: tuple[float | None, ...]
    fold_errors: tuple[str | None, ...]
    mean_pcc: float | None

    def __post_init__(self) -> None:
        if len(self.per_fold_pcc) != len(self.fold_errors):
            raise ValidationError("per-fold values and errors must align")
        ok = [v for v in self.per_fold_pcc if v is not None]
        expected = math.fsum(ok) / len(ok) if ok else None
        if (self.mean_pcc is None) != (expected is None):
            raise ValidationError("mean_pcc inconsistent with per-fold values")
        if expected is not None and abs(self.mean_pcc - expected) > 1e-12:
            raise ValidationError("mean_pcc is not the mean of per-fold PCCs")

    @property
    def ok(self) -> bool:
        return all(e is None for e in self.fold_errors)

    def to_rows(self) -> list[tuple[str, str, str]]:
        """(setup, fold, value-or-error) rows plus a trailing summary row."""
        rows = []
        for i, (v, e) in enumerate(zip(self.per_fold_pcc, self.fold_errors)):
            rows.append((self.setup, str(i), repr(v) if v is not None else f"error: {e}"))
        rows.append((self.setup, "mean", repr(self.mean_pcc) if self.mean_pcc is not None else "error"))
        return rows


def cross_validate(
    dataset: Dataset, pipeline: PipelineFn, folds: FoldAssignment, setup: str = ""
) -> EvalReport:
    """Evaluate a pipeline by k-fold CV, collecting per-fold PCCs.

    Predictions stay unrounded floats; PCC compares them to gold labels.
    Fold failures are recorded, not raised.
    """
    if len(folds.fold_of) != len(dataset):
        raise ValidationError("fold assignment does not cover the dataset")
    if any(inst.label is None for inst in dataset.instances):
        raise ValidationError("cross-validation requires fully labeled data")
    per_fold: list[float | None] = []
    errors: list[str | None] = []
    for fold in range(folds.n_folds):
        train = [dataset.instances[i] for i in folds.train_indices(fold)]
        test = [dataset.instances[i] for i in folds.test_indices(fold)]
        try:
            scores = pipeline(train, test)
            if len(scores) != len(test):
                raise ValidationError(
                    f"pipeline returned {len(scores)} scores for {len(test)} instances"
                )
            gold = [float(inst.label) for inst in test]
            per_fold.append(pcc(gold, [float(s) for s in scores]))
            errors.append(None)
        except EmoknnError as exc:
            per_fold.append(None)
            errors.append(str(exc))
    ok = [v for v in per_fold if v is not None]
    mean = math.fsum(ok) / len(ok) if ok else None
    return EvalReport(
        setup=setup, per_fold_pcc=tuple(per_fold), fold_errors=tuple(errors), mean_pcc=mean
    )


def average_emotions(scores: Mapping) -> float:
    """Mean score over exactly the four emotions."""
    keyed = {Emotion(k): float(v) for k, v in scores.items()}
    missing = [e.value for e in Emotion if e not in keyed]
    if missing:
        raise ValidationError(f"missing emotions: {missing}")
    return math.fsum(keyed[e] for e in Emotion) / len(Emotion)


def imbalance_ratio(dataset: Dataset) -> float:
    """Largest class size over smallest class size; 1 means balanced."""
    counts = {cls: 0 for cls in EmotionClass}
    for inst in dataset.instances:
        if inst.label is None:
            raise ValidationError("imbalance ratio requires labeled instances")
        counts[inst.label] += 1
    empty = [int(cls) for cls, c in counts.items() if c == 0]
    if empty:
        raise ValidationError(f"classes {empty} are empty")
    return max(counts.values()) / min(counts.values())


def ttest_two_sided(a: Sequence[float], b: Sequence[float]) -> tuple[float, float]:
    """Welch's unequal-variance t-test; returns (t, two-sided p).

    The p-value comes from the Student-t survival function expressed through
    the regularized incomplete beta: P(|T| >= t) = I_{df/(df+t^2)}(df/2, 1/2).
    """
    a = [float(v) for v in a]
    b = [float(v) for v in b]
    na, nb = len(a), len(b)
    if na < 2 or nb < 2:
        raise ValidationError("t-test needs at least 2 observations per sample")
    mean_a = math.fsum(a) / na
    mean_b = math.fsum(b) / nb
    var_a = math.fsum((v - mean_a) ** 2 for v in a) / (na - 1)
    var_b = math.fsum((v - mean_b) ** 2 for v in b) / (nb - 1)
    sa, sb = var_a / na, var_b / nb
    se2 = sa + sb
    if se2 == 0.0:
        raise DegenerateTestError("both samples have zero variance")
    t = (mean_a - mean_b) / math.sqrt(se2)
    df = se2**2 / (sa**2 / (na - 1) + sb**2 / (nb - 1))
    p = float(betainc(df / 2.0, 0.5, df / (df + t * t))) if t != 0.0 else 1.0
    return t, min(1.0, max(0.0, p))
