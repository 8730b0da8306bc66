"""Tests for PCC, fold assignment, cross-validation, and setup comparison."""

from __future__ import annotations

import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from emoknn.errors import ValidationError
from emoknn.evaluation import (
    DegenerateTestError,
    EvalReport,
    UndefinedCorrelationError,
    assign_folds,
    average_emotions,
    cross_validate,
    imbalance_ratio,
    pcc,
    ttest_two_sided,
)

from conftest import make_dataset


def brute_pcc(x, y):
    """Textbook two-pass implementation with fsum accumulation."""
    n = len(x)
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    num = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    dx = math.fsum((a - mx) ** 2 for a in x)
    dy = math.fsum((b - my) ** 2 for b in y)
    return num / math.sqrt(dx * dy)


class TestPcc:
    def test_self_correlation(self, rng):
        x = rng.normal(size=50)
        assert pcc(x, x) == pytest.approx(1.0, abs=1e-12)

    def test_anti_correlation(self, rng):
        x = rng.normal(size=50)
        assert pcc(x, -x) == pytest.approx(-1.0, abs=1e-12)

    def test_hand_value(self):
        assert pcc([1, 2, 3, 4], [2, 1, 4, 3]) == pytest.approx(0.6, abs=1e-15)

    def test_constant_inputs_rejected(self):
        with pytest.raises(UndefinedCorrelationError):
            pcc([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
        with pytest.raises(UndefinedCorrelationError):
            pcc([1.0, 2.0, 3.0], [5.0, 5.0, 5.0])

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            pcc([1.0, 2.0], [1.0, 2.0, 3.0])

    def test_too_short(self):
        with pytest.raises(ValidationError):
            pcc([1.0], [2.0])

    def test_matches_textbook_oracle(self, rng):
        for _ in range(200):
            n = int(rng.integers(2, 200))
            x = rng.normal(size=n)
            y = rng.normal(size=n) + 0.3 * x
            if np.all(x == x[0]) or np.all(y == y[0]):
                continue
            assert pcc(x, y) == pytest.approx(brute_pcc(x, y), abs=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(
        st.integers(0, 100_000),
        st.floats(0.01, 100.0),
        st.floats(-50.0, 50.0),
    )
    def test_positive_affine_invariance(self, seed, alpha, beta):
        rng = np.random.default_rng(seed)
        x = rng.normal(size=30)
        y = rng.normal(size=30)
        assert pcc(alpha * x + beta, y) == pytest.approx(pcc(x, y), abs=1e-12)


class TestFolds:
    def test_partition_and_balance(self):
        labels = [i % 4 for i in range(103)]
        folds = assign_folds(labels, n_folds=5, seed=3)
        sizes = Counter(folds.fold_of)
        assert sum(sizes.values()) == 103
        assert max(sizes.values()) - min(sizes.values()) <= 1

    def test_stratification_within_one(self):
        labels = [0] * 40 + [1] * 17 + [2] * 9 + [3] * 34
        folds = assign_folds(labels, n_folds=5, seed=11)
        for cls in range(4):
            per_fold = Counter(
                folds.fold_of[i] for i, l in enumerate(labels) if l == cls
            )
            counts = [per_fold.get(f, 0) for f in range(5)]
            assert max(counts) - min(counts) <= 1

    def test_deterministic_for_seed(self):
        labels = [i % 3 for i in range(50)]
        a = assign_folds(labels, seed=7)
        b = assign_folds(labels, seed=7)
        assert a.fold_of == b.fold_of

    def test_train_test_split_disjoint(self):
        folds = assign_folds([i % 4 for i in range(40)], seed=0)
        for f in range(5):
            train, test = set(folds.train_indices(f)), set(folds.test_indices(f))
            assert not train & test
            assert train | test == set(range(40))

    def test_unlabeled_rejected(self):
        with pytest.raises(ValidationError):
            assign_folds([0, None, 1])


class TestCrossValidate:
    def test_oracle_pipeline_scores_one(self):
        dataset = make_dataset([i % 4 for i in range(60)])
        folds = assign_folds([int(i.label) for i in dataset.instances], seed=1)

        def gold_pipeline(train, test):
            return [float(inst.label) for inst in test]

        report = cross_validate(dataset, gold_pipeline, folds)
        assert report.ok
        assert report.mean_pcc == pytest.approx(1.0, abs=1e-12)

    def test_constant_pipeline_fails_every_fold(self):
        dataset = make_dataset([i % 4 for i in range(40)])
        folds = assign_folds([int(i.label) for i in dataset.instances], seed=1)
        report = cross_validate(dataset, lambda train, test: [1.0] * len(test), folds)
        assert not report.ok
        assert report.mean_pcc is None
        assert all(e is not None for e in report.fold_errors)

    def test_one_nn_on_separable_clusters(self, rng):
        # Two tight clusters, one per class: 1-NN recovers every label.
        from emoknn.knn import WknnModel, predict as knn_predict

        labels = [0, 1] * 30
        dataset = make_dataset(labels)
        centers = {0: np.array([10.0, 0.0]), 1: np.array([0.0, 10.0])}
        points = {
            inst.id: centers[int(inst.label)] + rng.normal(scale=0.01, size=2)
            for inst in dataset.instances
        }

        def one_nn(train, test):
            model = WknnModel(
                np.vstack([points[i.id] for i in train]),
                [i.label for i in train],
                [i.id for i in train],
                k=1,
            )
            return [knn_predict(model, points[i.id])[0] for i in test]

        folds = assign_folds(labels, seed=5)
        report = cross_validate(dataset, one_nn, folds)
        assert report.ok
        assert report.mean_pcc == pytest.approx(1.0, abs=1e-12)

    def test_report_rows_self_consistent(self):
        report = EvalReport(
            setup="s", per_fold_pcc=(0.5, 0.7), fold_errors=(None, None), mean_pcc=0.6
        )
        rows = report.to_rows()
        assert rows[-1] == ("s", "mean", repr(0.6))

    def test_mean_invariant_enforced(self):
        with pytest.raises(ValidationError):
            EvalReport(
                setup="s", per_fold_pcc=(0.5, 0.7), fold_errors=(None, None), mean_pcc=0.9
            )


class TestAverageEmotions:
    def test_paper_test_column(self):
        scores = {"anger": 0.638, "joy": 0.631, "sadness": 0.670, "fear": 0.601}
        assert average_emotions(scores) == pytest.approx(0.635, abs=5e-4)

    def test_paper_train_column(self):
        scores = {"anger": 0.719, "joy": 0.752, "sadness": 0.756, "fear": 0.680}
        assert average_emotions(scores) == pytest.approx(0.726, abs=1e-3)

    def test_constant(self):
        assert average_emotions({e: 0.42 for e in ("anger", "fear", "joy", "sadness")}) == 0.42

    def test_missing_emotion_rejected(self):
        with pytest.raises(ValidationError, match="fear"):
            average_emotions({"anger": 0.5, "joy": 0.5, "sadness": 0.5})


class TestImbalanceRatio:
    def test_balanced(self):
        assert imbalance_ratio(make_dataset([0, 1, 2, 3] * 10)) == 1.0

    def test_ratio_eight(self):
        labels = [0] * 8 + [1] * 4 + [2] * 2 + [3] * 1
        assert imbalance_ratio(make_dataset(labels)) == 8.0

    def test_empty_class_rejected(self):
        with pytest.raises(ValidationError):
            imbalance_ratio(make_dataset([0, 1, 2, 0]))

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.integers(0, 3), min_size=8).filter(lambda ls: set(ls) == {0, 1, 2, 3}))
    def test_always_at_least_one(self, labels):
        ratio = imbalance_ratio(make_dataset(labels))
        assert ratio >= 1.0
        counts = Counter(labels)
        assert (ratio == 1.0) == (len(set(counts.values())) == 1)


def t_sf_by_quadrature(t, df):
    """P(|T| >= t) for Student-t via numerical integration of the density."""
    from math import lgamma

    log_c = lgamma((df + 1) / 2) - lgamma(df / 2) - 0.5 * math.log(df * math.pi)

    def density(x):
        return math.exp(log_c - (df + 1) / 2 * math.log1p(x * x / df))

    tail, _ = integrate.quad(density, abs(t), np.inf)
    return 2.0 * tail


class TestTTest:
    def test_identical_samples(self):
        t, p = ttest_two_sided([0.1, 0.2, 0.3], [0.1, 0.2, 0.3])
        assert t == 0.0
        assert p == 1.0

    def test_extreme_separation(self):
        a = [1.0, 2.0, 3.0]
        b = [101.0, 102.0, 103.0]
        t, p = ttest_two_sided(a, b)
        assert p < 0.01

    def test_matches_quadrature_oracle(self):
        a = [0.61, 0.63, 0.60, 0.66, 0.62]
        b = [0.55, 0.54, 0.58, 0.52, 0.57]
        t, p = ttest_two_sided(a, b)
        # Welch df recomputed independently for the oracle
        va = np.var(a, ddof=1) / len(a)
        vb = np.var(b, ddof=1) / len(b)
        df = (va + vb) ** 2 / (va**2 / (len(a) - 1) + vb**2 / (len(b) - 1))
        assert p == pytest.approx(t_sf_by_quadrature(t, df), abs=1e-6)

    def test_zero_variance_rejected(self):
        with pytest.raises(DegenerateTestError):
            ttest_two_sided([1.0, 1.0], [1.0, 1.0])

    def test_sample_size_floor(self):
        with pytest.raises(ValidationError):
            ttest_two_sided([1.0], [1.0, 2.0])

    def test_symmetry_in_sign(self):
        a = [0.6, 0.7, 0.65]
        b = [0.5, 0.55, 0.45]
        t_ab, p_ab = ttest_two_sided(a, b)
        t_ba, p_ba = ttest_two_sided(b, a)
        assert t_ab == -t_ba
        assert p_ab == p_ba
