import numpy as np
import pytest

from qensemble import (
    GenerationError,
    SyntheticPoolSpec,
    fmax,
    generate_pool,
)


def spec(**overrides):
    base = dict(n_examples=200, n_predictors=6, balance=0.3, seed=7)
    base.update(overrides)
    return SyntheticPoolSpec(**base)


class TestSpecValidation:
    def test_defaults_accepted(self):
        s = spec()
        assert s.n_distinct == 6

    def test_duplicates_divide_pool(self):
        s = spec(n_predictors=12, duplicates=4)
        assert s.n_distinct == 3
        with pytest.raises(GenerationError, match="duplicates"):
            spec(n_predictors=10, duplicates=4)

    def test_balance_bounds(self):
        with pytest.raises(GenerationError, match="balance"):
            spec(balance=0.0)
        with pytest.raises(GenerationError, match="balance"):
            spec(balance=1.0)

    def test_accuracy_range_bounds(self):
        spec(accuracy_range=(1.0, 1.0))
        spec(accuracy_range=(0.5, 0.5))
        with pytest.raises(GenerationError, match="accuracy_range"):
            spec(accuracy_range=(0.0, 0.8))
        with pytest.raises(GenerationError, match="accuracy_range"):
            spec(accuracy_range=(0.6, 1.2))
        with pytest.raises(GenerationError, match="accuracy_range"):
            spec(accuracy_range=(0.8, 0.6))

    def test_correlation_bounds(self):
        spec(correlation=0.0)
        spec(correlation=0.95)
        with pytest.raises(GenerationError, match="correlation"):
            spec(correlation=1.0)
        with pytest.raises(GenerationError, match="correlation"):
            spec(correlation=-0.5)

    def test_counts_must_be_positive(self):
        with pytest.raises(GenerationError):
            spec(n_examples=0)
        with pytest.raises(GenerationError):
            spec(n_predictors=0)
        with pytest.raises(GenerationError):
            spec(duplicates=0)


class TestGeneratePool:
    def test_balance_must_yield_both_classes(self):
        with pytest.raises(GenerationError, match="balance"):
            generate_pool(spec(n_examples=100, balance=0.0001))
        with pytest.raises(GenerationError, match="balance"):
            generate_pool(spec(n_examples=100, balance=0.9999))

    def test_exact_class_counts(self):
        matrix = generate_pool(spec(n_examples=200, balance=0.3))
        assert matrix.n_examples == 200
        assert int(matrix.labels.sum()) == 60

    def test_shape_and_ids(self):
        matrix = generate_pool(spec(n_predictors=6))
        assert matrix.n_predictors == 6
        assert matrix.predictor_ids == ("p000", "p001", "p002", "p003", "p004", "p005")

    def test_scores_in_unit_interval(self):
        matrix = generate_pool(spec())
        assert matrix.scores.min() >= 0.0
        assert matrix.scores.max() <= 1.0

    def test_deterministic(self):
        a = generate_pool(spec(seed=99))
        b = generate_pool(spec(seed=99))
        assert np.array_equal(a.scores, b.scores)
        assert np.array_equal(a.labels, b.labels)
        assert a.predictor_ids == b.predictor_ids

    def test_seed_changes_output(self):
        a = generate_pool(spec(seed=1))
        b = generate_pool(spec(seed=2))
        assert not np.array_equal(a.scores, b.scores)

    def test_duplicates_are_exact_copies(self):
        matrix = generate_pool(spec(n_predictors=10, duplicates=5))
        assert matrix.predictor_ids[:5] == (
            "p000",
            "p000_dup1",
            "p000_dup2",
            "p000_dup3",
            "p000_dup4",
        )
        for j in range(1, 5):
            assert np.array_equal(matrix.scores[j], matrix.scores[0])
            assert np.array_equal(matrix.scores[5 + j], matrix.scores[5])
        assert not np.array_equal(matrix.scores[0], matrix.scores[5])

    def test_noise_free_pool_is_perfect(self):
        matrix = generate_pool(spec(accuracy_range=(1.0, 1.0)))
        for row in matrix.scores:
            assert fmax(row, matrix.labels).fmax == 1.0

    def test_accuracy_calibration(self):
        s = spec(
            n_examples=10000,
            n_predictors=1,
            balance=0.5,
            accuracy_range=(0.75, 0.75),
            seed=13,
        )
        matrix = generate_pool(s)
        predicted = (matrix.scores[0] >= 0.5).astype(int)
        accuracy = float((predicted == matrix.labels).mean())
        assert abs(accuracy - 0.75) < 0.02

    def test_scores_separate_by_correctness(self):
        matrix = generate_pool(spec(accuracy_range=(0.8, 0.8), seed=3))
        row = matrix.scores[0]
        predicted = row >= 0.5
        # wherever the score is on the high side the prediction is positive
        assert np.array_equal(predicted, row >= 0.5)
        assert row[predicted].min() >= 0.5
        assert row[~predicted].max() < 0.5

    def test_correlation_raises_agreement(self):
        def mean_pairwise_correlation(rho, seed):
            matrix = generate_pool(
                spec(
                    n_examples=2000,
                    n_predictors=6,
                    correlation=rho,
                    accuracy_range=(0.7, 0.7),
                    seed=seed,
                )
            )
            correct = (matrix.scores >= 0.5).astype(int) == matrix.labels
            values = []
            for i in range(6):
                for j in range(i + 1, 6):
                    values.append(np.corrcoef(correct[i], correct[j])[0, 1])
            return float(np.mean(values))

        assert mean_pairwise_correlation(0.9, 5) > mean_pairwise_correlation(0.0, 5) + 0.2
