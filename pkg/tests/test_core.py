import numpy as np
import pytest

from qensemble import (
    START,
    InvalidActionError,
    PredictionMatrix,
    ValidationError,
    available_actions,
    derive_seed,
    ensemble_add,
    finish_state,
    format_state,
    make_rng,
    members,
    state_cardinality,
    state_from_members,
    successors,
)


class TestStates:
    def test_start_is_empty(self):
        assert START == 0
        assert state_cardinality(START) == 0
        assert members(START) == []

    def test_finish_state_has_all_bits(self):
        assert finish_state(1) == 0b1
        assert finish_state(4) == 0b1111
        assert state_cardinality(finish_state(12)) == 12

    def test_cardinality_matches_popcount(self, rng):
        for state in rng.integers(0, 1 << 20, size=200):
            state = int(state)
            assert state_cardinality(state) == bin(state).count("1")

    def test_members_round_trip(self, rng):
        for _ in range(100):
            size = int(rng.integers(0, 8))
            picks = sorted(rng.choice(16, size=size, replace=False).tolist())
            state = state_from_members(picks)
            assert members(state) == picks

    def test_members_sorted_ascending(self):
        state = state_from_members([7, 2, 11])
        assert members(state) == [2, 7, 11]


class TestActions:
    def test_add_sets_bit(self):
        state = ensemble_add(START, 3, pool_size=5)
        assert members(state) == [3]
        state = ensemble_add(state, 0, pool_size=5)
        assert members(state) == [0, 3]

    def test_add_duplicate_rejected(self):
        state = state_from_members([1, 2])
        with pytest.raises(InvalidActionError):
            ensemble_add(state, 2, pool_size=4)

    def test_add_out_of_range_rejected(self):
        with pytest.raises(InvalidActionError):
            ensemble_add(START, 4, pool_size=4)
        with pytest.raises(InvalidActionError):
            ensemble_add(START, -1, pool_size=4)

    def test_successors_differ_by_one_member(self):
        state = state_from_members([0, 2])
        succ = successors(state, pool_size=4)
        assert len(succ) == 2
        for nxt in succ:
            assert state_cardinality(nxt) == 3
            assert state & nxt == state

    def test_successor_count_shrinks_to_zero(self):
        n = 5
        state = START
        for picked in range(n):
            assert len(successors(state, n)) == n - picked
            state = successors(state, n)[0]
        assert state == finish_state(n)
        assert successors(state, n) == []

    def test_available_actions_consistent_with_successors(self):
        state = state_from_members([1, 3])
        acts = available_actions(state, pool_size=5)
        assert acts == [0, 2, 4]
        assert [ensemble_add(state, a, 5) for a in acts] == successors(state, 5)

    def test_format_state(self):
        state = state_from_members([0, 2])
        assert format_state(START) == "{}"
        assert format_state(state) == "{0,2}"
        assert format_state(state, predictor_ids=("alpha", "b", "c")) == "{alpha,c}"


class TestPredictionMatrix:
    def test_valid_construction(self):
        scores = np.array([[0.1, 0.9], [0.5, 0.5]])
        matrix = PredictionMatrix(scores, [1, 0], ("a", "b"))
        assert matrix.n_predictors == 2
        assert matrix.n_examples == 2
        assert matrix.predictor_ids == ("a", "b")

    def test_arrays_are_copied_and_frozen(self):
        scores = np.array([[0.1, 0.9]])
        labels = np.array([1, 0])
        matrix = PredictionMatrix(scores, labels, ("a",))
        scores[0, 0] = 0.7
        labels[0] = 0
        assert matrix.scores[0, 0] == 0.1
        assert matrix.labels[0] == 1
        with pytest.raises(ValueError):
            matrix.scores[0, 0] = 0.3

    def test_score_range_enforced(self):
        with pytest.raises(ValidationError):
            PredictionMatrix([[1.2, 0.0]], [1, 0], ("a",))
        with pytest.raises(ValidationError):
            PredictionMatrix([[-0.1, 0.0]], [1, 0], ("a",))
        with pytest.raises(ValidationError):
            PredictionMatrix([[np.nan, 0.0]], [1, 0], ("a",))

    def test_label_values_enforced(self):
        with pytest.raises(ValidationError):
            PredictionMatrix([[0.5, 0.5]], [1, 2], ("a",))

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            PredictionMatrix([[0.5, 0.5]], [1, 0, 1], ("a",))
        with pytest.raises(ValidationError):
            PredictionMatrix([0.5, 0.5], [1, 0], ("a",))

    def test_duplicate_ids_rejected(self):
        with pytest.raises(ValidationError):
            PredictionMatrix([[0.5], [0.4]], [1], ("a", "a"))

    def test_id_count_must_match_rows(self):
        with pytest.raises(ValidationError):
            PredictionMatrix([[0.5], [0.4]], [1], ("a",))

    def test_subset_examples(self, matrix_factory):
        matrix = matrix_factory(seed=3, n=4, m=30)
        idx = np.array([5, 1, 7])
        sub = matrix.subset_examples(idx)
        assert sub.n_predictors == 4
        assert sub.n_examples == 3
        assert np.array_equal(sub.scores, matrix.scores[:, idx])
        assert np.array_equal(sub.labels, matrix.labels[idx])
        assert sub.predictor_ids == matrix.predictor_ids

    def test_subset_predictors(self, matrix_factory):
        matrix = matrix_factory(seed=4, n=5, m=20)
        sub = matrix.subset_predictors([4, 0])
        assert sub.predictor_ids == ("p4", "p0")
        assert np.array_equal(sub.scores, matrix.scores[[4, 0]])


class TestSeeding:
    def test_make_rng_deterministic(self):
        a = make_rng(7).random(5)
        b = make_rng(7).random(5)
        assert np.array_equal(a, b)

    def test_derive_seed_deterministic(self):
        assert derive_seed(42, "split") == derive_seed(42, "split")

    def test_derive_seed_varies_with_parts(self):
        seen = {
            derive_seed(42, "split"),
            derive_seed(42, "ordering", 0),
            derive_seed(42, "ordering", 1),
            derive_seed(43, "split"),
            derive_seed(42),
        }
        assert len(seen) == 5

    def test_derive_seed_range(self):
        for part in range(50):
            seed = derive_seed(9, "x", part)
            assert 0 <= seed < 2**64
