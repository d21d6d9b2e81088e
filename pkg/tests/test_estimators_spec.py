import numpy as np
import pytest

from radarml.estimators import (
    ESTIMATOR_CLASSES,
    KINDS,
    EstimatorSpec,
    fit_spec,
    make_estimator,
)
from radarml.estimators.base import check_matrix, encode_training_data


class TestEstimatorSpec:
    def test_kind_checked_at_construction(self):
        with pytest.raises(ValueError):
            EstimatorSpec("svm_rbf")

    def test_params_validated_and_normalized(self):
        spec = EstimatorSpec("linear_svc", {"C": 10})
        assert spec.params == {"C": 10.0}
        with pytest.raises(ValueError):
            EstimatorSpec("linear_svc", {"C": 42.0})

    def test_describe(self):
        assert EstimatorSpec("knn").describe() == "knn"
        text = EstimatorSpec("random_forest", {"n_estimators": 64, "criterion": "gini"}).describe()
        assert text == "random_forest(criterion=gini, n_estimators=64)"

    def test_equal_specs_compare_equal(self):
        assert EstimatorSpec("linear_svc", {"C": 1}) == EstimatorSpec("linear_svc", {"C": 1.0})


class TestFactory:
    @pytest.mark.parametrize("kind", KINDS)
    def test_make_estimator_sets_seed(self, kind):
        model = make_estimator(EstimatorSpec(kind), seed=11)
        assert isinstance(model, ESTIMATOR_CLASSES[kind])
        assert model.seed == 11
        assert model.kind == kind

    def test_fit_spec_round_trip(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(20, 3))
        y = (X[:, 0] > 0).astype(int)
        y[:2] = [0, 1]
        model = fit_spec(EstimatorSpec("decision_tree"), X, y, seed=2)
        assert hasattr(model, "classes_")
        assert set(model.predict(X)) <= {0, 1}


class TestBaseChecks:
    def test_check_matrix_rules(self):
        with pytest.raises(ValueError):
            check_matrix(np.zeros(4))  # 1-D
        with pytest.raises(ValueError):
            check_matrix(np.zeros((0, 4)))  # empty
        bad = np.zeros((2, 2))
        bad[0, 0] = np.inf
        with pytest.raises(ValueError):
            check_matrix(bad)

    def test_encode_training_data_sorts_classes(self):
        X = np.zeros((4, 2)) + np.arange(4)[:, None]
        codes_y = np.array([30, 10, 30, 20])
        _, codes, classes = encode_training_data(X, codes_y)
        assert classes.tolist() == [10, 20, 30]
        assert codes.tolist() == [2, 0, 2, 1]

    def test_single_class_rejected(self):
        with pytest.raises(ValueError):
            encode_training_data(np.zeros((3, 2)), [5, 5, 5])

    def test_label_row_mismatch_rejected(self):
        with pytest.raises(ValueError):
            encode_training_data(np.zeros((3, 2)), [0, 1])
