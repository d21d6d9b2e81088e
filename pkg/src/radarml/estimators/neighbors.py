"""Brute-force k-nearest-neighbors classifier."""

from __future__ import annotations

import numpy as np

from .base import check_predict_input, encode_training_data

# Query rows per distance block; keeps the (chunk, n_train) buffer small.
_CHUNK = 256


def _pairwise_sq_distances(A, B):
    # (a - b)^2 accumulated directly; dot-product expansion would be
    # faster but loses exactness for tied distances.
    return ((A[:, None, :] - B[None, :, :]) ** 2).sum(axis=2)


class KNearestNeighbors:
    """k-NN with exact Euclidean distances.

    Neighbor ties at equal distance keep the lower training index; vote
    ties between classes pick the smallest label.
    """

    kind = "knn"

    def __init__(self, n_neighbors=1, seed=0):
        if int(n_neighbors) < 1:
            raise ValueError("n_neighbors must be >= 1")
        self.n_neighbors = int(n_neighbors)
        self.seed = int(seed)  # unused; kept for a uniform constructor surface

    def fit(self, X, y):
        X, codes, self.classes_ = encode_training_data(X, y)
        if self.n_neighbors > X.shape[0]:
            raise ValueError(
                f"n_neighbors={self.n_neighbors} exceeds {X.shape[0]} training examples"
            )
        self._X = X
        self._codes = codes
        self.n_features_ = X.shape[1]
        return self

    def predict_codes(self, X) -> np.ndarray:
        k = self.n_neighbors
        n_classes = len(self.classes_)
        out = np.empty(X.shape[0], dtype=np.int64)
        for start in range(0, X.shape[0], _CHUNK):
            block = X[start : start + _CHUNK]
            d2 = _pairwise_sq_distances(block, self._X)
            # stable sort so equal distances keep training order
            nearest = np.argsort(d2, axis=1, kind="stable")[:, :k]
            votes = self._codes[nearest]
            for i in range(block.shape[0]):
                counts = np.bincount(votes[i], minlength=n_classes)
                out[start + i] = int(np.argmax(counts))
        return out

    def predict(self, X):
        X = check_predict_input(self, X)
        return self.classes_[self.predict_codes(X)]
