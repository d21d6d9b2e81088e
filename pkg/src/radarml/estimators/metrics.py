"""Classification metrics."""

from __future__ import annotations

import numpy as np


def accuracy_percent(y_true, y_pred) -> float:
    """Fraction of matching labels, scaled to 0..100."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise ValueError("y_true and y_pred must be 1-D with equal length")
    if y_true.size == 0:
        raise ValueError("cannot score an empty label vector")
    return float(np.mean(y_true == y_pred) * 100.0)


def confusion_matrix(y_true, y_pred, labels) -> np.ndarray:
    """Counts with one row per true label and one column per prediction.

    ``labels`` fixes row/column order; unlisted values raise.
    """
    labels = np.asarray(labels)
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise ValueError("y_true and y_pred must be 1-D with equal length")
    lookup = {label: i for i, label in enumerate(labels.tolist())}
    matrix = np.zeros((labels.size, labels.size), dtype=np.int64)
    for t, p in zip(y_true.tolist(), y_pred.tolist()):
        if t not in lookup or p not in lookup:
            raise ValueError(f"label pair ({t!r}, {p!r}) outside {labels.tolist()}")
        matrix[lookup[t], lookup[p]] += 1
    return matrix
