"""Hyperparameter grids for the eight estimator kinds.

Axes are ordered data, not code: candidate enumeration is the cartesian
product in axis order with the last axis varying fastest, so candidate
index -> parameter dict is a stable contract that tests pin down.
"""

from __future__ import annotations

import itertools
from types import MappingProxyType

_C_VALUES = (0.001, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0)
_TREE_COUNTS = (16, 32, 64, 128, 256)
_CRITERIA = ("gini", "entropy")
_MAX_FEATURES = ("auto", "sqrt", "log2")

# kind -> ((axis name, ordered values), ...)
GRID_AXES = MappingProxyType(
    {
        "logistic_regression": (
            ("C", _C_VALUES),
            ("solver", ("lbfgs", "sag", "newton-cg")),
        ),
        "perceptron": (("alpha", (0.0001, 0.001, 0.01, 0.1, 1.0)),),
        "knn": (("n_neighbors", tuple(range(1, 31))),),
        "linear_svc": (("C", _C_VALUES),),
        "decision_tree": (
            ("criterion", _CRITERIA),
            ("max_features", _MAX_FEATURES),
        ),
        "random_forest": (
            ("n_estimators", _TREE_COUNTS),
            ("criterion", _CRITERIA),
            ("max_features", _MAX_FEATURES),
        ),
        "extra_trees": (
            ("n_estimators", _TREE_COUNTS),
            ("criterion", _CRITERIA),
            ("max_features", _MAX_FEATURES),
        ),
        "gradient_boosting": (
            ("n_estimators", _TREE_COUNTS),
            ("learning_rate", (0.2, 0.5, 0.8, 1.0)),
        ),
    }
)

KINDS = tuple(GRID_AXES)


def grid_axes(kind: str):
    try:
        return GRID_AXES[kind]
    except KeyError:
        raise ValueError(f"unknown estimator kind {kind!r}; expected one of {KINDS}") from None


def grid_size(kind: str) -> int:
    size = 1
    for _, values in grid_axes(kind):
        size *= len(values)
    return size


def grid_candidates(kind: str):
    """Yield parameter dicts in enumeration order."""
    axes = grid_axes(kind)
    names = [name for name, _ in axes]
    for combo in itertools.product(*(values for _, values in axes)):
        yield dict(zip(names, combo))


def validate_params(kind: str, params) -> dict:
    """Check that every entry names a grid axis and uses a grid value.

    Values are normalized to the grid's canonical object (e.g. C=1
    becomes 1.0) so equal specs compare equal.
    """
    axes = dict(grid_axes(kind))
    clean = {}
    for name, value in params.items():
        if name not in axes:
            raise ValueError(f"{kind} has no grid axis {name!r}")
        allowed = axes[name]
        for canonical in allowed:
            if isinstance(value, bool) is isinstance(canonical, bool) and value == canonical:
                clean[name] = canonical
                break
        else:
            raise ValueError(
                f"{kind}.{name}={value!r} is not a grid value; allowed: {allowed}"
            )
    return clean
