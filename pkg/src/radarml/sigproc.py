"""Scan transforms: baseband envelope, slow-time motion filter, standardization.

The baseband representation is the magnitude of the analytic signal,
computed with the frequency-domain Hilbert construction. The motion
filter is a second-order difference across three consecutive slow-time
scans, taken independently per fast-time bin, which cancels anything
static. Standardization centers a single vector and scales it to unit
population standard deviation.
"""

from __future__ import annotations

import numpy as np

from .dataset import DATA_TYPES, LabeledDataset

# Relative floor under which a scan's spread counts as zero; catches exact
# constants whose mean is not representable exactly.
_DEGENERATE_RTOL = 1e-12


class DegenerateScanError(ValueError):
    """Scan with zero standard deviation; cannot be standardized."""


def _as_finite_vector(x, min_len: int = 1) -> np.ndarray:
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError("expected a 1-D sample vector")
    if v.size < min_len:
        raise ValueError(f"sample vector must have at least {min_len} elements")
    if not np.all(np.isfinite(v)):
        raise ValueError("sample vector contains non-finite values")
    return v


def analytic_envelope(scan) -> np.ndarray:
    """|analytic signal| via FFT: zero negative frequencies, double positive
    ones, keep DC and Nyquist, inverse transform, magnitude.

    Odd-length inputs are zero-padded to the next even length for the
    transform; the output is truncated back, so its length always equals
    the input length. Inputs shorter than 8 samples are rejected.
    """
    x = _as_finite_vector(scan, min_len=8)
    n = x.size
    if n % 2:
        x = np.concatenate([x, [0.0]])
    m = x.size
    spectrum = np.fft.fft(x)
    weights = np.zeros(m)
    weights[0] = 1.0
    weights[m // 2] = 1.0
    weights[1 : m // 2] = 2.0
    env = np.abs(np.fft.ifft(spectrum * weights))
    return env[:n]


def motion_filter(scan_t, scan_t1, scan_t2) -> np.ndarray:
    """Second-order slow-time difference per fast-time bin.

    ``scan_t1`` and ``scan_t2`` are the scans one and two slow-time steps
    before ``scan_t``; the output is scan_t - 2*scan_t1 + scan_t2.
    """
    a = _as_finite_vector(scan_t)
    b = _as_finite_vector(scan_t1)
    c = _as_finite_vector(scan_t2)
    if not (a.size == b.size == c.size):
        raise ValueError("motion filter needs three scans of equal length")
    return a - 2.0 * b + c


def _spread(x: np.ndarray) -> tuple[float, float]:
    mu = float(x.mean())
    sigma = float(np.sqrt(np.mean((x - mu) ** 2)))
    return mu, sigma


def is_degenerate(x) -> bool:
    """True when the vector is constant to within floating-point noise."""
    v = np.asarray(x, dtype=np.float64)
    _, sigma = _spread(v)
    scale = max(1.0, float(np.max(np.abs(v)))) if v.size else 1.0
    return sigma <= _DEGENERATE_RTOL * scale


def standardize(x) -> np.ndarray:
    """(x - mean) / population std, element-wise.

    Raises DegenerateScanError for constant vectors; dataset pipelines
    drop such examples and count them rather than aborting.
    """
    v = _as_finite_vector(x, min_len=2)
    mu, sigma = _spread(v)
    if sigma <= _DEGENERATE_RTOL * max(1.0, float(np.max(np.abs(v)))):
        raise DegenerateScanError("constant scan has zero standard deviation")
    return (v - mu) / sigma


def standardize_rows(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-row standardization of a scan matrix.

    Returns (Z, kept_mask); degenerate rows are excluded from Z and
    marked False in the mask.
    """
    X = np.asarray(X, dtype=np.float64)
    mu = X.mean(axis=1, keepdims=True)
    centered = X - mu
    sigma = np.sqrt(np.mean(centered**2, axis=1))
    scale = np.maximum(1.0, np.max(np.abs(X), axis=1, initial=0.0))
    kept = sigma > _DEGENERATE_RTOL * scale
    Z = centered[kept] / sigma[kept, None]
    return Z, kept


def standardize_dataset(ds: LabeledDataset) -> LabeledDataset:
    """Standardize every example of a dataset, dropping degenerate rows."""
    Z, kept = standardize_rows(ds.scans)
    return LabeledDataset(
        scans=Z,
        labels=ds.labels[kept],
        scheme=ds.scheme,
        data_type=ds.data_type,
        scenario_id=ds.scenario_id,
        history=None,
        n_dropped=ds.n_dropped + int(np.sum(~kept)),
    )


def derive_dataset(raw: LabeledDataset, data_type: str) -> LabeledDataset:
    """Project a generator dataset onto one representation.

    raw keeps the slow-time-t scan; baseband takes its envelope;
    motion_filtered runs the second-order difference over the stored
    triple. Examples whose derived vector is constant are dropped and
    counted in ``n_dropped``.
    """
    if data_type not in DATA_TYPES:
        raise ValueError(f"unknown data_type {data_type!r}")
    if data_type == "raw":
        features = raw.scans.copy()
    elif data_type == "baseband":
        features = np.stack([analytic_envelope(row) for row in raw.scans])
    else:
        if raw.history is None:
            raise ValueError("motion_filtered derivation needs the slow-time triples")
        features = raw.scans - 2.0 * raw.history[:, 1, :] + raw.history[:, 0, :]
    mu = features.mean(axis=1, keepdims=True)
    sigma = np.sqrt(np.mean((features - mu) ** 2, axis=1))
    scale = np.maximum(1.0, np.max(np.abs(features), axis=1, initial=0.0))
    kept = sigma > _DEGENERATE_RTOL * scale
    return LabeledDataset(
        scans=features[kept],
        labels=raw.labels[kept],
        scheme=raw.scheme,
        data_type=data_type,
        scenario_id=raw.scenario_id,
        history=None,
        n_dropped=raw.n_dropped + int(np.sum(~kept)),
    )
