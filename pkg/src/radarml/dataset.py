"""Labeled scan datasets and their on-disk container.

A dataset is a matrix of fast-time scans plus a label vector. Datasets
produced by the generator additionally carry the two preceding slow-time
scans per example (``history``) so the motion filter can be derived
without regenerating anything.

Binary file layout (all integers little-endian):

    magic        4 bytes   b"RDS1"
    version      uint32    currently 1
    n_examples   uint64
    n_bins       uint64
    scheme       uint16 length + UTF-8 bytes
    data_type    uint16 length + UTF-8 bytes
    scenario_id  uint16 length + UTF-8 bytes
    scans        float64 x (n_examples * n_bins), row-major
    labels       int64 x n_examples

A human-readable YAML sidecar written next to each file records the
generating configuration.
"""

from __future__ import annotations

import io
import os
import struct
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .labeling import N_CLASSES

MAGIC = b"RDS1"
FORMAT_VERSION = 1

DATA_TYPES = ("raw", "baseband", "motion_filtered")


class DatasetFormatError(ValueError):
    """Raised when a dataset file does not match the documented layout."""


@dataclass
class LabeledDataset:
    scans: np.ndarray  # (n_examples, n_bins) float64, the slow-time-t scan
    labels: np.ndarray  # (n_examples,) int64
    scheme: str  # labeling scheme id ("simple4" | "grid10")
    data_type: str  # "raw" | "baseband" | "motion_filtered"
    scenario_id: str
    history: Optional[np.ndarray] = None  # (n_examples, 2, n_bins): scans at t-2, t-1
    n_dropped: int = 0  # examples removed as degenerate during derivation

    def __post_init__(self):
        self.scans = np.asarray(self.scans, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.scans.ndim != 2:
            raise ValueError("scans must be a 2-D matrix")
        if self.labels.shape != (self.scans.shape[0],):
            raise ValueError("labels length must match the number of scans")
        if self.data_type not in DATA_TYPES:
            raise ValueError(f"unknown data_type {self.data_type!r}")
        if not np.all(np.isfinite(self.scans)):
            raise ValueError("scan samples must all be finite")
        if self.history is not None:
            self.history = np.asarray(self.history, dtype=np.float64)
            if self.history.shape != (self.n_examples, 2, self.n_bins):
                raise ValueError("history must have shape (n_examples, 2, n_bins)")

    @property
    def n_examples(self) -> int:
        return self.scans.shape[0]

    @property
    def n_bins(self) -> int:
        return self.scans.shape[1]

    @property
    def dataset_id(self) -> str:
        return f"{self.scenario_id}-{self.scheme}-{self.data_type}"

    def validate_labels(self) -> None:
        """Check labels fit the scheme and each class occurs at least twice."""
        n_classes = N_CLASSES.get(self.scheme)
        if n_classes is None:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.n_examples and (self.labels.min() < 0 or self.labels.max() >= n_classes):
            raise ValueError(f"labels outside 0..{n_classes - 1} for scheme {self.scheme}")
        counts = np.bincount(self.labels, minlength=n_classes)
        thin = np.nonzero((counts > 0) & (counts < 2))[0]
        if thin.size:
            raise ValueError(f"class {thin[0]} has fewer than 2 examples; stratification needs 2")

    def take(self, indices: np.ndarray) -> "LabeledDataset":
        """Row subset preserving metadata (history rows follow along)."""
        indices = np.asarray(indices)
        return LabeledDataset(
            scans=self.scans[indices],
            labels=self.labels[indices],
            scheme=self.scheme,
            data_type=self.data_type,
            scenario_id=self.scenario_id,
            history=None if self.history is None else self.history[indices],
            n_dropped=0,
        )


def _pack_str(s: str) -> bytes:
    raw = s.encode("utf-8")
    if len(raw) > 0xFFFF:
        raise ValueError("string field too long for dataset header")
    return struct.pack("<H", len(raw)) + raw


def _read_exact(fh, n: int) -> bytes:
    buf = fh.read(n)
    if len(buf) != n:
        raise DatasetFormatError("truncated dataset file")
    return buf


def _unpack_str(fh) -> str:
    (length,) = struct.unpack("<H", _read_exact(fh, 2))
    return _read_exact(fh, length).decode("utf-8")


def dataset_to_bytes(ds: LabeledDataset) -> bytes:
    """Serialize to the documented binary layout (history is not stored)."""
    out = io.BytesIO()
    out.write(MAGIC)
    out.write(struct.pack("<I", FORMAT_VERSION))
    out.write(struct.pack("<QQ", ds.n_examples, ds.n_bins))
    out.write(_pack_str(ds.scheme))
    out.write(_pack_str(ds.data_type))
    out.write(_pack_str(ds.scenario_id))
    out.write(np.ascontiguousarray(ds.scans, dtype="<f8").tobytes())
    out.write(np.ascontiguousarray(ds.labels, dtype="<i8").tobytes())
    return out.getvalue()


def dataset_from_bytes(buf: bytes) -> LabeledDataset:
    fh = io.BytesIO(buf)
    if _read_exact(fh, 4) != MAGIC:
        raise DatasetFormatError("bad magic; not a dataset file")
    (version,) = struct.unpack("<I", _read_exact(fh, 4))
    if version != FORMAT_VERSION:
        raise DatasetFormatError(f"unsupported dataset format version {version}")
    n_examples, n_bins = struct.unpack("<QQ", _read_exact(fh, 16))
    scheme = _unpack_str(fh)
    data_type = _unpack_str(fh)
    scenario_id = _unpack_str(fh)
    scans = np.frombuffer(_read_exact(fh, 8 * n_examples * n_bins), dtype="<f8")
    labels = np.frombuffer(_read_exact(fh, 8 * n_examples), dtype="<i8")
    if fh.read(1):
        raise DatasetFormatError("trailing bytes after dataset payload")
    return LabeledDataset(
        scans=scans.reshape(n_examples, n_bins).copy(),
        labels=labels.copy(),
        scheme=scheme,
        data_type=data_type,
        scenario_id=scenario_id,
    )


def write_atomic(path: str, data: bytes) -> None:
    """Write-then-rename so readers never observe a partial file."""
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


def save_dataset(ds: LabeledDataset, path: str) -> None:
    write_atomic(path, dataset_to_bytes(ds))


def load_dataset(path: str) -> LabeledDataset:
    with open(path, "rb") as fh:
        return dataset_from_bytes(fh.read())
