"""Feature datasets: CSV / FEAT1 binary I/O, stratified splitting, synthetic blobs."""

from __future__ import annotations

import csv
import hashlib
import struct
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import DataError, FormatError, SplitError

MAGIC = b"FEAT1"
_HEADER = struct.Struct("<III")
SPLITS = ("train", "val", "test")


@dataclass(frozen=True)
class FeatureDataset:
    """Feature matrix plus labels and disjoint split index arrays.

    A freshly loaded or generated dataset puts every sample in ``train``;
    :func:`split` assigns the real partition.
    """

    features: np.ndarray
    labels: np.ndarray
    n_classes: int
    train: np.ndarray | None = None
    val: np.ndarray | None = None
    test: np.ndarray | None = None

    def __post_init__(self):
        X = np.array(self.features, dtype=float)
        y = np.array(self.labels, dtype=np.int64)
        if X.ndim != 2 or X.shape[1] < 1:
            raise DataError(f"features must be an n x F matrix with F >= 1, got {X.shape}")
        if y.shape != (X.shape[0],):
            raise DataError("need one label per row")
        if not np.all(np.isfinite(X)):
            raise DataError("non-finite feature value")
        if self.n_classes < 1 or (y.size and (y.min() < 0 or y.max() >= self.n_classes)):
            raise DataError(f"labels must lie in [0, {self.n_classes})")
        train = np.arange(X.shape[0]) if self.train is None else np.array(self.train, dtype=np.int64)
        val = np.empty(0, np.int64) if self.val is None else np.array(self.val, dtype=np.int64)
        test = np.empty(0, np.int64) if self.test is None else np.array(self.test, dtype=np.int64)
        allidx = np.concatenate([train, val, test])
        if np.unique(allidx).size != allidx.size:
            raise SplitError("split index sets overlap")
        if allidx.size and (allidx.min() < 0 or allidx.max() >= X.shape[0]):
            raise SplitError("split index out of range")
        for name, arr in (("features", X), ("labels", y), ("train", train), ("val", val), ("test", test)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def indices(self, split: str) -> np.ndarray:
        if split not in SPLITS:
            raise DataError(f"unknown split {split!r}")
        return getattr(self, split)

    def part(self, split: str) -> tuple[np.ndarray, np.ndarray]:
        idx = self.indices(split)
        return self.features[idx], self.labels[idx]

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(struct.pack("<QQQ", self.n_samples, self.n_features, self.n_classes))
        for arr in (self.features, self.labels, self.train, self.val, self.test):
            h.update(np.ascontiguousarray(arr).tobytes())
            h.update(b"|")
        return h.hexdigest()


def load_features(path, format: str | None = None, n_classes: int | None = None) -> FeatureDataset:
    """Read a CSV (``f0..f{F-1},label``) or FEAT1 binary file.

    ``format`` defaults to the file extension. For CSV the class count is
    ``max(label) + 1`` unless ``n_classes`` is given.
    """
    path = Path(path)
    fmt = (format or path.suffix.lstrip(".")).lower()
    if fmt == "csv":
        return _load_csv(path, n_classes)
    if fmt in ("bin", "feat"):
        return _load_bin(path)
    raise FormatError(f"unknown dataset format {fmt!r}")


def _load_csv(path: Path, n_classes: int | None) -> FeatureDataset:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise FormatError("empty CSV")
    header = [h.strip() for h in rows[0]]
    F = len(header) - 1
    if F < 1 or header[-1] != "label" or header[:-1] != [f"f{i}" for i in range(F)]:
        raise FormatError(f"bad CSV header {header}")
    X = np.empty((len(rows) - 1, F))
    y = np.empty(len(rows) - 1, dtype=np.int64)
    for i, row in enumerate(rows[1:]):
        if len(row) != F + 1:
            raise FormatError(f"row {i + 1} has {len(row)} fields, expected {F + 1}")
        try:
            X[i] = [float(v) for v in row[:-1]]
            y[i] = int(row[-1])
        except ValueError as exc:
            raise FormatError(f"row {i + 1}: {exc}") from None
    C = n_classes if n_classes is not None else (int(y.max()) + 1 if y.size else 1)
    return FeatureDataset(X, y, C)


def _load_bin(path: Path) -> FeatureDataset:
    raw = path.read_bytes()
    if raw[: len(MAGIC)] != MAGIC:
        raise FormatError("bad magic, expected FEAT1")
    off = len(MAGIC)
    if len(raw) < off + _HEADER.size:
        raise FormatError("truncated header")
    n, F, C = _HEADER.unpack_from(raw, off)
    off += _HEADER.size
    expected = off + 4 * n * F + n
    if len(raw) != expected:
        raise FormatError(f"payload is {len(raw)} bytes, header implies {expected}")
    X = np.frombuffer(raw, dtype="<f4", count=n * F, offset=off).reshape(n, F)
    y = np.frombuffer(raw, dtype=np.uint8, count=n, offset=off + 4 * n * F)
    if not np.all(np.isfinite(X)):
        raise DataError("non-finite feature value")
    if y.size and int(y.max()) >= C:
        raise DataError(f"label {int(y.max())} >= n_classes {C}")
    return FeatureDataset(X.astype(float), y.astype(np.int64), C)


def save_features(ds: FeatureDataset, path, format: str | None = None) -> None:
    """Write every sample (split assignment is not stored)."""
    path = Path(path)
    fmt = (format or path.suffix.lstrip(".")).lower()
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow([f"f{i}" for i in range(ds.n_features)] + ["label"])
            for x, label in zip(ds.features, ds.labels):
                w.writerow([repr(float(v)) for v in x] + [int(label)])
    elif fmt in ("bin", "feat"):
        if ds.n_classes > 255:
            raise FormatError("FEAT1 stores 8-bit labels; n_classes must be <= 255")
        with open(path, "wb") as fh:
            fh.write(MAGIC)
            fh.write(_HEADER.pack(ds.n_samples, ds.n_features, ds.n_classes))
            fh.write(ds.features.astype("<f4").tobytes())
            fh.write(ds.labels.astype(np.uint8).tobytes())
    else:
        raise FormatError(f"unknown dataset format {fmt!r}")


DIRECTIONS = ("sign", "axis", "gaussian", "auto")


def class_directions(n_classes: int, n_features: int, rng: np.random.Generator,
                     kind: str = "sign") -> np.ndarray:
    """Unit direction per class, shape (C, F).

    ``axis`` uses the first C basis vectors (needs F >= C); ``sign`` uses random
    +-1/sqrt(F) vectors, dense and nearly orthogonal; ``gaussian`` normalizes
    standard normal draws. ``auto`` is ``axis`` when F >= C, else ``gaussian``.
    """
    if kind == "auto":
        kind = "axis" if n_features >= n_classes else "gaussian"
    if kind == "axis":
        if n_features < n_classes:
            raise DataError("axis directions need n_features >= n_classes")
        return np.eye(n_classes, n_features)
    if kind == "sign":
        u = rng.choice([-1.0, 1.0], size=(n_classes, n_features))
        if n_features < 63 and n_classes > 2 ** n_features:
            raise DataError("too few features for distinct sign directions")
        # identical patterns would merge two classes; redraw later duplicates
        for c in range(1, n_classes):
            while any(np.array_equal(u[c], u[k]) for k in range(c)):
                u[c] = rng.choice([-1.0, 1.0], size=n_features)
        return u / np.sqrt(n_features)
    if kind == "gaussian":
        u = rng.standard_normal((n_classes, n_features))
        return u / np.linalg.norm(u, axis=1, keepdims=True)
    raise DataError(f"unknown direction scheme {kind!r}; choose from {DIRECTIONS}")


def synth_blobs(n_classes: int, n_features: int, n_per_class: int, separation: float,
                noise_sd: float, seed: int, directions: str = "sign") -> FeatureDataset:
    """Isotropic Gaussian clusters centred at ``separation * u_c``; rows grouped by class."""
    if min(n_classes, n_features, n_per_class) < 1:
        raise DataError("counts must be >= 1")
    if separation <= 0 or noise_sd <= 0:
        raise DataError("separation and noise_sd must be positive")
    rng = np.random.default_rng(seed)
    centers = separation * class_directions(n_classes, n_features, rng, directions)
    labels = np.repeat(np.arange(n_classes), n_per_class)
    X = centers[labels] + rng.normal(0.0, noise_sd, size=(labels.size, n_features))
    return FeatureDataset(X, labels, n_classes)


def split(ds: FeatureDataset, fractions=(4 / 6, 1 / 6, 1 / 6), seed: int = 0) -> FeatureDataset:
    """Stratified train/val/test partition; per-class remainders go to train."""
    fr = np.asarray(fractions, dtype=float)
    if fr.shape != (3,) or np.any(fr <= 0) or abs(fr.sum() - 1.0) > 1e-9:
        raise SplitError("fractions must be three positive numbers summing to 1")
    rng = np.random.default_rng(seed)
    parts: dict[str, list[np.ndarray]] = {s: [] for s in SPLITS}
    for c in range(ds.n_classes):
        idx = np.flatnonzero(ds.labels == c)
        if idx.size == 0:
            continue
        idx = rng.permutation(idx)
        n_val = int(np.floor(idx.size * fr[1] + 1e-9))
        n_test = int(np.floor(idx.size * fr[2] + 1e-9))
        n_train = idx.size - n_val - n_test
        if min(n_train, n_val, n_test) == 0:
            raise SplitError(f"class {c} with {idx.size} samples leaves a split empty")
        parts["train"].append(idx[:n_train])
        parts["val"].append(idx[n_train:n_train + n_val])
        parts["test"].append(idx[n_train + n_val:])
    out = {s: np.sort(np.concatenate(p)) if p else np.empty(0, np.int64) for s, p in parts.items()}
    return replace(ds, **out)
