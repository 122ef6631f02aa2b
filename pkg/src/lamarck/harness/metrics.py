from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError


@dataclass(frozen=True)
class RocPoint:
    threshold: float
    tpr: float
    fpr: float


def roc_curve(scores: np.ndarray, labels: np.ndarray, class_index: int) -> tuple[list[RocPoint], float]:
    """One-vs-rest ROC for ``class_index`` and its trapezoidal AUC.

    ``scores`` holds per-sample class probabilities (n, C). Thresholds sweep
    the distinct scores from high to low; a sample is called positive when
    its score is >= the threshold. The first point (threshold +inf) is (0, 0)
    and the last is (1, 1).
    """
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    if scores.ndim != 2 or scores.shape[0] != labels.shape[0]:
        raise DataError("scores must be (n, C) with one label per row")
    if not np.allclose(scores.sum(axis=1), 1.0, atol=1e-6):
        raise DataError("score rows must sum to 1")
    if not 0 <= class_index < scores.shape[1]:
        raise DataError(f"class {class_index} out of range")
    pos = labels == class_index
    n_pos, n_neg = int(pos.sum()), int((~pos).sum())
    if n_pos == 0:
        raise DataError(f"class {class_index} does not occur in the labels")
    if n_neg == 0:
        raise DataError(f"every sample is class {class_index}; no negatives")

    s = scores[:, class_index]
    order = np.argsort(-s, kind="stable")
    s_sorted, pos_sorted = s[order], pos[order]
    tp = np.cumsum(pos_sorted)
    fp = np.cumsum(~pos_sorted)
    # last index of each run of equal scores
    ends = np.flatnonzero(np.r_[s_sorted[1:] != s_sorted[:-1], True])
    tpr = np.r_[0.0, tp[ends] / n_pos]
    fpr = np.r_[0.0, fp[ends] / n_neg]
    thresholds = np.r_[np.inf, s_sorted[ends]]
    points = [RocPoint(float(t), float(a), float(b)) for t, a, b in zip(thresholds, tpr, fpr)]
    auc = float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2.0))
    return points, auc
