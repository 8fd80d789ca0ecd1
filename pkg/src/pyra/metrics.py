"""IoU and Dice scoring for binary masks.

Empty-mask convention: two empty masks score 1.0 (a correct "no finding"
prediction); one empty and one non-empty score 0.0.
"""
from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from .types import EvalReport, ImageScore
from .validation import check_mask, check_same_shape


def _counts(pred, gt) -> tuple[int, int, int]:
    p = check_mask(pred, name="prediction")
    g = check_mask(gt, name="ground truth")
    check_same_shape(p, g, "prediction and ground truth")
    inter = int(np.count_nonzero(p & g))
    return inter, int(np.count_nonzero(p)), int(np.count_nonzero(g))


def iou(pred, gt) -> float:
    inter, np_, ng = _counts(pred, gt)
    union = np_ + ng - inter
    if union == 0:
        return 1.0
    return inter / union


def dice(pred, gt) -> float:
    inter, np_, ng = _counts(pred, gt)
    total = np_ + ng
    if total == 0:
        return 1.0
    return 2.0 * inter / total


def evaluate(pairs: Iterable[tuple[str, np.ndarray, np.ndarray]]) -> EvalReport:
    """Score (id, prediction, ground-truth) triples into an EvalReport.

    Aggregation walks the pairs in id-sorted order so results do not
    depend on discovery order.
    """
    scored = []
    for pair_id, pred, gt in sorted(pairs, key=lambda t: t[0]):
        inter, np_, ng = _counts(pred, gt)
        union = np_ + ng - inter
        pair_iou = 1.0 if union == 0 else inter / union
        pair_dice = 1.0 if np_ + ng == 0 else 2.0 * inter / (np_ + ng)
        scored.append(ImageScore(id=pair_id, iou=pair_iou, dice=pair_dice))
    return EvalReport.from_scores(scored)
