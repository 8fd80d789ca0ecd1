import numpy as np
import pytest

from oracles import dice_oracle, iou_oracle
from pyra.errors import ValidationError
from pyra.gridify import gridify_mask
from pyra.metrics import dice, evaluate, iou
from pyra.types import GridSpec


def _mask(rows):
    return np.array(rows, dtype=bool)


def test_identity_masks_score_one(rng):
    m = rng.random((8, 8)) < 0.5
    m[0, 0] = True  # non-empty
    assert iou(m, m) == 1.0
    assert dice(m, m) == 1.0


def test_disjoint_masks_score_zero():
    a = _mask([[1, 0], [0, 0]])
    b = _mask([[0, 0], [0, 1]])
    assert iou(a, b) == 0.0
    assert dice(a, b) == 0.0


def test_partial_overlap_reference_values():
    # |A| = |B| = 2 with overlap 1
    a = _mask([[1, 1], [0, 0]])
    b = _mask([[1, 0], [1, 0]])
    assert iou(a, b) == pytest.approx(1 / 3)
    assert dice(a, b) == pytest.approx(0.5)


def test_both_empty_convention():
    e = np.zeros((4, 4), dtype=bool)
    assert iou(e, e) == 1.0
    assert dice(e, e) == 1.0


def test_one_empty_scores_zero():
    e = np.zeros((2, 2), dtype=bool)
    f = _mask([[1, 0], [0, 0]])
    assert dice(e, f) == 0.0
    assert dice(f, e) == 0.0


def test_dimension_mismatch():
    with pytest.raises(ValidationError):
        iou(np.zeros((2, 2), dtype=bool), np.zeros((3, 3), dtype=bool))


def test_matches_bit_count_oracle_exactly(rng):
    for _ in range(200):
        a = rng.random((32, 32)) < rng.uniform(0, 0.8)
        b = rng.random((32, 32)) < rng.uniform(0, 0.8)
        assert iou(a, b) == iou_oracle(a.tolist(), b.tolist())
        assert dice(a, b) == dice_oracle(a.tolist(), b.tolist())


def test_symmetry_and_dice_relation(rng):
    for _ in range(100):
        a = rng.random((16, 16)) < 0.4
        b = rng.random((16, 16)) < 0.4
        assert iou(a, b) == iou(b, a)
        assert dice(a, b) == dice(b, a)
        i, d = iou(a, b), dice(a, b)
        assert abs(d - 2 * i / (1 + i)) <= 1e-9


def test_gridified_self_consistency(rng):
    gt = rng.random((32, 32)) < 0.3
    for n in (1, 2, 4, 8, 16, 32):
        g = gridify_mask(gt, GridSpec(n, 32))
        assert dice(g, g) == 1.0


def test_evaluate_single_pair_identity(rng):
    m = rng.random((8, 8)) < 0.5
    m[3, 3] = True
    report = evaluate([("a", m, m)])
    assert report.miou == 1.0
    assert report.mean_dice == 1.0
    assert report.count == 1


def test_evaluate_mean_of_two_pairs():
    a = _mask([[1, 1], [0, 0]])
    b = _mask([[1, 0], [1, 0]])
    report = evaluate([("x", a, b), ("y", a, a)])
    assert report.miou == pytest.approx((1 / 3 + 1.0) / 2)


def test_evaluate_sorts_by_id(rng):
    m = rng.random((4, 4)) < 0.5
    report = evaluate([("b", m, m), ("a", m, m)])
    assert [s.id for s in report.per_image] == ["a", "b"]


def test_evaluate_empty_list_rejected():
    with pytest.raises(ValidationError):
        evaluate([])
