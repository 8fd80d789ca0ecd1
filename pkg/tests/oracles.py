"""Independent brute-force oracles.

Everything here is deliberately written with plain Python loops and no
vectorized shortcuts, so the implementations under test are checked
against a separately-derived path.
"""
import math


def gridify_oracle(mask, n):
    """Three-step cell conversion with nested pixel loops."""
    size = len(mask)
    assert size % n == 0
    cell = size // n
    out = [[False] * size for _ in range(size)]
    for ci in range(n):
        for cj in range(n):
            count = 0
            for r in range(ci * cell, (ci + 1) * cell):
                for c in range(cj * cell, (cj + 1) * cell):
                    if mask[r][c]:
                        count += 1
            if count > 0:
                for r in range(ci * cell, (ci + 1) * cell):
                    for c in range(cj * cell, (cj + 1) * cell):
                        out[r][c] = True
    return out


def cell_counts_oracle(mask, n):
    size = len(mask)
    cell = size // n
    counts = [[0] * n for _ in range(n)]
    for r in range(size):
        for c in range(size):
            if mask[r][c]:
                counts[r // cell][c // cell] += 1
    return counts


def iou_oracle(a, b):
    inter = union = 0
    for ra, rb in zip(a, b):
        for va, vb in zip(ra, rb):
            if va and vb:
                inter += 1
            if va or vb:
                union += 1
    if union == 0:
        return 1.0
    return inter / union


def dice_oracle(a, b):
    inter = total = 0
    for ra, rb in zip(a, b):
        for va, vb in zip(ra, rb):
            if va and vb:
                inter += 1
            total += int(va) + int(vb)
    if total == 0:
        return 1.0
    return 2.0 * inter / total


def mean_std_oracle(samples):
    """Per-pixel mean and population std over a list of 2-D maps."""
    k = len(samples)
    h = len(samples[0])
    w = len(samples[0][0])
    mean = [[0.0] * w for _ in range(h)]
    std = [[0.0] * w for _ in range(h)]
    for r in range(h):
        for c in range(w):
            total = 0.0
            for s in samples:
                total += s[r][c]
            m = total / k
            var = 0.0
            for s in samples:
                var += (s[r][c] - m) ** 2
            mean[r][c] = m
            std[r][c] = math.sqrt(var / k)
    return mean, std


def snap_oracle(pred, n, threshold):
    """Per-cell averaging followed by strict-greater thresholding."""
    size = len(pred)
    cell = size // n
    out = [[False] * size for _ in range(size)]
    for ci in range(n):
        for cj in range(n):
            total = 0.0
            for r in range(ci * cell, (ci + 1) * cell):
                for c in range(cj * cell, (cj + 1) * cell):
                    total += pred[r][c]
            if total / (cell * cell) > threshold:
                for r in range(ci * cell, (ci + 1) * cell):
                    for c in range(cj * cell, (cj + 1) * cell):
                        out[r][c] = True
    return out


def rotate90_indices(mask):
    """Exact 90-degree rotation of a square boolean grid by index permutation."""
    size = len(mask)
    out = [[False] * size for _ in range(size)]
    for r in range(size):
        for c in range(size):
            if mask[r][c]:
                out[size - 1 - c][r] = True
    return out
