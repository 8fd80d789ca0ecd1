import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(20240814)


def random_mask(rng, size, p=0.3):
    return rng.random((size, size)) < p


def write_png_bytes(path, data: bytes):
    Path(path).write_bytes(data)
