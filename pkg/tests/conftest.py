from pathlib import Path

import numpy as np
import pytest

CORPUS = Path(__file__).resolve().parent.parent / "circuits"


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def corpus():
    return sorted(CORPUS.glob("*.ptc"))
