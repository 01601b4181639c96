import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def max_abs_diff(A, B) -> float:
    return float(np.max(np.abs(np.asarray(A) - np.asarray(B))))
