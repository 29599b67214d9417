import numpy as np
import pytest

from entloc import DimSpec


@pytest.fixture
def abc_qubits():
    return DimSpec.make(("A", 2, "A"), ("B", 2, "B"), ("C", 2, "Z"))


@pytest.fixture
def ab_pair():
    return DimSpec.make(("A", 2, "A"), ("B", 2, "B"))


def rng_for(seed):
    return np.random.default_rng(seed)
