import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

import pytest

from krh.laurent import Laurent
from krh.potential import Potential

qi = Laurent.quantum_integer


@pytest.fixture(scope="session")
def potentials_small():
    return [Potential(2), Potential(2, {1: -3}), Potential(3)]


def fixture_path(name):
    return os.path.join(os.path.dirname(__file__), "..", "fixtures", name)
