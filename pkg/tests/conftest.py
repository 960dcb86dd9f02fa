"""
Shared pytest fixtures for the invariant_info test suite
"""

import json
import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path so the package imports without installation
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from invariant_info.measurement import mub_set  # noqa: E402
from invariant_info.state import maximally_mixed, pure_state  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long Monte Carlo runs (deselect with -m 'not slow')")


def write_state(path: Path, matrix) -> Path:
    """Write ``matrix`` in the {dim, re, im} schema"""
    m = np.asarray(matrix, dtype=complex)
    document = {'dim': int(m.shape[0]), 're': np.real(m).tolist(), 'im': np.imag(m).tolist()}
    path.write_text(json.dumps(document), encoding='utf-8')
    return path


@pytest.fixture
def z_plus():
    return pure_state([1, 0])


@pytest.fixture
def x_plus():
    return pure_state([1, 1])


@pytest.fixture
def mixed_qubit():
    return maximally_mixed(2)


@pytest.fixture
def qubit_mubs():
    return mub_set(2)


@pytest.fixture
def state_file(tmp_path):
    """Factory: state_file('name', matrix) -> Path of a JSON state document"""
    def make(name, matrix):
        return write_state(tmp_path / f"{name}.json", matrix)
    return make
