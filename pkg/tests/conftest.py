"""Fixtures compartidas: contextos pequeños y tablas del oráculo memorizadas"""

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.catalog import Basis  # noqa: E402
from src.oracle import cached_table  # noqa: E402
from src.series import VarSet  # noqa: E402


@pytest.fixture
def order():
    return 6


@pytest.fixture
def vs():
    return VarSet.standard(6)


@pytest.fixture
def basis(vs):
    return Basis.of(vs, 6)


@pytest.fixture(scope="session")
def oracle_12():
    return cached_table(12)


@pytest.fixture(scope="session")
def oracle_16():
    return cached_table(16)
