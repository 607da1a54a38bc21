from functools import lru_cache

import pytest

from ldpc_trapping.gadgets import load_fixture


@lru_cache(maxsize=None)
def _fixture(name):
    return load_fixture(name)


@pytest.fixture
def fixture():
    return _fixture
