import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from wordfs.embedding_store import EmbeddingTable  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_table(matrix, prefix="w"):
    matrix = np.asarray(matrix, dtype=np.float64)
    return EmbeddingTable.from_arrays([f"{prefix}{i}" for i in range(matrix.shape[0])], matrix)


@pytest.fixture
def random_table(rng):
    return make_table(rng.standard_normal((40, 12)))


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
