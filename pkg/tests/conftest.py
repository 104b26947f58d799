import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from jsrcert.families import (  # noqa: E402
    ALPHA_STAR,
    hare_family,
    morris_family,
    random_family,
    scaled_rotation_family,
    triangular_family,
)

TRIANGULAR_DIAGONALS = [(0.8, 0.5), (0.6, 0.7)]


def corpus():
    """The named test corpus: label -> MatrixSet."""
    sets = {
        "hare(0.5)": hare_family(0.5),
        "hare(alpha*)": hare_family(ALPHA_STAR),
        "morris(0.5)": morris_family(0.5),
        "scaled_rotation(0.9,0.8)": scaled_rotation_family([0.9, 0.8], [1.0, math.sqrt(2)]),
        "triangular": triangular_family(TRIANGULAR_DIAGONALS, strict_upper_seed=3),
    }
    for seed in range(10):
        sets[f"random({seed})"] = random_family(seed, d=2 + seed % 2, k=2)
    return sets


@pytest.fixture(scope="session")
def corpus_sets():
    return corpus()


@pytest.fixture
def morris():
    return morris_family(0.5)


@pytest.fixture
def rotations():
    return scaled_rotation_family([1.0, 1.0], [1.0, math.sqrt(2)])


@pytest.fixture
def scaled_rotations():
    return scaled_rotation_family([0.9, 0.8], [1.0, math.sqrt(2)])


@pytest.fixture
def hare_star():
    return hare_family(ALPHA_STAR)


def random_matrix(rng: np.random.Generator, d: int) -> np.ndarray:
    return rng.normal(size=(d, d))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        terminalreporter.write_line(results[num])
