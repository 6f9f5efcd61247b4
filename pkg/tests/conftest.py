import numpy as np
import pytest
from scipy.stats import unitary_group

from channel_quantumness.matrix_core import DensityMatrix, from_bloch
from channel_quantumness.models import OptimizerConfig

SEED = 20240611
RANDOM_PAIRS = 1000


def random_bloch_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform samples from the closed unit ball; every fourth one is pushed to the sphere."""
    directions = rng.normal(size=(n, 3))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = rng.random(n) ** (1 / 3)
    radii[::4] = 1.0
    return directions * radii[:, None]


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    monkeypatch.delenv("QCHAN_DEFAULT_GRID", raising=False)
    monkeypatch.delenv("QCHAN_LOG_LEVEL", raising=False)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(SEED)


@pytest.fixture
def random_vectors(rng):
    def make(n: int) -> np.ndarray:
        return random_bloch_vectors(rng, n)

    return make


@pytest.fixture
def random_states(random_vectors):
    def make(n: int) -> list[DensityMatrix]:
        return [from_bloch(v) for v in random_vectors(n)]

    return make


@pytest.fixture
def random_pairs(random_states) -> list[tuple[DensityMatrix, DensityMatrix]]:
    states = random_states(2 * RANDOM_PAIRS)
    return list(zip(states[:RANDOM_PAIRS], states[RANDOM_PAIRS:]))


@pytest.fixture
def random_unitaries():
    def make(n: int) -> np.ndarray:
        return unitary_group.rvs(2, size=n, random_state=SEED)

    return make


@pytest.fixture
def fast_config() -> OptimizerConfig:
    return OptimizerConfig(grid_points_per_angle=12)
