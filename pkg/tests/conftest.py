import numpy as np
import pytest

from montrep.models.link import MontesinosSpec
from montrep.tangle import parse_montesinos

# links used throughout: (text, components, mu)
STANDARD_LINKS = [
    ("M(1/1,1/1,1/1)", 1, "3/1"),
    ("M(2/1,3/1)", 1, "5/6"),
    ("M(2/1,3/1,7/1)", 1, "41/42"),
    ("M(3/1,3/1,3/-2)", 2, "0/1"),
    ("M(2/1,2/1,2/-1)", 3, "1/2"),
]


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def trefoil() -> MontesinosSpec:
    return parse_montesinos("M(1/1,1/1,1/1)")


@pytest.fixture
def mu_zero_link() -> MontesinosSpec:
    return parse_montesinos("M(3/1,3/1,3/-2)")


@pytest.fixture(params=[text for text, _, _ in STANDARD_LINKS])
def standard_link(request) -> MontesinosSpec:
    return parse_montesinos(request.param)


def random_sl2(rng: np.random.Generator) -> np.ndarray:
    """A random well-conditioned matrix with determinant 1."""
    m = np.eye(2) + 0.5 * (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    return m / np.sqrt(np.linalg.det(m))


def unit_circle_point(rng: np.random.Generator) -> complex:
    return complex(np.exp(1j * rng.uniform(0.2, 2 * np.pi - 0.2)))
