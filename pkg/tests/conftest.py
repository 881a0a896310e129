import numpy as np
import pytest

from hardyic.box import mix
from hardyic.polytope import enumerate_vertices
from hardyic.quantum import (
    OptimizerConfig,
    optimize_cabello_quantum,
    optimize_hardy_quantum,
)

VERTICES = enumerate_vertices()


def random_ns_box(rng, concentration=0.5):
    """Random point of the no-signalling polytope as a Dirichlet mixture of its vertices."""
    w = rng.dirichlet(np.full(len(VERTICES), concentration))
    return mix(w, [B for _, B in VERTICES])


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


@pytest.fixture(scope="session")
def hardy_optimum():
    return optimize_hardy_quantum(OptimizerConfig())


@pytest.fixture(scope="session")
def cabello_optimum():
    return optimize_cabello_quantum(OptimizerConfig())
