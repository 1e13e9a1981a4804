"""
Shared fixtures: canonical small graphs and service instances
"""

import os

os.environ.setdefault("ENVIRONMENT", "testing")

from fractions import Fraction  # noqa: E402

import pytest  # noqa: E402

from app.models.graph_models import WeightedGraph  # noqa: E402
from app.models.spec_models import BlockGraphSpec, BlockSpec, ExplicitWeights, InducedWeights, RunConfig  # noqa: E402
from app.services.cycle_engine import CycleEngine  # noqa: E402
from app.services.equality_lab import EqualityLab  # noqa: E402
from app.services.generators import (  # noqa: E402
    gen_block_graph,
    gen_complete,
    gen_cycle,
    gen_induced_clique,
    gen_theta,
)
from app.services.graph_codec import serialize_graph  # noqa: E402
from app.services.inequality_verifier import InequalityVerifier  # noqa: E402


@pytest.fixture
def run_config():
    """Sequential exact configuration with default caps"""
    return RunConfig()


@pytest.fixture
def engine(run_config):
    return CycleEngine(run_config)


@pytest.fixture
def verifier(engine, run_config):
    return InequalityVerifier(engine=engine, config=run_config)


@pytest.fixture
def lab(verifier, run_config):
    return EqualityLab(verifier=verifier, config=run_config)


@pytest.fixture
def uniform_triangle():
    return gen_complete(3)


@pytest.fixture
def uniform_k4():
    return gen_complete(4)


@pytest.fixture
def induced_k4():
    """K_4 induced from a = (1, 2, 3, 4)"""
    return gen_induced_clique(4, [1, 2, 3, 4])


@pytest.fixture
def heavy_c4():
    """C_4 with weights (1, 1, 1, 10); the heavy edge is 0-3"""
    return gen_cycle(4, [1, 1, 1, 10])


@pytest.fixture
def uniform_c5():
    return gen_cycle(5)


@pytest.fixture
def single_bridge():
    return WeightedGraph(n=2, edges=({"u": 0, "v": 1, "weight": Fraction(3, 2)},))


@pytest.fixture
def two_triangles():
    """Two uniform triangles sharing vertex 0"""
    spec = BlockGraphSpec(blocks=(BlockSpec(size=3), BlockSpec(size=3)), attachments=(0,))
    return gen_block_graph(spec)


@pytest.fixture
def k4_bridge_triangle():
    """Induced K_4 (a = 1,2,3,4), a bridge 3-4, and a triangle 4-5-6 with weights 1, 2, 3"""
    spec = BlockGraphSpec(
        blocks=(
            BlockSpec(size=4, weighting=InducedWeights(a=(1, 2, 3, 4))),
            BlockSpec(size=2),
            BlockSpec(size=3, weighting=ExplicitWeights(weights=(1, 2, 3))),
        ),
        attachments=(3, 4),
    )
    return gen_block_graph(spec)


@pytest.fixture
def theta_222():
    return gen_theta([2, 2, 2])


@pytest.fixture
def write_graph(tmp_path):
    """Write a graph to an edge-list file and return its path"""

    def _write(graph, name="graph.txt"):
        path = tmp_path / name
        path.write_text(serialize_graph(graph), encoding="utf-8")
        return path

    return _write
