import numpy as np
import pytest

from secact.channel import BeliefModel, ChannelParams
from secact.game import EnergyModel, build_context
from secact.gaussfield import CorrelationParams
from secact.topology import Deployment, build_graph, place_sinks


def make_deployment(points, side=100.0, sink_layout="center"):
    """Deployment at explicit coordinates, sinks placed."""
    dep = Deployment(sensor_positions=np.asarray(points, dtype=np.float64), side_length=side)
    return place_sinks(dep, sink_layout)


def make_context(points, r=2.0, p_e=0.1, side=100.0, lam=1.0, sink_layout="center", **kwargs):
    """Game context over explicit sensor coordinates."""
    dep = make_deployment(points, side=side, sink_layout=sink_layout)
    graph = build_graph(dep, r)
    m = dep.m
    return build_context(
        graph,
        CorrelationParams(lam=lam),
        ChannelParams(),
        BeliefModel.uniform(m, p_e),
        EnergyModel(),
        **kwargs,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)
