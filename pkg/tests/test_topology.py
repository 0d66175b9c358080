import numpy as np
import pytest

from secact.errors import ConfigError
from secact.topology import build_graph, deploy_uniform, distance, place_sinks

from conftest import make_deployment


def test_uniform_positions_inside_region():
    dep = deploy_uniform(1, 100.0, seed=3)
    assert dep.m == 1
    assert 0.0 <= dep.sensor_positions[0, 0] <= 100.0
    assert 0.0 <= dep.sensor_positions[0, 1] <= 100.0


def test_uniform_deterministic_per_seed():
    a = deploy_uniform(1000, 100.0, seed=42)
    b = deploy_uniform(1000, 100.0, seed=42)
    assert np.array_equal(a.sensor_positions, b.sensor_positions)
    c = deploy_uniform(1000, 100.0, seed=43)
    assert not np.array_equal(a.sensor_positions, c.sensor_positions)


def test_uniform_mean_law_of_large_numbers():
    dep = deploy_uniform(10000, 100.0, seed=7)
    assert abs(float(dep.sensor_positions[:, 0].mean()) - 50.0) <= 1.5
    assert abs(float(dep.sensor_positions[:, 1].mean()) - 50.0) <= 1.5


@pytest.mark.parametrize("m,side", [(0, 100.0), (5, 0.0), (5, -1.0)])
def test_uniform_invalid_configuration(m, side):
    with pytest.raises(ConfigError):
        deploy_uniform(m, side, seed=0)


def test_center_sink_layout():
    dep = make_deployment([(10.0, 10.0)], side=100.0, sink_layout="center")
    assert np.allclose(dep.sink_positions, [[50.0, 50.0]])
    assert dep.sink_of[0] == 0


def test_nearest_sink_assignment():
    from secact.topology import Deployment

    dep = Deployment(sensor_positions=np.array([[0.0, 0.0], [100.0, 100.0]]), side_length=100.0)
    dep = place_sinks(dep, "grid:2")
    # grid:2 sinks at (25,25),(25,75),(75,25),(75,75)
    assert np.allclose(dep.sink_positions[dep.sink_of[0]], [25.0, 25.0])
    assert np.allclose(dep.sink_positions[dep.sink_of[1]], [75.0, 75.0])


def test_sink_tie_breaks_to_lowest_id():
    from secact.topology import Deployment

    # the region center is equidistant from all four grid:2 sinks
    dep = Deployment(sensor_positions=np.array([[50.0, 50.0]]), side_length=100.0)
    dep = place_sinks(dep, "grid:2")
    assert dep.sink_of[0] == 0


def test_grid_sink_coordinates():
    dep = place_sinks(deploy_uniform(3, 100.0, seed=1), "grid:2")
    # even spacing: side * (2t + 1) / (2k) for t in 0..k-1
    expected = {(25.0, 25.0), (25.0, 75.0), (75.0, 25.0), (75.0, 75.0)}
    got = {(float(x), float(y)) for x, y in dep.sink_positions}
    assert got == expected


def test_grid_zero_is_invalid():
    with pytest.raises(ConfigError):
        place_sinks(deploy_uniform(3, 100.0, seed=1), "grid:0")
    with pytest.raises(ConfigError):
        place_sinks(deploy_uniform(3, 100.0, seed=1), "hexagon")


def test_adjacency_within_range():
    dep = make_deployment([(0.0, 0.0), (1.0, 0.0)])
    g = build_graph(dep, 2.0)
    assert list(g.neighbors(0)) == [1]
    assert list(g.neighbors(1)) == [0]


def test_adjacency_strict_inequality():
    dep = make_deployment([(0.0, 0.0), (2.0, 0.0)])
    g = build_graph(dep, 2.0)
    assert g.degree(0) == 0 and g.degree(1) == 0


def test_two_hop_chain():
    dep = make_deployment([(0.0, 0.0), (1.5, 0.0), (3.0, 0.0)])
    g = build_graph(dep, 2.0)
    assert set(g.two_hop[0].tolist()) == {1, 2}
    assert set(g.two_hop[1].tolist()) == {0, 2}


def test_zero_range_is_edgeless():
    g = build_graph(deploy_uniform(20, 10.0, seed=5), 0.0)
    assert all(g.degree(i) == 0 for i in range(20))


def test_distance_examples():
    dep = make_deployment([(0.0, 0.0), (3.0, 4.0), (1.0, 1.0)])
    assert distance(dep, 0, 1) == pytest.approx(5.0, abs=0)
    assert distance(dep, 1, 1) == 0.0
    assert distance(dep, 0, 2) == pytest.approx(np.sqrt(2.0), abs=1e-9)
    assert distance(dep, 0, 2) == distance(dep, 2, 0)


def test_distance_unknown_id():
    dep = make_deployment([(0.0, 0.0)])
    with pytest.raises(IndexError):
        distance(dep, 0, 1)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_graph_properties_random(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(10, 200))
    side = float(rng.uniform(5.0, 40.0))
    r = float(rng.uniform(1.0, 8.0))
    dep = place_sinks(deploy_uniform(m, side, rng), "center")
    g = build_graph(dep, r)

    pos = dep.sensor_positions
    dx = pos[:, 0][:, None] - pos[:, 0][None, :]
    dy = pos[:, 1][:, None] - pos[:, 1][None, :]
    dist = np.sqrt(dx * dx + dy * dy)

    for i in range(m):
        nbrs = set(g.neighbors(i).tolist())
        # range membership, strict, no self-loop
        expected = {j for j in range(m) if j != i and dist[i, j] < r}
        assert nbrs == expected
        # symmetry
        for j in nbrs:
            assert i in set(g.neighbors(j).tolist())
        # ordered prefix property with id tie-break
        od = g.ordered_distances(i)
        oi = g.ordered_neighbors(i)
        for k in range(len(od) - 1):
            assert od[k] <= od[k + 1]
            if od[k] == od[k + 1]:
                assert oi[k] < oi[k + 1]
        # brute-force two-hop closure
        union = set()
        for j in nbrs:
            union |= {k for k in range(m) if k != j and dist[j, k] < r}
        union |= nbrs
        union.discard(i)
        assert set(g.two_hop[i].tolist()) == union


def test_graph_deterministic():
    a = build_graph(deploy_uniform(150, 20.0, seed=9), 2.5)
    b = build_graph(deploy_uniform(150, 20.0, seed=9), 2.5)
    assert np.array_equal(a.indptr, b.indptr)
    assert np.array_equal(a.indices, b.indices)
    assert np.array_equal(a.edge_dist, b.edge_dist)
