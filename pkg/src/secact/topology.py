"""Sensor deployments, sink placement, and the range-limited communication graph.

Sensors live on a square region, each reporting to its nearest sink.
Neighborship is strict (`d < comm_range`); neighbor lists come in two
orders, by id and by distance, and two-hop neighborhoods are the union
of the neighbors' neighborhoods minus the sensor itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np
from scipy.spatial import cKDTree

from .errors import ConfigError


class Position(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Deployment:
    """Sensor positions plus sink assignment on a `side_length` square.

    `sink_of` maps each sensor to its nearest sink (ties to the lowest sink
    id); it is None until `place_sinks` has run.
    """

    sensor_positions: np.ndarray  # (m, 2) float64
    side_length: float
    sink_positions: np.ndarray | None = None  # (s, 2) float64
    sink_of: np.ndarray | None = None  # (m,) int64

    @property
    def m(self) -> int:
        return int(self.sensor_positions.shape[0])

    def position(self, i: int) -> Position:
        self._check_id(i)
        return Position(float(self.sensor_positions[i, 0]), float(self.sensor_positions[i, 1]))

    def _check_id(self, i: int) -> None:
        if not 0 <= i < self.m:
            raise IndexError(f"unknown sensor id {i} (m={self.m})")

    def sink_distance(self, i: int) -> float:
        """Euclidean distance from sensor i to its assigned sink."""
        self._check_id(i)
        if self.sink_of is None or self.sink_positions is None:
            raise ConfigError("sinks not placed; call place_sinks first")
        s = self.sink_positions[self.sink_of[i]]
        dx = self.sensor_positions[i, 0] - s[0]
        dy = self.sensor_positions[i, 1] - s[1]
        return float(np.sqrt(dx * dx + dy * dy))


def deploy_uniform(m: int, side_length: float, seed) -> Deployment:
    """Deploy m sensors i.i.d. uniform on [0, side_length]^2.

    The same seed always yields the same deployment bit for bit.
    """
    if m < 1:
        raise ConfigError(f"m must be >= 1, got {m}")
    if side_length <= 0:
        raise ConfigError(f"side_length must be > 0, got {side_length}")
    rng = np.random.default_rng(seed)
    positions = rng.uniform(0.0, side_length, size=(int(m), 2))
    return Deployment(sensor_positions=positions, side_length=float(side_length))


def place_sinks(deployment: Deployment, layout: str = "center") -> Deployment:
    """Place sinks per the layout string and assign each sensor its nearest one.

    Layouts: "center" (one sink at the region center) or "grid:k" (k*k sinks
    evenly spaced, coordinates side*(2t+1)/(2k) for t in 0..k-1).
    """
    side = deployment.side_length
    if layout == "center":
        sinks = np.array([[side / 2.0, side / 2.0]])
    elif layout.startswith("grid:"):
        try:
            k = int(layout.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad sink layout {layout!r}") from None
        if k < 1:
            raise ConfigError(f"grid sink layout needs k >= 1, got {k}")
        coords = side * (2.0 * np.arange(k) + 1.0) / (2.0 * k)
        sinks = np.array([[sx, sy] for sx in coords for sy in coords])
    else:
        raise ConfigError(f"unknown sink layout {layout!r}")

    dx = deployment.sensor_positions[:, 0][:, None] - sinks[:, 0][None, :]
    dy = deployment.sensor_positions[:, 1][:, None] - sinks[:, 1][None, :]
    sink_of = np.argmin(np.sqrt(dx * dx + dy * dy), axis=1).astype(np.int64)
    return Deployment(
        sensor_positions=deployment.sensor_positions,
        side_length=side,
        sink_positions=sinks,
        sink_of=sink_of,
    )


def distance(deployment: Deployment, i: int, j: int) -> float:
    """Euclidean distance between sensors i and j."""
    deployment._check_id(i)
    deployment._check_id(j)
    dx = deployment.sensor_positions[i, 0] - deployment.sensor_positions[j, 0]
    dy = deployment.sensor_positions[i, 1] - deployment.sensor_positions[j, 1]
    return float(np.sqrt(dx * dx + dy * dy))


@dataclass(frozen=True)
class NetworkGraph:
    """Range-r communication graph in CSR form.

    `indices[indptr[i]:indptr[i+1]]` lists the neighbors of sensor i sorted
    ascending by distance (ties by lower id); `edge_dist` is aligned with it.
    """

    deployment: Deployment
    comm_range: float
    indptr: np.ndarray  # (m+1,) int64
    indices: np.ndarray  # (edges,) int64
    edge_dist: np.ndarray  # (edges,) float64

    @property
    def m(self) -> int:
        return self.deployment.m

    def degree(self, i: int) -> int:
        return int(self.indptr[i + 1] - self.indptr[i])

    def ordered_neighbors(self, i: int) -> np.ndarray:
        """Neighbor ids sorted ascending by distance (ties by lower id)."""
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def ordered_distances(self, i: int) -> np.ndarray:
        return self.edge_dist[self.indptr[i] : self.indptr[i + 1]]

    def neighbors(self, i: int) -> np.ndarray:
        """Neighbor ids sorted ascending by id."""
        return np.sort(self.ordered_neighbors(i))

    @cached_property
    def adjacency(self) -> list[np.ndarray]:
        return [self.neighbors(i) for i in range(self.m)]

    @cached_property
    def two_hop(self) -> list[np.ndarray]:
        """N'_i: neighbors plus neighbors of neighbors, excluding i."""
        out = []
        for i in range(self.m):
            acc = set(self.ordered_neighbors(i).tolist())
            for j in self.ordered_neighbors(i):
                acc.update(self.ordered_neighbors(int(j)).tolist())
            acc.discard(i)
            out.append(np.array(sorted(acc), dtype=np.int64))
        return out


def build_graph(deployment: Deployment, r: float) -> NetworkGraph:
    """Build the communication graph with strict range test d < r."""
    if r < 0:
        raise ConfigError(f"comm range must be >= 0, got {r}")
    m = deployment.m
    pos = deployment.sensor_positions
    if r == 0 or m == 1:
        pairs = np.empty((0, 2), dtype=np.int64)
    else:
        tree = cKDTree(pos)
        pairs = tree.query_pairs(r, output_type="ndarray").astype(np.int64)
    if pairs.shape[0]:
        dx = pos[pairs[:, 0], 0] - pos[pairs[:, 1], 0]
        dy = pos[pairs[:, 0], 1] - pos[pairs[:, 1], 1]
        d = np.sqrt(dx * dx + dy * dy)
        keep = d < r  # query_pairs is inclusive; the model is strict
        pairs, d = pairs[keep], d[keep]
    else:
        d = np.empty(0)

    src = np.concatenate([pairs[:, 0], pairs[:, 1]])
    dst = np.concatenate([pairs[:, 1], pairs[:, 0]])
    dd = np.concatenate([d, d])
    order = np.lexsort((dst, dd, src))
    src, dst, dd = src[order], dst[order], dd[order]
    indptr = np.zeros(m + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    indptr = np.cumsum(indptr).astype(np.int64)
    return NetworkGraph(
        deployment=deployment,
        comm_range=float(r),
        indptr=indptr,
        indices=dst.astype(np.int64),
        edge_dist=dd.astype(np.float64),
    )
