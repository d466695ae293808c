"""Domain types, geometric topology construction and closed-form helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np

Point = Tuple[float, float]


@dataclass
class NodeState:
    id: int
    pos: Point
    i_ret: bool = False
    i_rec: int = 0

    def reset(self):
        self.i_ret = False
        self.i_rec = 0


@dataclass(frozen=True)
class Area:
    width: float = 600.0
    height: float = 600.0

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ValueError(f"area must have positive extent, got {self.width}x{self.height}")

    @property
    def size(self) -> float:
        return self.width * self.height

    def contains(self, x: float, y: float) -> bool:
        return 0.0 <= x <= self.width and 0.0 <= y <= self.height


@dataclass(frozen=True)
class Topology:
    """Frozen snapshot of node positions and the within-range adjacency."""

    positions: Tuple[Point, ...]
    radio_range: float
    adjacency: Tuple[Tuple[int, ...], ...]
    # directed links (tail -> head) in adjacency order, built lazily by edges()
    _edges: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.positions)

    def edges(self) -> Tuple[np.ndarray, np.ndarray]:
        """Directed in-range links as ``(tails, heads)`` index arrays."""
        if "tails" not in self._edges:
            tails = [t for t, nbrs in enumerate(self.adjacency) for _ in nbrs]
            heads = [i for nbrs in self.adjacency for i in nbrs]
            self._edges["tails"] = np.asarray(tails, dtype=np.intp)
            self._edges["heads"] = np.asarray(heads, dtype=np.intp)
        return self._edges["tails"], self._edges["heads"]

    @property
    def n_links(self) -> int:
        return sum(len(a) for a in self.adjacency)

    def component(self, source: int) -> frozenset:
        seen = {source}
        stack = [source]
        while stack:
            t = stack.pop()
            for i in self.adjacency[t]:
                if i not in seen:
                    seen.add(i)
                    stack.append(i)
        return frozenset(seen)


def build_topology(positions: Union[Sequence[Point], np.ndarray], radio_range: float) -> Topology:
    """Link every pair of nodes whose Euclidean distance is at most ``radio_range``.

    The comparison is inclusive, so a node sitting exactly on the range
    boundary is a neighbour.
    """
    pts = np.asarray(positions, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("positions must be a sequence of (x, y) pairs")
    if len(pts) < 2:
        raise ValueError(f"a topology needs at least 2 nodes, got {len(pts)}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("node coordinates must be finite")
    if not (radio_range > 0 and math.isfinite(radio_range)):
        raise ValueError(f"radio range must be positive, got {radio_range}")

    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    within = dist <= radio_range
    np.fill_diagonal(within, False)
    adjacency = tuple(tuple(int(j) for j in np.flatnonzero(row)) for row in within)
    return Topology(tuple((float(x), float(y)) for x, y in pts), float(radio_range), adjacency)


def pause_time(radio_range: float, speed: float) -> float:
    """Interval between topology snapshots, 0.75 * R / u."""
    if speed <= 0:
        raise ValueError("pause time is undefined for a static network (speed 0); set n_intervals explicitly")
    return 0.75 * radio_range / speed


def n_intervals(sim_time: float, radio_range: float, speed: float) -> int:
    """Size of the mobility loop: floor(T_sim / tau)."""
    return int(math.floor(sim_time / pause_time(radio_range, speed)))


def density(n: int, radio_range: float, area: Area) -> float:
    """Expected number of nodes covered by one transmitter, pi * n * R^2 / A."""
    return math.pi * n * radio_range ** 2 / area.size


def _check_prob(name: str, p: float):
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {p}")


@dataclass(frozen=True)
class ScenarioConfig:
    n: int
    area: Area
    radio_range_m: float
    speed_mps: float
    p_r: float
    p_c_values: Tuple[float, ...]
    sim_time_s: float = 1800.0
    seed: int = 0
    sources_per_snapshot: Union[str, int] = "all"
    n_intervals_override: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "p_c_values", tuple(float(p) for p in self.p_c_values))
        if self.n < 2:
            raise ValueError(f"n must be at least 2, got {self.n}")
        if not self.radio_range_m > 0:
            raise ValueError(f"R must be positive, got {self.radio_range_m}")
        if self.speed_mps < 0:
            raise ValueError(f"u must be non-negative, got {self.speed_mps}")
        if not self.sim_time_s > 0:
            raise ValueError(f"t_sim must be positive, got {self.sim_time_s}")
        _check_prob("p_r", self.p_r)
        if not self.p_c_values:
            raise ValueError("p_c_list must not be empty")
        for p in self.p_c_values:
            _check_prob("p_c", p)
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        s = self.sources_per_snapshot
        if s != "all" and not (isinstance(s, int) and 0 < s):
            raise ValueError(f"sources must be 'all' or a positive integer, got {s!r}")
        if self.n_intervals_override is not None and self.n_intervals_override < 1:
            raise ValueError("n_intervals must be at least 1")
        if self.speed_mps == 0 and self.n_intervals_override is None:
            raise ValueError("u = 0 leaves the pause time undefined; n_intervals must be given")

    @property
    def pause_time(self) -> Optional[float]:
        if self.speed_mps == 0:
            return None
        return pause_time(self.radio_range_m, self.speed_mps)

    @property
    def n_intervals(self) -> int:
        if self.n_intervals_override is not None:
            return self.n_intervals_override
        return n_intervals(self.sim_time_s, self.radio_range_m, self.speed_mps)

    @property
    def n_sources(self) -> int:
        if self.sources_per_snapshot == "all":
            return self.n
        return min(self.sources_per_snapshot, self.n)

    @property
    def density(self) -> float:
        return density(self.n, self.radio_range_m, self.area)
