"""Random placement and random-direction motion with boundary reflection."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Area

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class MobilityState:
    positions: np.ndarray  # (n, 2) metres
    headings: np.ndarray  # (n,) radians in [0, 2*pi)

    @property
    def n(self) -> int:
        return len(self.positions)


def init_positions(rng: np.random.Generator, n: int, area: Area) -> MobilityState:
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    xy = rng.random((n, 2)) * (area.width, area.height)
    headings = rng.random(n) * TWO_PI
    return MobilityState(xy, headings)


def reflect(coord: np.ndarray, length: float) -> np.ndarray:
    """Fold an unbounded coordinate back into [0, length] by mirror reflection.

    Repeated wall hits are handled, and the distance travelled along the
    folded path equals the distance along the straight one.
    """
    folded = np.mod(coord, 2.0 * length)
    return np.where(folded > length, 2.0 * length - folded, folded)


def move(state: MobilityState, headings: np.ndarray, distance: float, area: Area) -> MobilityState:
    """Travel ``distance`` along the given headings, reflecting off the walls."""
    if distance == 0:
        return MobilityState(state.positions.copy(), np.asarray(headings, dtype=float))
    headings = np.asarray(headings, dtype=float)
    x = state.positions[:, 0] + distance * np.cos(headings)
    y = state.positions[:, 1] + distance * np.sin(headings)
    pos = np.column_stack([reflect(x, area.width), reflect(y, area.height)])
    return MobilityState(pos, headings)


def step(state: MobilityState, rng: np.random.Generator, speed: float, dt: float, area: Area) -> MobilityState:
    """Advance every node for ``dt`` seconds at ``speed`` along a freshly drawn heading."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    headings = rng.random(state.n) * TWO_PI
    return move(state, headings, speed * dt, area)
