"""Exact expected RCH/RET on small topologies by enumerating every draw outcome."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from . import engine
from .engine import FloodParams, flood_batch, propagate, reached_counts
from .model import Topology, build_topology
from .seeding import MONTE_CARLO, derive_substream

MAX_NODES = 8
MAX_LINKS = 12


@dataclass(frozen=True)
class OracleResult:
    expected_rch: float
    expected_ret: float
    enumerated_outcomes: int
    total_probability: float


def _check_size(topology: Topology):
    if topology.n > MAX_NODES or topology.n_links > MAX_LINKS:
        raise ValueError(
            f"topology too large for exact enumeration: {topology.n} nodes, {topology.n_links} directed links "
            f"(limits {MAX_NODES} nodes, {MAX_LINKS} links)"
        )


@lru_cache(maxsize=32)
def _enumerate(topology: Topology, source: int):
    """All 2^(links + n - 1) success/fail assignments and the flood each one produces."""
    _check_size(topology)
    d, n = topology.n_links, topology.n
    others = [i for i in range(n) if i != source]
    bits = d + len(others)
    codes = np.arange(2 ** bits, dtype=np.int64)
    table = ((codes[:, None] >> np.arange(bits)) & 1).astype(bool)
    delivered = table[:, :d]
    relays = np.ones((len(codes), n), dtype=bool)
    relays[:, others] = table[:, d:]
    receptions, transmitted = propagate(topology, source, delivered, relays)
    reached, sent = reached_counts(receptions, transmitted, source)
    return delivered, table[:, d:], reached, sent


def exact_metrics(topology: Topology, source: int, params: FloodParams) -> OracleResult:
    delivered, relay_bits, reached, sent = _enumerate(topology, source)
    w = np.prod(np.where(delivered, params.p_c, 1.0 - params.p_c), axis=1)
    w = w * np.prod(np.where(relay_bits, params.p_r, 1.0 - params.p_r), axis=1)
    n = topology.n
    return OracleResult(
        expected_rch=math.fsum(w * reached) / n,
        expected_ret=math.fsum(w * sent) / n,
        enumerated_outcomes=len(w),
        total_probability=math.fsum(w),
    )


# name -> (positions, radio range, source)
FIXTURES: Dict[str, Tuple[List[Tuple[float, float]], float, int]] = {
    "chain-3": ([(0, 0), (100, 0), (200, 0)], 100.0, 0),
    # node 1 is the hub; flooding from a leaf must go through it
    "star-4": ([(0, 100), (100, 100), (200, 100), (100, 200)], 100.0, 0),
    "cycle-4": ([(0, 0), (100, 0), (100, 100), (0, 100)], 100.0, 0),
    "two-cluster-6": ([(0, 0), (60, 0), (30, 50), (400, 0), (460, 0), (430, 50)], 70.0, 0),
}


def fixture(name: str) -> Tuple[Topology, int]:
    positions, radio_range, source = FIXTURES[name]
    return build_topology(positions, radio_range), source


GRID = (0.25, 0.5, 0.75, 1.0)


@dataclass(frozen=True)
class CheckRow:
    fixture: str
    p_r: float
    p_c: float
    metric: str
    oracle: float
    monte_carlo: float
    stderr: float

    @property
    def ok(self) -> bool:
        return abs(self.monte_carlo - self.oracle) <= 3.0 * self.stderr


class _ConstantStream:
    """Stand-in generator returning one fixed value for every draw."""

    def __init__(self, value: float):
        self.value = value

    def random(self, size=None):
        if size is None:
            return self.value
        return np.full(size, self.value)


def boundary_probe(p: float = 0.5) -> List[str]:
    """Feed draws equal to the threshold; the inclusive test must accept all of them.

    Returns a list of failure messages (empty when the engine is correct).
    Statistical checks cannot see this edge since it has probability zero
    under continuous draws.
    """
    failures = []
    for name in FIXTURES:
        topo, src = fixture(name)
        expect = len(topo.component(src)) - 1
        params = FloodParams(p_r=p, p_c=p)
        got = len(engine.flood(topo, src, params, _ConstantStream(p)).reached)
        if got != expect:
            failures.append(f"{name}: queue flood with draws == {p} reached {got}, expected {expect}")
        got_batch, _ = flood_batch(topo, src, params, _ConstantStream(p), runs=1)
        if int(got_batch[0]) != expect:
            failures.append(f"{name}: table flood with draws == {p} reached {int(got_batch[0])}, expected {expect}")
    return failures


def cross_check(
    runs: int = 100_000,
    seed: int = 2010,
    fixtures: Optional[Iterable[str]] = None,
    grid: Iterable[float] = GRID,
) -> List[CheckRow]:
    """Monte Carlo mean of ``runs`` floods vs the exact value, per fixture and (p_r, p_c)."""
    rows = []
    grid = tuple(grid)
    names = list(fixtures) if fixtures is not None else list(FIXTURES)
    for f_idx, name in enumerate(names):
        topo, src = fixture(name)
        n = topo.n
        for i_r, p_r in enumerate(grid):
            for i_c, p_c in enumerate(grid):
                params = FloodParams(p_r=p_r, p_c=p_c)
                exact = exact_metrics(topo, src, params)
                rng = derive_substream(seed, (MONTE_CARLO, f_idx, i_r, i_c))
                reached, sent = flood_batch(topo, src, params, rng, runs)
                for metric, counts, target in (("rch", reached, exact.expected_rch), ("ret", sent, exact.expected_ret)):
                    mean = counts.sum() / runs / n
                    se = counts.std(ddof=1) / math.sqrt(runs) / n
                    rows.append(CheckRow(name, p_r, p_c, metric, target, float(mean), float(se)))
    return rows
