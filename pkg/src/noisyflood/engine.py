"""Probabilistic route-request flooding over a lossy channel.

Two propagation routes live here:

* :func:`flood` walks the work queue one reception at a time and draws its
  random numbers lazily, exactly where the per-node algorithm asks for them.
* :func:`propagate` replays a flood from precomputed draw outcomes
  (delivered links, relaying nodes), batched over many independent rows.
  The exact enumeration oracle, the coupled p_c sweep and the bulk Monte
  Carlo paths all go through it.

Both give the same reached set for the same draw outcomes because
the reached set does not depend on the order in which transmitters are
processed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order

from .model import NodeState, Topology, _check_prob


def accepts(xi, p):
    """Bernoulli success test: a uniform draw ``xi`` in [0, 1) passes when ``xi <= p``.

    ``p == 0`` always fails, so a dead channel delivers nothing even when
    the generator returns exactly 0.0. Works elementwise on arrays.
    """
    return np.logical_and(np.less_equal(xi, p), np.greater(p, 0.0))


@dataclass(frozen=True)
class FloodParams:
    p_r: float = 1.0
    p_c: float = 1.0

    def __post_init__(self):
        _check_prob("p_r", self.p_r)
        _check_prob("p_c", self.p_c)


@dataclass(frozen=True)
class FloodOutcome:
    source: int
    reached: frozenset  # nodes with i_rec >= 1, source excluded
    retransmitters: frozenset  # nodes with i_ret set, source included
    receptions: Tuple[int, ...]  # i_rec per node

    @property
    def transmissions(self) -> int:
        return len(self.retransmitters)


def _check_source(topology: Topology, source):
    src = np.asarray(source)
    if np.any(src < 0) or np.any(src >= topology.n):
        raise ValueError(f"source {source} is not a node of a {topology.n}-node topology")


def flood(topology: Topology, source: int, params: FloodParams, rng) -> FloodOutcome:
    """Run one flood from ``source``, drawing from ``rng.random()`` as receptions happen.

    Each (transmitter, receiver) delivery gets its own draw. A node draws its
    retransmission test once, at its first successful reception; later
    copies only bump its reception count.
    """
    _check_source(topology, source)
    nodes = [NodeState(i, pos) for i, pos in enumerate(topology.positions)]
    nodes[source].i_ret = True
    queue = deque([source])
    while queue:
        t = queue.popleft()
        for i in topology.adjacency[t]:
            if not accepts(rng.random(), params.p_c):
                continue
            node = nodes[i]
            node.i_rec += 1
            if not node.i_ret and node.i_rec == 1 and accepts(rng.random(), params.p_r):
                node.i_ret = True
                queue.append(i)
    return FloodOutcome(
        source=source,
        reached=frozenset(s.id for s in nodes if s.i_rec >= 1 and s.id != source),
        retransmitters=frozenset(s.id for s in nodes if s.i_ret),
        receptions=tuple(s.i_rec for s in nodes),
    )


def propagate(topology: Topology, sources, delivered: np.ndarray, relays: np.ndarray):
    """Replay floods from fixed draw outcomes.

    ``delivered`` is ``(rows, links)`` boolean over ``topology.edges()``:
    whether the reception test on that directed link succeeds.
    ``relays`` is ``(rows, n)`` boolean: whether a node passes its
    retransmission test when it first receives. ``sources`` is one node id
    or one per row.

    Returns ``(receptions, transmitted)``: per-row, per-node reception
    counts (int) and the retransmitter mask (source included).
    """
    tails, heads = topology.edges()
    n = topology.n
    delivered = np.asarray(delivered, dtype=bool)
    rows = delivered.shape[0]
    relays = np.broadcast_to(np.asarray(relays, dtype=bool), (rows, n))
    sources = np.broadcast_to(np.asarray(sources, dtype=np.intp), (rows,))
    _check_source(topology, sources)
    row_ids = np.arange(rows)

    can_send = relays.copy()
    can_send[row_ids, sources] = True

    # Drop links leaving nodes that would never retransmit; what remains
    # reachable from the source is exactly source + reached nodes.
    r, e = np.nonzero(delivered & can_send[:, tails])
    offset = r * n
    root = rows * n
    u = np.concatenate([offset + tails[e], np.full(rows, root)])
    v = np.concatenate([offset + heads[e], row_ids * n + sources])
    graph = csr_matrix((np.ones(len(u), dtype=np.int8), (u, v)), shape=(root + 1, root + 1))
    order = breadth_first_order(graph, root, directed=True, return_predecessors=False)
    visited = np.zeros(root + 1, dtype=bool)
    visited[order] = True
    visited = visited[:root].reshape(rows, n)

    transmitted = visited & can_send
    r, e = np.nonzero(delivered & transmitted[:, tails])
    receptions = np.bincount(r * n + heads[e], minlength=rows * n).reshape(rows, n)
    return receptions, transmitted


def _outcome(source: int, receptions: np.ndarray, transmitted: np.ndarray) -> FloodOutcome:
    reached = np.flatnonzero(receptions >= 1)
    return FloodOutcome(
        source=int(source),
        reached=frozenset(int(i) for i in reached if i != source),
        retransmitters=frozenset(int(i) for i in np.flatnonzero(transmitted)),
        receptions=tuple(int(c) for c in receptions),
    )


def reached_counts(receptions: np.ndarray, transmitted: np.ndarray, sources) -> Tuple[np.ndarray, np.ndarray]:
    """Per-row ``|reached|`` and transmission count from :func:`propagate` output."""
    rows = receptions.shape[0]
    sources = np.broadcast_to(np.asarray(sources, dtype=np.intp), (rows,))
    hit = receptions >= 1
    hit[np.arange(rows), sources] = False
    return hit.sum(axis=1), transmitted.sum(axis=1)


def coupled_draws(topology: Topology, rng) -> Tuple[np.ndarray, np.ndarray]:
    """One uniform per directed link and one per node, shared across a p_c sweep."""
    xi_link = rng.random(topology.n_links)
    xi_node = rng.random(topology.n)
    return xi_link, xi_node


def _check_ascending(p_c_list: Sequence[float]):
    if len(p_c_list) == 0:
        raise ValueError("p_c list is empty")
    for p in p_c_list:
        _check_prob("p_c", p)
    if any(b < a for a, b in zip(p_c_list, p_c_list[1:])):
        raise ValueError(f"p_c list must be sorted ascending, got {list(p_c_list)}")


def _coupled_tables(xi_link, xi_node, p_r, p_c):
    p_c = np.asarray(p_c, dtype=float)
    delivered = accepts(xi_link[None, :], p_c[:, None])
    relays = np.broadcast_to(accepts(xi_node, p_r), (len(p_c), len(xi_node)))
    return delivered, relays


def flood_coupled(topology: Topology, source: int, p_r: float, p_c_list: Sequence[float], rng) -> List[FloodOutcome]:
    """Flood once per p_c value, reusing the same uniforms for every value.

    With shared draws a link that delivers at some p_c also delivers at every
    larger one, so the reached sets are nested along the list.
    """
    _check_source(topology, source)
    _check_prob("p_r", p_r)
    _check_ascending(p_c_list)
    xi_link, xi_node = coupled_draws(topology, rng)
    delivered, relays = _coupled_tables(xi_link, xi_node, p_r, p_c_list)
    receptions, transmitted = propagate(topology, source, delivered, relays)
    return [_outcome(source, receptions[k], transmitted[k]) for k in range(len(p_c_list))]


def coupled_counts(topology: Topology, sources: Sequence[int], p_r: float, p_c_list: Sequence[float], rngs) -> Tuple[np.ndarray, np.ndarray]:
    """Bulk form of :func:`flood_coupled` returning only the counts.

    ``rngs[j]`` drives source ``sources[j]`` and consumes the same draws as
    ``flood_coupled`` would. Returns ``(reached, transmissions)`` arrays of
    shape ``(len(sources), len(p_c_list))``.
    """
    _check_prob("p_r", p_r)
    _check_ascending(p_c_list)
    k = len(p_c_list)
    tables = [_coupled_tables(*coupled_draws(topology, rng), p_r, p_c_list) for rng in rngs]
    delivered = np.concatenate([d for d, _ in tables])
    relays = np.concatenate([r for _, r in tables])
    row_sources = np.repeat(np.asarray(sources, dtype=np.intp), k)
    receptions, transmitted = propagate(topology, row_sources, delivered, relays)
    reached, sent = reached_counts(receptions, transmitted, row_sources)
    return reached.reshape(-1, k), sent.reshape(-1, k)


def flood_batch(topology: Topology, source: int, params: FloodParams, rng, runs: int, chunk: int = 50_000):
    """``runs`` independent floods from one source; returns ``(reached, transmissions)`` arrays."""
    _check_source(topology, source)
    reached, sent = [], []
    left = runs
    while left > 0:
        m = min(chunk, left)
        delivered = accepts(rng.random((m, topology.n_links)), params.p_c)
        relays = accepts(rng.random((m, topology.n)), params.p_r)
        receptions, transmitted = propagate(topology, source, delivered, relays)
        r, s = reached_counts(receptions, transmitted, source)
        reached.append(r)
        sent.append(s)
        left -= m
    return np.concatenate(reached), np.concatenate(sent)
