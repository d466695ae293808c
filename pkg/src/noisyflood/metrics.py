"""Reachability (RCH), retransmission ratio (RET) and relative degradation S_V."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from .engine import FloodOutcome


@dataclass(frozen=True)
class MetricPoint:
    rch: float
    ret: float
    sample_count: int
    rch_stderr: float = 0.0
    ret_stderr: float = 0.0


def rch_of(outcome: FloodOutcome, n: int) -> float:
    """Fraction of the n nodes that received the request (source not counted)."""
    return len(outcome.reached) / n


def ret_of(outcome: FloodOutcome, n: int) -> float:
    """Transmissions per node, the source's initiating broadcast included."""
    return outcome.transmissions / n


def mean_and_stderr(values) -> Tuple[float, float]:
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise ValueError("cannot aggregate an empty sample")
    if x.size == 1:
        return float(x[0]), 0.0
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(x.size))


def aggregate(points: Iterable[Tuple[float, float]]) -> MetricPoint:
    """Sample means and standard errors of per-run ``(rch, ret)`` pairs, in the given order."""
    arr = np.asarray(list(points), dtype=float)
    if arr.size == 0:
        raise ValueError("cannot aggregate an empty list of runs")
    arr = arr.reshape(-1, 2)
    rch, rch_se = mean_and_stderr(arr[:, 0])
    ret, ret_se = mean_and_stderr(arr[:, 1])
    return MetricPoint(rch, ret, len(arr), rch_se, ret_se)


def relative_change(v_noiseless: float, v_noisy: float) -> float:
    """Percentage drop of a metric from its noiseless (p_c = 1) value."""
    if not v_noiseless > 0:
        raise ValueError(f"relative change is undefined for a noiseless value of {v_noiseless}")
    return (v_noiseless - v_noisy) / v_noiseless * 100.0
