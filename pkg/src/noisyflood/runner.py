"""Scenario sweeps: mobility loop, per-snapshot floods, aggregation and S_V tables."""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, TextIO, Tuple

import numpy as np

from .engine import coupled_counts
from .metrics import mean_and_stderr, relative_change
from .mobility import init_positions, step
from .model import ScenarioConfig, build_topology
from .seeding import FLOOD, MOBILITY, PLACEMENT, SOURCE_SAMPLE, derive_substream

VARIABLES = {"p_r": "p_r", "n": "n", "u": "speed_mps", "R": "radio_range_m"}
DEFAULT_PC_GRID = (0.5, 0.6, 0.7, 0.8, 0.9, 1.0)

CSV_HEADER = ["varied_name", "varied_value", "p_c", "rch", "rch_stderr", "ret", "ret_stderr", "s_rch", "s_ret", "samples"]


@dataclass(frozen=True)
class SweepSpec:
    varied: str
    values: Tuple
    base: ScenarioConfig
    p_c_grid: Tuple[float, ...] = DEFAULT_PC_GRID

    def __post_init__(self):
        if self.varied not in VARIABLES:
            raise ValueError(f"varied parameter must be one of {sorted(VARIABLES)}, got {self.varied!r}")
        if len(self.values) == 0:
            raise ValueError("a sweep needs at least one value")
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "p_c_grid", tuple(float(p) for p in self.p_c_grid))
        grid = self.p_c_grid
        if not grid or any(b < a for a, b in zip(grid, grid[1:])):
            raise ValueError(f"p_c grid must be non-empty and ascending, got {list(grid)}")
        for v in self.values:
            self.config_for(v)

    def config_for(self, value) -> ScenarioConfig:
        if self.varied == "n":
            if int(value) != value:
                raise ValueError(f"n must be an integer, got {value}")
            value = int(value)
        else:
            value = float(value)
        return dataclasses.replace(self.base, p_c_values=self.p_c_grid, **{VARIABLES[self.varied]: value})

    def digest(self) -> str:
        return hashlib.sha256(repr(self).encode()).hexdigest()[:16]


@dataclass(frozen=True)
class ResultRow:
    varied_value: float
    p_c: float
    rch: float
    rch_stderr: float
    ret: float
    ret_stderr: float
    s_rch: float
    s_ret: float
    samples: int


@dataclass
class ResultTable:
    varied_name: str
    rows: List[ResultRow]
    metadata: Dict = field(default_factory=dict)

    def group(self, value) -> List[ResultRow]:
        return [r for r in self.rows if r.varied_value == value]

    @property
    def values(self) -> List:
        out = []
        for r in self.rows:
            if r.varied_value not in out:
                out.append(r.varied_value)
        return out

    def cell(self, value, p_c) -> ResultRow:
        for r in self.rows:
            if r.varied_value == value and math.isclose(r.p_c, p_c, abs_tol=1e-12):
                return r
        raise KeyError((value, p_c))

    def write_csv(self, fh: TextIO):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow([
                self.varied_name, _fmt(r.varied_value), _fmt(r.p_c), _fmt(r.rch), _fmt(r.rch_stderr),
                _fmt(r.ret), _fmt(r.ret_stderr), _fmt(r.s_rch), _fmt(r.s_ret), str(r.samples),
            ])

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()

    @classmethod
    def read_csv(cls, fh: TextIO) -> "ResultTable":
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValueError("results file is empty")
        if header != CSV_HEADER:
            raise ValueError(f"unexpected results header {header}; expected {CSV_HEADER}")
        rows, name = [], None
        for line_no, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != len(CSV_HEADER):
                raise ValueError(f"line {line_no}: expected {len(CSV_HEADER)} fields, got {len(rec)}")
            if name is None:
                name = rec[0]
            elif rec[0] != name:
                raise ValueError(f"line {line_no}: mixed varied parameters {name!r} and {rec[0]!r}")
            value = int(rec[1]) if rec[1].lstrip("-").isdigit() else float(rec[1])
            nums = [float(x) for x in rec[2:9]]
            rows.append(ResultRow(value, *nums, samples=int(rec[9])))
        if not rows:
            raise ValueError("results file has no data rows")
        return cls(name, rows)


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def trajectory(cfg: ScenarioConfig, seed: int, value_index: int) -> Iterator[np.ndarray]:
    """Positions at each of the ``cfg.n_intervals`` snapshots.

    Nodes are placed uniformly, then before every snapshot each node moves
    for one pause time along a fresh random heading.
    """
    state = init_positions(derive_substream(seed, (PLACEMENT, value_index)), cfg.n, cfg.area)
    tau = cfg.pause_time
    for snap in range(cfg.n_intervals):
        if tau is not None:
            rng = derive_substream(seed, (MOBILITY, value_index, snap))
            state = step(state, rng, cfg.speed_mps, tau, cfg.area)
        yield state.positions


def snapshot_sources(cfg: ScenarioConfig, seed: int, value_index: int, snap: int) -> np.ndarray:
    if cfg.sources_per_snapshot == "all" or cfg.n_sources == cfg.n:
        return np.arange(cfg.n)
    rng = derive_substream(seed, (SOURCE_SAMPLE, value_index, snap))
    return np.sort(rng.choice(cfg.n, size=cfg.n_sources, replace=False))


def _flood_snapshot(task):
    cfg, seed, value_index, snap, positions = task
    topo = build_topology(positions, cfg.radio_range_m)
    sources = snapshot_sources(cfg, seed, value_index, snap)
    rngs = [derive_substream(seed, (FLOOD, value_index, snap, int(s))) for s in sources]
    return coupled_counts(topo, sources, cfg.p_r, cfg.p_c_values, rngs)


def _tasks(spec: SweepSpec, seed: int):
    for v_idx, value in enumerate(spec.values):
        cfg = spec.config_for(value)
        for snap, pos in enumerate(trajectory(cfg, seed, v_idx)):
            yield cfg, seed, v_idx, snap, pos


def run_scenario(spec: SweepSpec, seed: Optional[int] = None, parallelism: int = 1) -> ResultTable:
    """Run the whole sweep; identical ``(spec, seed)`` gives identical rows for any ``parallelism``."""
    seed = spec.base.seed if seed is None else int(seed)
    if not 0 <= seed < 2 ** 64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    if parallelism < 1:
        raise ValueError(f"parallelism must be at least 1, got {parallelism}")
    started = time.perf_counter()

    tasks = list(_tasks(spec, seed))
    if parallelism == 1:
        results = [_flood_snapshot(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            results = list(pool.map(_flood_snapshot, tasks, chunksize=8))

    per_value: Dict[int, list] = {}
    for task, res in zip(tasks, results):
        per_value.setdefault(task[2], []).append(res)

    grid = spec.p_c_grid
    base_k = next((k for k, p in enumerate(grid) if p == 1.0), None)
    rows = []
    for v_idx, value in enumerate(spec.values):
        n = spec.config_for(value).n
        reached = np.concatenate([r for r, _ in per_value[v_idx]]) / n
        sent = np.concatenate([s for _, s in per_value[v_idx]]) / n
        stats = [(mean_and_stderr(reached[:, k]), mean_and_stderr(sent[:, k])) for k in range(len(grid))]
        for k, p_c in enumerate(grid):
            (rch, rch_se), (ret, ret_se) = stats[k]
            s_rch = s_ret = math.nan
            if base_k is not None:
                s_rch = _s(stats[base_k][0][0], rch)
                s_ret = _s(stats[base_k][1][0], ret)
            rows.append(ResultRow(value, p_c, rch, rch_se, ret, ret_se, s_rch, s_ret, len(reached)))

    meta = {
        "config_hash": spec.digest(),
        "seed": seed,
        "runtime_s": time.perf_counter() - started,
        "snapshots": len(tasks),
    }
    return ResultTable(spec.varied, rows, meta)


def _s(v1: float, v: float) -> float:
    try:
        return relative_change(v1, v)
    except ValueError:
        return math.nan
