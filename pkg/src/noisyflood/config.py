"""Scenario files: ``key = value`` lines, ``#`` comments, comma-separated lists.

Base parameters come first; a ``[sweep]`` block names the one varied
parameter and its values::

    n = 100
    area_w = 600
    area_h = 600
    R = 100
    u = 5
    p_c_list = 0.5, 0.6, 0.7, 0.8, 0.9, 1.0
    t_sim = 1800
    seed = 42
    sources = all

    [sweep]
    vary = p_r
    values = 1.0, 0.9, 0.8, 0.7
"""

from __future__ import annotations

import math
from importlib import resources
from pathlib import Path
from typing import Dict, Tuple, Union

from .model import Area, ScenarioConfig
from .runner import VARIABLES, SweepSpec

BASE_KEYS = {"n", "area_w", "area_h", "R", "u", "p_r", "p_c_list", "t_sim", "seed", "sources", "n_intervals"}
SWEEP_KEYS = {"vary", "values"}


class ConfigError(ValueError):
    def __init__(self, source: str, line: int, key: str, message: str):
        self.source, self.line, self.key = source, line, key
        super().__init__(f"{source}:{line}: {key}: {message}")


def bundled_scenarios() -> Dict[str, Path]:
    root = resources.files("noisyflood") / "scenarios"
    return {p.name: Path(str(p)) for p in root.iterdir() if p.name.endswith(".cfg")}


def resolve(path: Union[str, Path]) -> Path:
    """Return ``path`` if it exists, else the bundled scenario of that name."""
    p = Path(path)
    if p.exists():
        return p
    bundled = bundled_scenarios()
    for name in (p.name, p.name + ".cfg"):
        if name in bundled:
            return bundled[name]
    raise FileNotFoundError(f"no such config file: {path}")


def _parse_lines(text: str, source: str):
    entries: Dict[str, Tuple[str, int]] = {}
    section = "base"
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section != "sweep":
                raise ConfigError(source, line_no, section, "unknown section (only [sweep] is allowed)")
            continue
        if "=" not in line:
            raise ConfigError(source, line_no, line, "expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        allowed = BASE_KEYS if section == "base" else SWEEP_KEYS
        if key not in allowed:
            raise ConfigError(source, line_no, key, f"unknown key in {section} block")
        if key in entries:
            raise ConfigError(source, line_no, key, f"duplicate key (first set on line {entries[key][1]})")
        entries[key] = (value, line_no)
    return entries


def parse(text: str, source: str = "<config>") -> SweepSpec:
    entries = _parse_lines(text, source)

    def get(key, conv, default=None):
        if key not in entries:
            if default is not None:
                return default
            raise ConfigError(source, 0, key, "required key is missing")
        value, line_no = entries[key]
        try:
            return conv(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(source, line_no, key, f"bad value {value!r} ({exc})") from None

    def check(key, ok, message):
        if not ok:
            raise ConfigError(source, entries[key][1] if key in entries else 0, key, message)

    vary = get("vary", str)
    check("vary", vary in VARIABLES, f"must be one of {', '.join(VARIABLES)}")
    value_conv = {"p_r": _prob, "n": _int, "u": _float, "R": _float}[vary]
    values = get("values", lambda s: tuple(value_conv(x) for x in _split(s)))
    check("values", len(values) > 0, "no values given")

    n = get("n", _int, default=values[0] if vary == "n" else None)
    p_r = get("p_r", _prob, default=values[0] if vary == "p_r" else None)
    p_c = get("p_c_list", lambda s: tuple(_prob(x) for x in _split(s)))
    check("p_c_list", all(a <= b for a, b in zip(p_c, p_c[1:])), "values must be ascending")
    area_w = get("area_w", _float)
    area_h = get("area_h", _float)
    check("area_w", area_w > 0, "must be positive")
    check("area_h", area_h > 0, "must be positive")
    R = get("R", _float)
    check("R", R > 0, "must be positive")
    u = get("u", _float)
    check("u", u >= 0, "must be non-negative")
    t_sim = get("t_sim", _float)
    check("t_sim", t_sim > 0, "must be positive")
    seed = get("seed", _int, default=0)
    check("seed", 0 <= seed < 2 ** 64, "must be a 64-bit unsigned integer")
    sources = get("sources", lambda s: s if s == "all" else _int(s), default="all")
    check("sources", sources == "all" or sources > 0, "must be 'all' or a positive integer")
    n_intv = get("n_intervals", _int) if "n_intervals" in entries else None
    check("n", n >= 2, "must be at least 2")
    if vary == "n":
        check("values", all(v >= 2 for v in values), "every n must be at least 2")
    if vary == "R":
        check("values", all(v > 0 for v in values), "every R must be positive")
    if vary == "u":
        check("values", all(v >= 0 for v in values), "every u must be non-negative")
    if n_intv is not None:
        check("n_intervals", n_intv >= 1, "must be at least 1")
    elif u == 0 or (vary == "u" and 0 in values):
        check("u", False, "a static network (u = 0) needs n_intervals")

    try:
        base = ScenarioConfig(
            n=n, area=Area(area_w, area_h), radio_range_m=R, speed_mps=u, p_r=p_r, p_c_values=p_c,
            sim_time_s=t_sim, seed=seed, sources_per_snapshot=sources, n_intervals_override=n_intv,
        )
        return SweepSpec(vary, values, base, p_c)
    except ValueError as exc:
        raise ConfigError(source, 0, vary, str(exc)) from None


def load(path: Union[str, Path]) -> SweepSpec:
    p = resolve(path)
    return parse(p.read_text(), source=str(path))


def _split(s: str):
    items = [x.strip() for x in s.split(",")]
    if any(not x for x in items):
        raise ValueError("empty list item")
    return items


def _float(s: str) -> float:
    x = float(s)
    if not math.isfinite(x):
        raise ValueError("must be finite")
    return x


def _prob(s: str) -> float:
    p = _float(s)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{p} is outside [0, 1]")
    return p


def _int(s: str) -> int:
    try:
        return int(s)
    except ValueError:
        pass
    x = float(s)
    if x != int(x):
        raise ValueError("must be an integer")
    return int(x)
