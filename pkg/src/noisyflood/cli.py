"""Command-line front end: run sweeps, print S_V tables, export plot series, cross-check the engine.

Exit codes: 0 success, 1 validation error, 2 runtime failure, 3 oracle-check failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

from . import __version__, config, oracle
from .runner import ResultTable, run_scenario

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME, EXIT_ORACLE = 0, 1, 2, 3
TABLE_PC = (0.5, 0.6)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load_results(path) -> ResultTable:
    try:
        with open(path, newline="") as fh:
            return ResultTable.read_csv(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_run(args) -> int:
    try:
        spec = config.load(args.config)
    except (FileNotFoundError, config.ConfigError) as exc:
        return _fail(str(exc), EXIT_INVALID)
    seed = spec.base.seed if args.seed is None else args.seed
    if not 0 <= seed < 2 ** 64:
        return _fail(f"--seed must be a 64-bit unsigned integer, got {seed}", EXIT_INVALID)
    if args.parallelism < 1:
        return _fail("--parallelism must be at least 1", EXIT_INVALID)

    out = Path(args.out)
    started = time.perf_counter()
    try:
        out.mkdir(parents=True, exist_ok=True)
        table = run_scenario(spec, seed=seed, parallelism=args.parallelism)
        with open(out / "results.csv", "w", newline="") as fh:
            table.write_csv(fh)
        manifest = {
            "config": str(args.config),
            "config_hash": table.metadata["config_hash"],
            "seed": seed,
            "output_dir": str(out),
            "command": ["noisyflood", *args.argv],
            "tool_version": __version__,
            "wall_clock_s": round(time.perf_counter() - started, 3),
            "snapshots": table.metadata["snapshots"],
            "rows": len(table.rows),
        }
        with open(out / "manifest.json", "w") as fh:
            json.dump(manifest, fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        return _fail(f"cannot write output to {out}: {exc.strerror}", EXIT_RUNTIME)
    print(f"{args.config}: {len(table.rows)} rows from {table.metadata['snapshots']} snapshots "
          f"in {manifest['wall_clock_s']:.1f} s -> {out / 'results.csv'}", file=sys.stderr)
    return EXIT_OK


def format_table(table: ResultTable) -> str:
    present = {round(r.p_c, 9) for r in table.rows}
    missing = [p for p in (*TABLE_PC, 1.0) if round(p, 9) not in present]
    if missing:
        raise UsageError(
            "results lack the p_c rows needed for S_V: missing p_c = " + ", ".join(str(p) for p in missing)
            + " (S_V compares p_c = 0.5 and 0.6 against the p_c = 1 baseline)"
        )
    name = table.varied_name
    lines = [
        f"{name:>8}  {'S_RCH (%)':^17}  {'S_RET (%)':^17}",
        f"{'':>8}  {'p_c=0.5':>8} {'p_c=0.6':>8}  {'p_c=0.5':>8} {'p_c=0.6':>8}",
    ]
    for value in table.values:
        cells = [table.cell(value, p) for p in TABLE_PC]
        s_rch = " ".join(f"{c.s_rch:>8.1f}" for c in cells)
        s_ret = " ".join(f"{c.s_ret:>8.1f}" for c in cells)
        lines.append(f"{value!s:>8}  {s_rch}  {s_ret}")
    return "\n".join(lines)


def cmd_table(args) -> int:
    print(format_table(_load_results(args.results)))
    return EXIT_OK


def cmd_plot_data(args) -> int:
    table = _load_results(args.results)
    out = Path(args.out)
    series = {}
    for value in table.values:
        rows = sorted(table.group(value), key=lambda r: r.p_c)
        series[f"{args.figure}_{table.varied_name}_{value}.dat"] = [(r.p_c, getattr(r, args.figure)) for r in rows]
    try:
        out.mkdir(parents=True, exist_ok=True)
        for fname, points in series.items():
            with open(out / fname, "w") as fh:
                for p_c, v in points:
                    fh.write(f"{p_c!r} {v!r}\n")
    except OSError as exc:
        return _fail(f"cannot write plot data to {out}: {exc.strerror}", EXIT_RUNTIME)
    for fname in series:
        print(out / fname)
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    names = args.fixtures or list(oracle.FIXTURES)
    unknown = [f for f in names if f not in oracle.FIXTURES]
    if unknown:
        return _fail(f"unknown fixture(s): {', '.join(unknown)}; known: {', '.join(oracle.FIXTURES)}", EXIT_INVALID)
    try:
        rows = oracle.cross_check(runs=args.runs, seed=args.seed, fixtures=names)
    except ValueError as exc:
        return _fail(str(exc), EXIT_INVALID)
    probe = oracle.boundary_probe()

    failed = 0
    for msg in probe:
        print(f"FAIL boundary  {msg}")
        failed += 1
    if not probe:
        print("ok   boundary  draws equal to the threshold are accepted")
    for r in rows:
        z = (r.monte_carlo - r.oracle) / r.stderr if r.stderr > 0 else (0.0 if r.ok else math.inf)
        tag = "ok  " if r.ok else "FAIL"
        failed += not r.ok
        print(f"{tag} {r.fixture:<14} p_r={r.p_r:<5} p_c={r.p_c:<5} {r.metric} "
              f"oracle={r.oracle:.6f} mc={r.monte_carlo:.6f} se={r.stderr:.2e} z={z:+.2f}")
    total = len(rows) + 1
    print(f"{total - failed}/{total} checks passed")
    return EXIT_ORACLE if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="noisyflood", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run a scenario sweep and write results.csv + manifest.json")
    p.add_argument("config", help="scenario file, or the name of a bundled one (scenario1.cfg ... scenario4.cfg)")
    p.add_argument("--seed", type=int, default=None, help="overrides the seed in the config")
    p.add_argument("--out", default="out", help="output directory (default: out)")
    p.add_argument("--parallelism", type=int, default=1, help="worker processes; results do not depend on it")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("table", help="print S_RCH / S_RET at p_c = 0.5 and 0.6")
    p.add_argument("results")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("plot-data", help="write one (p_c, value) series file per varied value")
    p.add_argument("results")
    p.add_argument("--figure", choices=("rch", "ret"), default="rch")
    p.add_argument("--out", default="plots")
    p.set_defaults(func=cmd_plot_data)

    p = sub.add_parser("oracle-check", help="Monte Carlo vs exact enumeration on the bundled fixtures")
    p.add_argument("--fixtures", nargs="*", default=None, help=f"subset of: {', '.join(oracle.FIXTURES)}")
    p.add_argument("--runs", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=2010)
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        args.argv = argv
        return args.func(args)
    except UsageError as exc:
        return _fail(str(exc), EXIT_INVALID)
    except Exception as exc:  # noqa: BLE001
        return _fail(f"{type(exc).__name__}: {exc}", EXIT_RUNTIME)


if __name__ == "__main__":
    sys.exit(main())
