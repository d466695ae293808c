import json

import numpy as np
import pytest

from noisyflood import config
from noisyflood.cli import main
from noisyflood.runner import ResultTable

SMALL = """\
# tiny sweep for quick CLI runs
n = 30
area_w = 300
area_h = 300
R = 80
u = 5
p_c_list = 0.5, 0.6, 0.7, 0.8, 0.9, 1.0
t_sim = 60
seed = 9

[sweep]
vary = p_r
values = 1.0, 0.8
"""


@pytest.fixture
def small_cfg(tmp_path):
    p = tmp_path / "small.cfg"
    p.write_text(SMALL)
    return p


def test_bundled_scenarios_parse():
    names = sorted(config.bundled_scenarios())
    assert names == ["scenario1.cfg", "scenario2.cfg", "scenario3.cfg", "scenario4.cfg"]
    s1 = config.load("scenario1.cfg")
    assert s1.varied == "p_r" and s1.values == (1.0, 0.9, 0.8, 0.7)
    assert s1.base.n_intervals == 120 and s1.base.seed == 42
    s2 = config.load("scenario2")
    assert s2.varied == "n" and s2.values == (75, 100, 125)
    assert [s2.config_for(v).density for v in s2.values] == pytest.approx([6.55, 8.73, 10.91], abs=0.01)
    s3 = config.load("scenario3.cfg")
    assert [s3.config_for(v).n_intervals for v in s3.values] == [48, 120, 192]
    s4 = config.load("scenario4.cfg")
    assert [s4.config_for(v).density for v in s4.values] == pytest.approx([4.91, 8.73, 13.64], abs=0.01)


@pytest.mark.parametrize("edit,key,line", [
    (("values = 1.0, 0.8", "values = 1.5, 0.8"), "values", 13),
    (("u = 5", "u = 5\np_r = 1.5"), "p_r", 7),
    (("R = 80", "R = -1"), "R", 5),
    (("n = 30", "n = thirty"), "n", 2),
    (("t_sim = 60", "t_sim = 60\nbogus = 1"), "bogus", 9),
    (("p_c_list = 0.5, 0.6, 0.7, 0.8, 0.9, 1.0", "p_c_list = 1.0, 0.5"), "p_c_list", 7),
    (("vary = p_r", "vary = colour"), "vary", 12),
])
def test_parse_errors_are_line_anchored(edit, key, line):
    text = SMALL.replace(*edit)
    with pytest.raises(config.ConfigError) as exc:
        config.parse(text, "bad.cfg")
    assert exc.value.key == key
    assert exc.value.line == line
    assert str(exc.value).startswith(f"bad.cfg:{line}: {key}:")


def test_missing_required_key():
    with pytest.raises(config.ConfigError, match="area_w"):
        config.parse(SMALL.replace("area_w = 300\n", ""))


def test_static_network_needs_loop_size():
    with pytest.raises(config.ConfigError, match="n_intervals"):
        config.parse(SMALL.replace("u = 5", "u = 0"))
    spec = config.parse(SMALL.replace("u = 5", "u = 0\nn_intervals = 1"))
    assert spec.base.n_intervals == 1


def test_large_seed_kept_exact():
    spec = config.parse(SMALL.replace("seed = 9", f"seed = {2 ** 64 - 1}"))
    assert spec.base.seed == 2 ** 64 - 1


def test_run_writes_csv_and_manifest(small_cfg, tmp_path):
    out = tmp_path / "out"
    assert main(["run", str(small_cfg), "--out", str(out)]) == 0
    table = ResultTable.read_csv(open(out / "results.csv"))
    assert len(table.rows) == 12
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["seed"] == 9
    assert manifest["config"] == str(small_cfg)
    assert {"command", "tool_version", "wall_clock_s", "output_dir", "config_hash"} <= set(manifest)


def test_run_is_byte_reproducible(small_cfg, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["run", str(small_cfg), "--seed", "5", "--out", str(a)]) == 0
    assert main(["run", str(small_cfg), "--seed", "5", "--out", str(b), "--parallelism", "2"]) == 0
    assert (a / "results.csv").read_bytes() == (b / "results.csv").read_bytes()


def test_run_rejects_bad_probability(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text(SMALL.replace("u = 5", "u = 5\np_r = 1.5"))
    assert main(["run", str(bad), "--out", str(tmp_path / "o")]) == 1
    err = capsys.readouterr().err
    assert "p_r" in err and "bad.cfg:7" in err
    assert not (tmp_path / "o").exists()


def test_run_missing_file(tmp_path, capsys):
    assert main(["run", str(tmp_path / "nope.cfg")]) == 1
    assert "nope.cfg" in capsys.readouterr().err


def test_run_unwritable_output(small_cfg, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["run", str(small_cfg), "--out", str(blocker / "sub")]) == 2


def test_table_scenario1(scenario1_dir, capsys):
    assert main(["table", str(scenario1_dir / "results.csv")]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    body = lines[2:]
    assert [l.split()[0] for l in body] == ["1.0", "0.9", "0.8", "0.7"]
    s_rch = [float(l.split()[1]) for l in body]
    assert s_rch == sorted(s_rch)
    assert all(len(tok.split(".")[1]) == 1 for l in body for tok in l.split()[1:])


def test_table_trend_over_n(tmp_path, capsys):
    # shortened scenario 2; S_RCH must fall as the network gets denser
    text = config.resolve("scenario2.cfg").read_text().replace("t_sim = 1800", "t_sim = 450")
    cfg = tmp_path / "s2.cfg"
    cfg.write_text(text)
    assert main(["run", str(cfg), "--out", str(tmp_path / "o")]) == 0
    capsys.readouterr()
    assert main(["table", str(tmp_path / "o" / "results.csv")]) == 0
    body = capsys.readouterr().out.strip().splitlines()[2:]
    assert [l.split()[0] for l in body] == ["75", "100", "125"]
    s = [float(l.split()[1]) for l in body]
    assert s[0] > s[1] > s[2]


def test_table_needs_noisy_rows(scenario1_dir, tmp_path, capsys):
    lines = (scenario1_dir / "results.csv").read_text().splitlines()
    only_baseline = [lines[0]] + [l for l in lines[1:] if l.split(",")[2] == "1.0"]
    p = tmp_path / "baseline.csv"
    p.write_text("\n".join(only_baseline) + "\n")
    assert main(["table", str(p)]) == 1
    err = capsys.readouterr().err
    assert "0.5" in err and "0.6" in err and "missing" in err


def test_plot_data_series(scenario1_dir, tmp_path):
    out = tmp_path / "plots"
    assert main(["plot-data", str(scenario1_dir / "results.csv"), "--figure", "rch", "--out", str(out)]) == 0
    files = sorted(out.iterdir())
    assert [f.name for f in files] == [f"rch_p_r_{v}.dat" for v in ("0.7", "0.8", "0.9", "1.0")]
    for f in files:
        data = np.loadtxt(f)
        assert data.shape == (6, 2)
        assert list(data[:, 0]) == [0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
        assert np.all(np.diff(data[:, 1]) >= 0)


def test_plot_data_ret(scenario1_dir, tmp_path):
    out = tmp_path / "plots"
    assert main(["plot-data", str(scenario1_dir / "results.csv"), "--figure", "ret", "--out", str(out)]) == 0
    assert len(list(out.glob("ret_p_r_*.dat"))) == 4


def test_plot_data_empty_csv(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    out = tmp_path / "plots"
    assert main(["plot-data", str(empty), "--out", str(out)]) == 1
    assert not out.exists()


def test_plot_data_unknown_figure(scenario1_dir, tmp_path):
    assert main(["plot-data", str(scenario1_dir / "results.csv"), "--figure", "hops", "--out", str(tmp_path)]) == 1


def test_oracle_check_passes(capsys):
    assert main(["oracle-check", "--fixtures", "chain-3", "cycle-4", "--runs", "20000"]) == 0
    out = capsys.readouterr().out
    assert "chain-3" in out and out.strip().endswith("65/65 checks passed")


def test_oracle_check_all_fixtures_noiseless_exact(capsys):
    from noisyflood.oracle import cross_check
    rows = [r for r in cross_check(runs=1000, grid=(1.0,))]
    assert len(rows) == 4 * 2
    assert all(r.stderr == 0 and r.monte_carlo == r.oracle for r in rows)


def test_oracle_check_catches_corrupted_engine(monkeypatch, capsys):
    from noisyflood import engine
    monkeypatch.setattr(engine, "accepts", lambda xi, p: np.logical_and(np.less(xi, p), np.greater(p, 0.0)))
    assert main(["oracle-check", "--fixtures", "chain-3", "--runs", "2000"]) == 3
    assert "FAIL boundary" in capsys.readouterr().out


def test_oracle_check_unknown_fixture(capsys):
    assert main(["oracle-check", "--fixtures", "mesh-99"]) == 1


def test_module_entry_point():
    import subprocess
    import sys
    res = subprocess.run([sys.executable, "-m", "noisyflood", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "0.1.0" in res.stdout
