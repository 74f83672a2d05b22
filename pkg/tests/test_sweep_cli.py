"""Sweep orchestration, table emission, and the command-line surface."""

import logging
import math

import numpy as np
import pytest

from pinchpas import (
    OutputTable,
    SimulationSpec,
    SweepSpec,
    SystemConfig,
    continuous_rate,
    emit_table,
    header_config_text,
    load_config,
    parse_config_text,
    reload_run,
    run_sweep,
)
from pinchpas.cli import main


def _spec(text):
    return parse_config_text(text)[1]


# ---------------------------------------------------------------- sweeps --

def test_sweep_one_table_per_antenna_count():
    spec = _spec("d_x = 10\nmetric = outage\nm_values = 1, 2, 10\n")
    tables = run_sweep(spec)
    assert [t.name for t in tables] == ["outage_m1", "outage_m2", "outage_m10"]
    for t in tables:
        assert len(t.rows) == 11
        assert all(len(r) == 2 for r in t.rows)
        xs = [r[0] for r in t.rows]
        assert xs == sorted(xs)


def test_sweep_outage_columns_monotone_nonincreasing():
    # More transmit power can only reduce outage, for every antenna count.
    spec = _spec("d_x = 10\nmetric = outage\nm_values = 1, 2, 10\n")
    for table in run_sweep(spec):
        vals = [r[1] for r in table.rows]
        assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:])), table.name


def test_sweep_m_axis_collapses_to_single_table():
    spec = _spec("d_x = 10\nmetric = pde\n")
    tables = run_sweep(spec)
    assert len(tables) == 1
    assert tables[0].name == "pde"
    assert [r[0] for r in tables[0].rows] == [float(i) for i in range(1, 11)]


def test_sweep_pde_equals_rate_over_continuous():
    # Cross-metric consistency: fixed parameters, same antenna counts.
    base = "d_x = 14\nalpha = 0.05\ngamma_t_db = 95\nsweep_axis = m\naxis_values = 1:6:6\n"
    pde_rows = run_sweep(_spec(base + "metric = pde\n"))[0].rows
    rate_rows = run_sweep(_spec(base + "metric = rate\n"))[0].rows
    cont = continuous_rate(SystemConfig(d_x=14.0, alpha=0.05, gamma_t_db=95.0)).value
    for (m1, eff), (m2, rate) in zip(pde_rows, rate_rows):
        assert m1 == m2
        assert abs(eff - rate / cont) < 1e-10


def test_sweep_regions_tables():
    spec = _spec("d_x = 20\nmetric = regions\nm_values = 1, 3\n")
    tables = run_sweep(spec)
    assert [t.name for t in tables] == ["regions_m1", "regions_m3"]
    t3 = tables[1]
    assert len(t3.rows) == 3
    for i, row in enumerate(t3.rows):
        k, x_k, left, right, cut = row
        assert k == float(i + 1)
        assert left > 0 and right > 0
        assert cut == pytest.approx(x_k + right, rel=1e-12)
    # strips tile the room
    assert t3.rows[-1][4] == pytest.approx(20.0)
    total = sum(r[2] + r[3] for r in t3.rows)
    assert total == pytest.approx(20.0, rel=1e-12)


def test_sweep_simulate_carries_stderr_column():
    spec = _spec("d_x = 10\nmetric = simulate\naxis_values = 94:96:2\nm_values = 2\n")
    tables = run_sweep(spec, SimulationSpec(n_samples=50_000, seed=5))
    assert len(tables) == 1
    assert all(len(r) == 3 for r in tables[0].rows)
    assert any("seed = 5" in line for line in tables[0].header)
    assert any("n_samples = 50000" in line for line in tables[0].header)


def test_sweep_d_x_axis():
    spec = _spec("d_x = 10\nmetric = rate\nsweep_axis = d_x\nm_values = 2\n")
    tables = run_sweep(spec)
    rows = tables[0].rows
    assert [r[0] for r in rows] == [10.0, 20.0, 30.0]
    # longer rooms spread the same antennas thinner: the rate drops
    vals = [r[1] for r in rows]
    assert vals[0] > vals[1] > vals[2]


# ---------------------------------------------------------------- tables --

def test_output_table_validation():
    header = ("# d_x = 10.0",)
    with pytest.raises(ValueError):
        OutputTable(name="t", header=("no hash",), rows=())
    with pytest.raises(ValueError):
        OutputTable(name="t", header=header, rows=((1.0,),))
    with pytest.raises(ValueError):
        OutputTable(name="t", header=header, rows=((1.0, 2.0), (1.0, 2.0, 3.0)))
    with pytest.raises(ValueError):
        OutputTable(name="t", header=header, rows=((1.0, math.inf),))


def test_emit_table_format(tmp_path):
    table = OutputTable(
        name="demo",
        header=("## pinchpas test", "# d_x = 10.0"),
        rows=((90.0, 0.123456789012345), (92.0, 1e-9)),
    )
    path = tmp_path / "demo.dat"
    emit_table(table, path)
    text = path.read_bytes().decode("utf-8")
    assert text == "## pinchpas test\n# d_x = 10.0\n90 0.123456789012\n92 1e-09\n"


def test_emit_table_warns_on_empty(tmp_path, caplog):
    table = OutputTable(name="empty", header=("# d_x = 1.0",), rows=())
    with caplog.at_level(logging.WARNING):
        emit_table(table, tmp_path / "empty.dat")
    assert any("no rows" in rec.message for rec in caplog.records)


def test_header_round_trip(tmp_path):
    text = (
        "d_x = 17\nd_y = 9\nalpha = 0.033\ngamma_t_db = 97\n"
        "metric = rate\nm_values = 2, 5\n"
    )
    system, spec = parse_config_text(text)
    tables = run_sweep(spec)
    path = tmp_path / f"{tables[0].name}.dat"
    emit_table(tables[0], path)
    system2, spec2 = reload_run(path)
    assert system2 == system
    assert spec2 == spec
    # and the recovered text re-parses standalone
    assert parse_config_text(header_config_text(path)) == (system, spec)


def test_emitted_tables_are_byte_identical_across_runs(tmp_path):
    spec = _spec("d_x = 12\nmetric = pde\nalpha = 0.08\n")
    for sub in ("a", "b"):
        d = tmp_path / sub
        d.mkdir()
        for table in run_sweep(spec):
            emit_table(table, d / f"{table.name}.dat")
    a = (tmp_path / "a" / "pde.dat").read_bytes()
    b = (tmp_path / "b" / "pde.dat").read_bytes()
    assert a == b


# ------------------------------------------------------------------- CLI --

def _write_cfg(tmp_path, text):
    p = tmp_path / "run.cfg"
    p.write_text(text, encoding="utf-8")
    return str(p)


def test_cli_outage_end_to_end(tmp_path, capsys):
    cfg = _write_cfg(tmp_path, "d_x = 10\nm_values = 2\naxis_values = 94:96:3\n")
    out = tmp_path / "out"
    code = main(["outage", "--config", cfg, "--out-dir", str(out)])
    assert code == 0
    captured = capsys.readouterr()
    assert "wrote" in captured.out
    data = (out / "outage_m2.dat").read_text(encoding="utf-8")
    assert data.startswith("## pinchpas")
    assert len([l for l in data.splitlines() if not l.startswith("#")]) == 3


def test_cli_subcommand_overrides_config_metric(tmp_path):
    cfg = _write_cfg(tmp_path, "d_x = 10\nmetric = rate\nm_values = 2\n")
    out = tmp_path / "out"
    code = main(["pde", "--config", cfg, "--out-dir", str(out)])
    assert code == 0
    assert (out / "pde_m2.dat").exists()


def test_cli_simulate_seed_and_samples_flags(tmp_path):
    cfg = _write_cfg(tmp_path, "d_x = 10\nm_values = 2\naxis_values = 95:95:1\n")
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    assert main(["simulate", "--config", cfg, "--out-dir", str(out1),
                 "--seed", "11", "--samples", "20000"]) == 0
    assert main(["simulate", "--config", cfg, "--out-dir", str(out2),
                 "--seed", "11", "--samples", "20000"]) == 0
    b1 = (out1 / "simulate_m2.dat").read_bytes()
    assert b1 == (out2 / "simulate_m2.dat").read_bytes()
    assert b"## seed = 11" in b1
    assert b"## n_samples = 20000" in b1


def test_cli_missing_config_is_usage_error(tmp_path):
    assert main(["outage", "--config", str(tmp_path / "nope.cfg")]) == 1


def test_cli_bad_config_is_usage_error(tmp_path):
    cfg = _write_cfg(tmp_path, "alpha = 0.05\n")  # d_x missing
    assert main(["outage", "--config", cfg]) == 1


def test_cli_bad_flag_is_usage_error():
    assert main(["outage", "--config", "x", "--bogus"]) == 1
    assert main(["frobnicate"]) == 1


def test_cli_numerical_flags_exit_two(tmp_path, capsys):
    cfg = _write_cfg(tmp_path, "d_x = 20\nalpha = 80\nm_values = 1\n")
    code = main(["outage", "--config", cfg, "--out-dir", str(tmp_path / "o")])
    assert code == 2
    assert "numerical flags" in capsys.readouterr().err


def test_cli_version(capsys):
    assert main(["--version"]) == 0
    assert "pinchpas" in capsys.readouterr().out


def test_cli_selftest(capsys):
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert "all checks passed" in out
    assert "FAIL" not in out
