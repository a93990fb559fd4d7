import math

import numpy as np
import pytest

import spinotto.sweep_cli as cli
from spinotto.spin_algebra import DiagonalizationError, Spin
from spinotto.sweep_cli import (
    SweepSpec,
    UsageError,
    emit_plot_script,
    format_scalar,
    main,
    read_config_file,
    rows_to_csv,
    run_sweep,
)

FIXED = dict(J=0.1, B1=4.0, B2=3.0, T1=1.0, T2=0.5)


def small_spec(**overrides):
    kw = dict(param="J", lo=0.0, hi=0.5, steps=6,
              spins=(Spin(1), Spin(2)), workers=1, **FIXED)
    kw.update(overrides)
    return SweepSpec(**kw)


def test_format_scalar_round_trips_exactly():
    for x in (1 / 3, 0.1, -2.5e-17, 1234.5678, 5e-324):
        assert float(format_scalar(x)) == x
    assert format_scalar(float("nan")) == "nan"
    assert format_scalar(float("inf")) == "inf"
    assert format_scalar(float("-inf")) == "-inf"
    assert math.copysign(1.0, float(format_scalar(-0.0))) == -1.0


def test_sweep_spec_validation():
    with pytest.raises(UsageError):
        small_spec(param="B1")
    with pytest.raises(UsageError):
        small_spec(steps=1)
    with pytest.raises(UsageError):
        small_spec(lo=0.5, hi=0.2)
    with pytest.raises(UsageError):
        small_spec(workers=0)
    with pytest.raises(ValueError):
        small_spec(lo=-1.0)  # negative coupling fails the endpoint config


def test_rows_follow_spin_then_grid_order():
    spec = small_spec()
    rows = run_sweep(spec)
    assert len(rows) == 12
    assert [r.s for r in rows] == [0.5] * 6 + [1.0] * 6
    params = [r.param for r in rows[:6]]
    assert params == sorted(params)
    np.testing.assert_allclose(params, np.linspace(0.0, 0.5, 6))


def test_sweep_is_deterministic_across_worker_counts():
    serial = rows_to_csv(run_sweep(small_spec(workers=1)), "J")
    threaded = rows_to_csv(run_sweep(small_spec(workers=8)), "J")
    assert serial == threaded


def test_csv_cells_reparse_to_the_exact_row_values():
    rows = run_sweep(small_spec(steps=4))
    text = rows_to_csv(rows, "J")
    lines = text.strip().split("\n")
    assert lines[0].startswith("s,J,W,Q1,Q2,eta,eta_bound,mode,")
    for row, line in zip(rows, lines[1:]):
        cells = line.split(",")
        assert float(cells[0]) == row.s
        assert float(cells[2]) == row.W
        assert cells[7] == row.mode
        assert float(cells[18]) == row.w_coop
        eta = float(cells[5])
        assert eta == row.eta or (math.isnan(eta) and math.isnan(row.eta))


def test_refinement_appends_boundary_rows():
    spec = small_spec(param="J", lo=0.4, hi=0.6, steps=5,
                      spins=(Spin(1),), refine=True)
    rows = run_sweep(spec)
    boundaries = [r for r in rows if r.mode == "pwc_boundary"]
    assert len(boundaries) == 1
    b = boundaries[0]
    assert 0.4 <= b.param <= 0.6
    assert abs(b.W) < 1e-5  # sits on the sign change of W
    # refinement only appends; the grid rows are untouched
    unrefined = run_sweep(small_spec(param="J", lo=0.4, hi=0.6,
                                     steps=5, spins=(Spin(1),)))
    assert rows_to_csv(rows[:5], "J") == rows_to_csv(unrefined, "J")


def test_swept_temperature_grid():
    spec = small_spec(param="T2", lo=0.2, hi=0.8, steps=4, spins=(Spin(2),))
    rows = run_sweep(spec)
    np.testing.assert_allclose([r.param for r in rows], np.linspace(0.2, 0.8, 4))


def test_config_file_parsing(tmp_path):
    path = tmp_path / "engine.conf"
    path.write_text("s = 1\nJ = 0.1 # weak\n\nB1 = 4\nB2 = 3\nT1 = 1\nT2 = 0.5\n")
    values = read_config_file(str(path))
    assert values == {"s": "1", "J": "0.1", "B1": "4", "B2": "3", "T1": "1", "T2": "0.5"}
    bad = tmp_path / "bad.conf"
    bad.write_text("J 0.1\n")
    with pytest.raises(UsageError):
        read_config_file(str(bad))


def test_cli_single_point_commands(capsys):
    assert main(["cycle", "--s", "1", "--J", "0.1", "--B1", "4",
                 "--B2", "3", "--T1", "1", "--T2", "0.5"]) == 0
    header, row = capsys.readouterr().out.strip().split("\n")
    cells = dict(zip(header.split(","), row.split(",")))
    assert cells["mode"] == "engine"
    assert float(cells["eta_carnot"]) == 0.5

    assert main(["local", "--s", "1", "--J", "4", "--B1", "4",
                 "--B2", "3", "--T1", "1", "--T2", "0.5"]) == 0
    header, row = capsys.readouterr().out.strip().split("\n")
    cells = dict(zip(header.split(","), row.split(",")))
    assert cells["mode_A"] == "refrigerator"
    assert cells["B_thermal_flag"] == "0"

    assert main(["coop", "--s", "1/2", "--J1", "0.2", "--J2", "0.1",
                 "--B1", "4", "--B2", "3", "--T1", "1", "--T2", "0.5"]) == 0
    header, row = capsys.readouterr().out.strip().split("\n")
    assert header.split(",")[7] == "W"

    assert main(["spectrum", "--s", "1/2", "--J", "0.1", "--B", "4"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "index,j,m,energy,energy_numeric"
    assert len(lines) == 5


def test_cli_config_file_with_flag_override(capsys, tmp_path):
    conf = tmp_path / "engine.conf"
    conf.write_text("s = 1\nJ = 0.1\nB1 = 4\nB2 = 3\nT1 = 1\nT2 = 0.5\n")
    assert main(["cycle", "--config", str(conf)]) == 0
    baseline = capsys.readouterr().out
    assert main(["cycle", "--config", str(conf), "--J", "4"]) == 0
    overridden = capsys.readouterr().out
    assert baseline != overridden
    assert overridden.strip().split("\n")[1].split(",")[1] == "4"


def test_cli_writes_output_file(tmp_path, capsys):
    out = tmp_path / "rows.csv"
    assert main(["sweep", "--param", "J", "--min", "0", "--max", "0.2",
                 "--steps", "3", "--s", "1", "--B1", "4", "--B2", "3",
                 "--T1", "1", "--T2", "0.5", "--workers", "1",
                 "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    text = out.read_text(encoding="utf-8")
    assert text.count("\n") == 4  # header plus three rows


def test_cli_exit_code_for_bad_values(capsys):
    # missing required option
    assert main(["cycle", "--s", "1", "--J", "0.1"]) == 2
    # physics validation failure
    assert main(["cycle", "--s", "1", "--J", "-1", "--B1", "4", "--B2", "3",
                 "--T1", "1", "--T2", "0.5"]) == 2
    # unknown config key
    assert main(["plot-script", "--csv", "missing.csv", "--figure", "fig1"]) == 2
    capsys.readouterr()


def test_cli_exit_code_for_unknown_config_key(tmp_path, capsys):
    conf = tmp_path / "bad.conf"
    conf.write_text("bogus = 1\n")
    assert main(["cycle", "--config", str(conf), "--s", "1", "--J", "0.1",
                 "--B1", "4", "--B2", "3", "--T1", "1", "--T2", "0.5"]) == 2
    assert "bogus" in capsys.readouterr().err


def test_cli_exit_code_for_diagonalization_failure(monkeypatch, capsys):
    def explode(h):
        raise DiagonalizationError("synthetic failure")

    monkeypatch.setattr(cli, "diagonalize", explode)
    assert main(["spectrum", "--s", "1", "--J", "0.1", "--B", "4"]) == 3
    assert "synthetic failure" in capsys.readouterr().err


def test_spectrum_matrix_dump(capsys):
    assert main(["spectrum", "--s", "1/2", "--J", "0.5", "--B", "1",
                 "--dump-matrix"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "c0,c1,c2,c3"
    matrix = np.array([[float(x) for x in line.split(",")] for line in lines[1:]])
    np.testing.assert_array_equal(matrix, matrix.T)
    assert matrix[1, 2] == 2.0  # 4J off-diagonal exchange element


def test_plot_scripts_select_rows_per_spin(tmp_path):
    csv_path = tmp_path / "sweep.csv"
    rows = run_sweep(small_spec(steps=4))
    csv_path.write_text(rows_to_csv(rows, "J"), encoding="utf-8")
    for kind in ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6"):
        script = emit_plot_script(str(csv_path), kind)
        assert script.startswith(f"# {kind}:")
        assert "set datafile separator ','" in script
    fig1 = emit_plot_script(str(csv_path), "fig1")
    assert "strcol(1) eq '0.5'" in fig1 and "strcol(1) eq '1'" in fig1
    assert "strcol(8) ne 'pwc_boundary'" in fig1
    with pytest.raises(UsageError):
        emit_plot_script(str(csv_path), "fig9")
    not_sweep = tmp_path / "other.csv"
    not_sweep.write_text("a,b\n1,2\n", encoding="utf-8")
    with pytest.raises(UsageError):
        emit_plot_script(str(not_sweep), "fig1")
