"""End-to-end tests for the zonecast command-line interface."""

import pytest

from zonecast import (
    ChannelConfig,
    ScenarioConfig,
    bundled_scenario,
    save_scenario,
)
from zonecast.cli import main

LINE3 = str(bundled_scenario("fig5_line3"))


def test_run_writes_metrics_and_exits_zero(tmp_path, capsys):
    code = main(["run", "--scenario", LINE3, "--out", str(tmp_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "converged=True" in out
    assert "latency_ms=12.0" in out
    metrics = (tmp_path / "metrics.csv").read_text().splitlines()
    assert metrics == [
        "mac,seed,count,converged,last_tx_slot,quiescent_slot,latency_ms",
        "l3,0,3,True,5,6,12.0",
    ]
    vehicles = (tmp_path / "vehicles.csv").read_text().splitlines()
    assert vehicles == [
        "vehicle,tx_slots,rx_slots",
        "1,3,2",
        "2,2,3",
        "3,2,3",
    ]
    grid_rows = (tmp_path / "final_matrix.txt").read_text().splitlines()
    assert len(grid_rows) == 20
    assert all(len(row.split()) == 20 for row in grid_rows)


def test_run_trace_flag_writes_trace(tmp_path):
    main(["run", "--scenario", LINE3, "--out", str(tmp_path), "--trace"])
    trace = (tmp_path / "trace.txt").read_text().splitlines()
    assert trace[0] == "slot 1 | tx 1 | 1:S 2:D1 3:D1"
    assert len(trace) == 6


def test_run_artifacts_are_byte_identical_across_reruns(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main(["run", "--scenario", LINE3, "--out", str(out), "--trace"]) == 0
    for name in ("metrics.csv", "vehicles.csv", "final_matrix.txt", "trace.txt"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_run_missing_scenario_exits_one(tmp_path, capsys):
    code = main(["run", "--scenario", str(tmp_path / "nope.scn"), "--out", str(tmp_path)])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_run_stalled_scenario_exits_two(tmp_path, capsys):
    cfg = ScenarioConfig(
        channel=ChannelConfig(comm_range=20.0, capture_threshold=0.0, path_loss_exponent=2.0),
        vehicle_radius=0.0,
        vehicles=((1, (25.8, 38.2)), (2, (10.4, 38.5)), (3, (1.0, 54.5))),
        initiators=(1,),
    )
    path = tmp_path / "stall.scenario"
    save_scenario(cfg, path)
    code = main(["run", "--scenario", str(path), "--out", str(tmp_path)])
    assert code == 2
    assert "converged=False" in capsys.readouterr().out


def test_run_mac_override(tmp_path):
    main(["run", "--scenario", LINE3, "--out", str(tmp_path), "--mac", "csma"])
    assert (tmp_path / "metrics.csv").read_text().splitlines()[1].startswith("csma,")


def test_dump_matrix(tmp_path, capsys):
    assert main(["dump-matrix", "--scenario", LINE3, "--vehicle", "1"]) == 0
    rows = capsys.readouterr().out.strip().splitlines()
    assert len(rows) == 20
    assert all(tok in ("00", "01", "10", "11") for tok in rows[0].split())
    assert any("01" in row for row in rows)  # vehicle 1 starts with blind spots

    assert main(["dump-matrix", "--scenario", LINE3, "--vehicle", "99"]) == 1
    assert "no vehicle with id 99" in capsys.readouterr().err


def test_sweep_counts_mode(tmp_path, capsys):
    argv = [
        "sweep",
        "--counts", "3,4",
        "--trials", "2",
        "--seed", "5",
        "--out", str(tmp_path),
    ]
    code = main(argv)
    assert code in (0, 2)  # individual trials may legitimately stall
    out = capsys.readouterr().out
    assert "sweep.csv" in out
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert lines[0] == "count,trial,seed,last_tx_slot,quiescent_slot,latency_ms,converged"
    assert len(lines) == 5  # header + 2 counts x 2 trials

    rerun = tmp_path / "again"
    assert main(argv[:-1] + [str(rerun)]) == code
    assert (rerun / "sweep.csv").read_bytes() == (tmp_path / "sweep.csv").read_bytes()


def test_sweep_preset_writes_per_mac_files(tmp_path):
    code = main(
        ["sweep", "--preset", "paper-fig8", "--trials", "1", "--out", str(tmp_path)]
    )
    assert code in (0, 2)
    l3 = (tmp_path / "sweep_l3.csv").read_text().splitlines()
    csma = (tmp_path / "sweep_csma.csv").read_text().splitlines()
    assert len(l3) == len(csma) == 14  # header + counts 3..15, one trial each
    assert not (tmp_path / "sweep.csv").exists()


def test_sweep_requires_preset_or_counts(tmp_path, capsys):
    assert main(["sweep", "--out", str(tmp_path)]) == 1
    assert "error:" in capsys.readouterr().err


def test_bad_counts_list_is_a_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--counts", "3,x", "--out", str(tmp_path)])
    assert exc.value.code == 2
