import json

import pytest

from fracdiff.cli import main, snapshot_times
from fracdiff.errors import InvalidCount

SWEEP = """\
alpha = 0.75, 1.25, 1.5, 1.75
k_alpha = 1
L = 1
N = 10
T = 1
bc_left = 40
bc_right = 20
ic_p0 = 0
ic_p1 = 0
"""


@pytest.fixture
def sweep_config(tmp_path):
    path = tmp_path / "sweep.cfg"
    path.write_text(SWEEP + f"output_dir = {tmp_path / 'out'}\n")
    return path


def expected_files():
    names = set()
    for a in ("0.75", "1.25", "1.5", "1.75"):
        for s in ("fdm", "fem"):
            names |= {f"profile_{s}_a{a}.csv", f"trace_{s}_a{a}.csv"}
    return names | {"report.json"}


def test_snapshot_times():
    assert snapshot_times(2.0, 3) == [0.5, 1.0, 2.0]
    assert snapshot_times(1.0, 2, first_level=0.01) == [0.01, 0.5, 1.0]
    with pytest.raises(InvalidCount):
        snapshot_times(1.0, 1)


@pytest.mark.parametrize("command", ["run", "sweep"])
def test_sweep_file_set(sweep_config, tmp_path, command):
    assert main([command, str(sweep_config)]) == 0
    out = tmp_path / "out"
    assert {p.name for p in out.iterdir()} == expected_files()
    report = json.loads((out / "report.json").read_text())
    assert len(report["members"]) == 8
    fem = [m for m in report["members"] if m["scheme"] == "fem"]
    assert all(m["stable_dt_max"] is None for m in fem)
    for key in ("scheme", "alpha", "dt", "stable_dt_max", "diverged", "max_abs_value", "wall_time"):
        assert key in report["members"][0]


def test_csv_layout(sweep_config, tmp_path):
    main(["run", str(sweep_config), "--alpha", "0.75", "--scheme", "fem"])
    out = tmp_path / "out"
    profile = (out / "profile_fem_a0.75.csv").read_bytes().decode()
    assert "\r" not in profile
    lines = profile.splitlines()
    header = lines[0].split(",")
    assert header[0] == "x" and all(h.startswith("t=") for h in header[1:])
    assert len(header) == 1 + 5  # 4 geometric snapshots plus the first level
    assert len(lines) == 1 + 11
    assert lines[1].split(",")[1:] == ["40.0"] * 5
    trace = (out / "trace_fem_a0.75.csv").read_text().splitlines()
    assert trace[0] == "t,u"
    t_last, u_last = map(float, trace[-1].split(","))
    assert t_last == pytest.approx(1.0)
    assert 0 < u_last < 30


def test_reruns_are_byte_identical(sweep_config, tmp_path):
    main(["sweep", str(sweep_config)])
    first = {p.name: p.read_bytes() for p in (tmp_path / "out").glob("*.csv")}
    main(["run", str(sweep_config)])
    second = {p.name: p.read_bytes() for p in (tmp_path / "out").glob("*.csv")}
    assert first == second


def test_threads_env(sweep_config, tmp_path, monkeypatch):
    monkeypatch.setenv("FRACDIFF_THREADS", "3")
    assert main(["sweep", str(sweep_config)]) == 0


def test_out_override(sweep_config, tmp_path):
    assert main(["run", str(sweep_config), "--out", str(tmp_path / "elsewhere"), "--alpha", "1.5"]) == 0
    assert (tmp_path / "elsewhere" / "trace_fdm_a1.5.csv").exists()


def test_config_error_exits_one(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text(SWEEP.replace("N = 10", "N = ten"))
    assert main(["run", str(bad)]) == 1
    assert "line 4, column 5" in capsys.readouterr().err


def test_empty_alpha_exits_one(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text(SWEEP.replace("alpha = 0.75, 1.25, 1.5, 1.75", "alpha = "))
    assert main(["run", str(bad)]) == 1


def test_bad_override_exits_one(sweep_config):
    assert main(["run", str(sweep_config), "--scheme", "spectral"]) == 1


def test_missing_file_exits_one(tmp_path):
    assert main(["run", str(tmp_path / "nope.cfg")]) == 1


def test_divergence_exits_two(tmp_path):
    cfg = tmp_path / "div.cfg"
    # N = 10 gives the bound h^2/2 = 0.005; 0.00525 is 5% above it
    cfg.write_text(
        "alpha = 1\nk_alpha = 1\nL = 1\nN = 10\nT = 20\ndt = 0.00525\nscheme = fdm\n"
        f"bc_left = 40\nbc_right = 20\noutput_dir = {tmp_path / 'out'}\n"
    )
    assert main(["run", str(cfg)]) == 2
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["members"][0]["diverged"] is True
    trace = (tmp_path / "out" / "trace_fdm_a1.0.csv").read_text().splitlines()
    assert 2 < len(trace) < 20 / 0.00525


def test_usage_error_exits_one(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1
