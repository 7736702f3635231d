import csv
import io
import json
import math

import pytest

from ericsson import cli
from ericsson.cli import OutputTable, emit, main, parse_config, run

FLAGS = ["--omega0", "1", "--omegac", "0.5", "--gamma", "0.2", "--omegaD", "100", "--beta", "1"]


def parse_csv(text):
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            k, _, v = line[2:].partition(": ")
            meta[k] = v
        else:
            body.append(line)
    rows = list(csv.reader(io.StringIO("\n".join(body))))
    return meta, rows[0], rows[1:]


def parse_plotdata(text):
    """Blocks are separated by blank lines; '#' lines are comments."""
    blocks, current = [], []
    for line in text.splitlines():
        if not line.strip():
            if current:
                blocks.append(current)
            current = []
        elif not line.startswith("#"):
            current.append([v if v.startswith('"') else float(v) for v in line.split()])
    if current:
        blocks.append(current)
    return blocks


def invoke(tmp_path, *args, name="out"):
    path = tmp_path / name
    code = main([*args, "-o", str(path), "--no-timestamp"])
    return code, path.read_text() if path.exists() else None


def test_minimal_state_flags():
    config = parse_config(["state", *FLAGS])
    assert config.command == "state"
    assert config.params.beta == 1.0 and config.params.omegaD == 100.0


def test_state_values(tmp_path):
    code, text = invoke(tmp_path, "state", *FLAGS)
    assert code == 0
    meta, header, rows = parse_csv(text)
    row = dict(zip(header, rows[0]))
    assert float(row["free_energy"]) == pytest.approx(0.30421954186037333953, rel=1e-12)
    for k in ("omega0", "omegac", "gamma", "omegaD", "beta", "temperature", "version"):
        assert k in meta
    assert "timestamp" not in meta


def test_beta_and_temperature_conflict(capsys):
    assert main(["state", "--beta", "1", "--temperature", "2"]) == 2
    assert "usage" in capsys.readouterr().err


def test_unknown_command_and_bad_values(capsys):
    assert main(["bogus"]) == 2
    assert main(["state", "--gamma", "-1"]) == 2
    assert "gamma" in capsys.readouterr().err
    assert main(["state", "--format", "xml"]) == 2


def test_validate_default_grid(tmp_path):
    code, text = invoke(tmp_path, "validate")
    assert code == 0
    _, header, rows = parse_csv(text)
    status = [dict(zip(header, r))["status"] for r in rows]
    assert "fail" not in status and status.count("pass") >= 15


def test_cycle_golden(tmp_path):
    code, text = invoke(tmp_path, "cycle", "--gamma", "0.5", "--format", "json")
    assert code == 0
    obj = json.loads(text)
    row = obj["rows"][0]
    assert row["delta_w"] == pytest.approx(0.08062806026039016, rel=1e-10)
    assert row["delta_q"] == pytest.approx(0.885498142383464, rel=1e-10)
    assert row["eta"] == pytest.approx(0.09105390107693107, rel=1e-10)
    assert row["eta_carnot"] == 0.5 and row["engine"] is True
    assert obj["metadata"]["b2"] == 2.0 and obj["metadata"]["gamma"] == 0.5


def test_one_row_round_trip():
    t = OutputTable(["a", "b", "flag", "note"], metadata={"seed": 3})
    t.add(math.pi, -1.0e-300, True, None)
    meta, header, rows = parse_csv(emit(t, "csv").decode())
    assert header == t.columns and meta == {"seed": "3"}
    assert float(rows[0][0]) == pytest.approx(math.pi, rel=1e-12)
    assert float(rows[0][1]) == pytest.approx(-1e-300, rel=1e-12)
    assert rows[0][2:] == ["true", ""]
    obj = json.loads(emit(t, "json"))
    assert obj["rows"][0] == {"a": math.pi, "b": -1e-300, "flag": True, "note": None}


def test_empty_table_is_valid():
    t = OutputTable(["x", "y"], metadata={"k": 1})
    meta, header, rows = parse_csv(emit(t, "csv").decode())
    assert header == ["x", "y"] and rows == []
    assert json.loads(emit(t, "json"))["rows"] == []
    assert parse_plotdata(emit(t, "plotdata").decode()) == []


def test_sweep_plotdata_blocks(tmp_path):
    code, text = invoke(tmp_path, "sweep", "--format", "plotdata")
    assert code == 0
    blocks = parse_plotdata(text)
    # default grid: 3 values of t_hot, 7 of b2
    assert len(blocks) == 3
    cols = [c for c in text.splitlines() if c.startswith("# gamma b1")][0][2:].split()
    ih, ib = cols.index("t_hot"), cols.index("b2")
    assert [b[0][ih] for b in blocks] == [0.75, 1.375, 2.0]
    for b in blocks:
        assert len(b) == 7 and len({r[ih] for r in b}) == 1
        assert [r[ib] for r in b] == [1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0]


def test_sweep_single_point_and_svg(tmp_path):
    code, text = invoke(tmp_path, "sweep", "--t-hot", "1", "--b2", "2")
    assert code == 0
    _, header, rows = parse_csv(text)
    assert len(rows) == 1
    code, svg = invoke(tmp_path, "sweep", "--format", "svg", name="p.svg")
    assert code == 0 and svg.startswith("<svg") and svg.count("<polyline") == 3


def test_reproducible_bytes(tmp_path):
    args = ("langevin-traj", "--gamma", "0.5", "--omegaD", "10", "--t-end", "0.5", "--seed", "7")
    a = invoke(tmp_path, *args, name="a")
    b = invoke(tmp_path, *args, name="b")
    assert a[0] == 0 and a[1] == b[1]


def test_config_file_and_override(tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text("[run]\ncommand = state\n\n[params]\ngamma = 0.3\ntemperature = 2  ; T\n")
    config = parse_config(["--config", str(ini)])
    assert config.command == "state" and config.params.gamma == 0.3 and config.params.beta == 0.5
    config = parse_config(["--config", str(ini), "--gamma", "0.7"])
    assert config.params.gamma == 0.7
    ini.write_text("[params]\ngama = 0.3\n")
    with pytest.raises(cli.UsageError, match="gama"):
        parse_config(["--config", str(ini), "state"])


def test_trajectory_ensemble_and_errors(tmp_path):
    code, text = invoke(
        tmp_path, "langevin-traj", "--gamma", "0.5", "--omegaD", "10", "--t-end", "0.5", "--n-traj", "4"
    )
    assert code == 0
    _, _, rows = parse_csv(text)
    assert len(rows) == 4
    code, _ = invoke(tmp_path, "langevin-traj", "--dt", "1", "--t-end", "1")
    assert code == 2


def test_moments_command(tmp_path):
    code, text = invoke(tmp_path, "langevin-moments", "--format", "json")
    assert code == 0
    row = json.loads(text)["rows"][0]
    assert row["xx"] == pytest.approx(row["yy"], rel=1e-8)


def test_run_returns_table():
    table, status = run(parse_config(["state", *FLAGS, "--no-timestamp"]))
    assert status == 0 and len(table.rows) == 1
    assert len(table.columns) == len(table.rows[0])
