import csv
import io
import json

import pytest

from riswpc import analytic
from riswpc.cli import main, parse_grid, read_config, UsageError
from riswpc.experiment import CSV_COLUMNS
from riswpc.params import SystemParams


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analytic_protocol_point(capsys):
    code, out, _ = run(capsys, "analytic", "--m", "50", "--pb-dbm", "10", "--alpha", "0.4", "--eta", "0.85", "--r", "1.2")
    assert code == 0
    rec = json.loads(out)
    p = SystemParams(m=50, p_b_dbm=10.0)
    assert rec["rate"] == pytest.approx(analytic.ergodic_rate(p), rel=1e-9)
    assert rec["outage"] == pytest.approx(analytic.outage_probability(p), rel=1e-9)
    assert rec["log10_outage"] < -200


def test_analytic_csv_and_zeta_db(capsys):
    code, out, _ = run(capsys, "analytic", "--m", "4", "--zeta-db", "-10", "--format", "csv")
    assert code == 0
    [rec] = list(csv.DictReader(io.StringIO(out)))
    assert float(rec["zeta"]) == pytest.approx(0.1)


@pytest.mark.parametrize("argv", [
    ["analytic", "--bogus"],
    ["analytic", "--alpha", "1.5"],
    ["analytic", "--zeta", "0.1", "--zeta-db", "-10"],
    ["analytic", "--pb-dbm", "10,35"],
    ["frobnicate"],
    [],
    ["sweep", "--var", "bandwidth", "--grid", "1,2"],
    ["sweep", "--var", "alpha"],
    ["sweep", "--grid", "10:5:1"],
    ["simulate", "--trials", "0"],
])
def test_usage_errors_exit_1(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert out == ""
    assert "usage" in err


def test_numerical_failure_exits_2(capsys, monkeypatch):
    import riswpc.cli as cli

    def boom(*a, **k):
        raise FloatingPointError("overflow in trial 3")

    monkeypatch.setattr(cli, "simulate_outage", boom)
    code, out, err = run(capsys, "simulate", "--trials", "10")
    assert code == 2
    assert "numerical failure" in err and "overflow in trial 3" in err


FLAGS = {
    "analytic": ["--m", "--pb-dbm", "--alpha", "--tau-c", "--eta", "--r", "--zeta", "--zeta-db",
                 "--sigma2-dbm", "--rate-time-fraction", "--config", "--format", "--out"],
    "simulate": ["--trials", "--seed", "--chunk-size"],
    "sweep": ["--var", "--grid", "--trials", "--seed", "--chunk-size"],
    "validate": ["--trials", "--seed", "--chunk-size", "--format", "--out"],
}


@pytest.mark.parametrize("cmd", list(FLAGS))
def test_help_lists_flags(capsys, cmd):
    code, out, _ = run(capsys, cmd, "--help")
    assert code == 0
    flags = FLAGS[cmd] + (FLAGS["analytic"] if cmd in ("simulate", "sweep") else [])
    for flag in flags:
        assert flag in out, flag
    if cmd != "validate":
        assert "dBm" in out and "bit/s/Hz" in out


def test_simulate_record(capsys):
    code, out, _ = run(capsys, "simulate", "--m", "4", "--sigma2-dbm", "-10", "--trials", "20000", "--seed", "3")
    assert code == 0
    rec = json.loads(out)
    assert rec["trials"] == 20000 and rec["seed"] == 3
    assert abs(rec["outage_mc"] - rec["outage"]) < 0.02
    assert rec["outage_mc_wilson_low"] <= rec["outage_mc"] <= rec["outage_mc_wilson_high"]


def test_sweep_figure_tables(capsys):
    code, out, _ = run(capsys, "sweep", "--var", "m", "--grid", "10:100:10", "--pb-dbm", "10,35", "--format", "csv")
    assert code == 0
    recs = list(csv.DictReader(io.StringIO(out)))
    assert tuple(recs[0]) == CSV_COLUMNS
    assert len(recs) == 20
    lo = [float(r["rate_analytic"]) for r in recs if r["variable"] == "m[p_b_dbm=10]"]
    hi = [float(r["rate_analytic"]) for r in recs if r["variable"] == "m[p_b_dbm=35]"]
    assert len(lo) == len(hi) == 10 and all(h > l for l, h in zip(lo, hi))
    assert all(r["outage_mc"] == "" for r in recs)


def test_sweep_with_mc_and_pb_variable(capsys):
    code, out, _ = run(capsys, "sweep", "--var", "p_b", "--grid=-80,-70", "--m", "4", "--trials", "2000")
    assert code == 0
    rows = json.loads(out)
    assert [r["value"] for r in rows] == [-80.0, -70.0]
    assert rows[0]["trials"] == 2000 and rows[0]["outage_mc"] is not None


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "link.conf"
    cfg.write_text("# link\nm = 8\npb-dbm = 20\nsigma2_dbm=-40  # noisy\nrate_time_fraction = yes\n")
    code, out, _ = run(capsys, "analytic", "--config", str(cfg), "--m", "16")
    rec = json.loads(out)
    assert code == 0
    assert rec["m"] == 16 and rec["p_b_dbm"] == 20.0 and rec["sigma2_dbm"] == -40.0
    assert rec["rate_time_fraction"] is True
    p = SystemParams(m=16, p_b_dbm=20.0, sigma2_dbm=-40.0)
    assert rec["rate"] == pytest.approx(0.6 * analytic.ergodic_rate(p), rel=1e-9)


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.conf"
    cfg.write_text("bandwidth = 20\n")
    with pytest.raises(UsageError):
        read_config(str(cfg))
    code, _, err = run(capsys, "analytic", "--config", str(cfg))
    assert code == 1 and "bandwidth" in err


def test_parse_grid():
    assert parse_grid("10:100:10") == [10.0 * i for i in range(1, 11)]
    assert parse_grid("0.1:0.5:0.1") == [0.1, 0.2, 0.3, 0.4, 0.5]
    assert parse_grid("1, 2.5,4") == [1.0, 2.5, 4.0]
    with pytest.raises(UsageError):
        parse_grid("1:2")


def test_out_file_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", "--grid", "1,2,4", "--sigma2-dbm", "-20", "--trials", "5000", "--seed", "11", "--format", "csv"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b), "--workers", "4"]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith(",".join(CSV_COLUMNS))
