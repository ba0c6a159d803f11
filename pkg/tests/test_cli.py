"""CLI behaviour: exit codes, report schema, determinism of emitted files."""

import json
import os

import pytest

from thetakit.cli import (EXIT_CONFIG_ERROR, EXIT_PASS, main)
from thetakit.errors import ConfigError
from thetakit.suite import CSV_HEADER, RunConfig, run_figures

SMALL = ["--t-lo", "0.3", "--t-hi", "0.8", "--t-count", "3", "--x-grid", "24"]


def test_config_validation_rejects_bad_values(tmp_path):
    with pytest.raises(ConfigError):
        RunConfig(t_lo=0.0)
    with pytest.raises(ConfigError):
        RunConfig(t_hi=0.01)
    with pytest.raises(ConfigError):
        RunConfig(t_spacing="cubic")
    with pytest.raises(ConfigError):
        RunConfig(uv_pairs=((0.4, 0.4),))
    with pytest.raises(ConfigError):
        RunConfig(uv_pairs=())
    with pytest.raises(ConfigError):
        RunConfig(x_grid_n=1)
    with pytest.raises(ConfigError):
        RunConfig(delta=0.3)
    with pytest.raises(ConfigError):
        RunConfig(K=99)
    with pytest.raises(ConfigError):
        RunConfig(formats=("xml",))


def test_cli_rejects_bad_config(tmp_path, capsys):
    assert main(["verify", "--t-lo", "-1", "--out", str(tmp_path)]) == EXIT_CONFIG_ERROR
    assert main(["verify", "--uv", "0.5,0.4", "--out", str(tmp_path)]) == EXIT_CONFIG_ERROR
    err = capsys.readouterr().err
    assert "configuration error" in err


def test_cli_verify_small_run(tmp_path, capsys):
    rc = main(["verify", *SMALL, "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert rc == EXIT_PASS
    assert "global status: pass" in out
    assert out.count("[PASS]") == 14
    report = json.loads((tmp_path / "verify_report.json").read_text())
    assert set(report) == {"version", "config_echo", "checks", "global_status"}
    assert report["global_status"] == "pass"
    assert len(report["checks"]) == 14
    for check in report["checks"]:
        assert set(check) == {"check_id", "claim", "params", "status",
                              "worst_margin", "violation_count", "detail"}


def test_cli_conjecture_clean_window(tmp_path, capsys):
    # away from small t and with low order the alternation holds; this also
    # exercises the report path
    rc = main(["conjecture", "--t-lo", "0.8", "--t-hi", "2.0", "--t-count", "4",
               "--order-k", "2", "--uv", "0.2,0.8", "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert rc == EXIT_PASS
    report = json.loads((tmp_path / "conjecture_report.json").read_text())
    assert len(report["checks"]) == 4          # one per j
    assert all("EVIDENCE" in c["claim"] for c in report["checks"])


def test_cli_figures_and_determinism(tmp_path):
    args = ["figures", "--t-count", "12", "--x-grid", "16"]
    d1, d2 = tmp_path / "a", tmp_path / "b"
    assert main([*args, "--out", str(d1)]) == EXIT_PASS
    assert main([*args, "--out", str(d2)]) == EXIT_PASS
    names = sorted(os.listdir(d1))
    assert names == [f"fig{i}.csv" for i in range(1, 7)]
    for name in names:
        b1 = (d1 / name).read_bytes()
        assert b1 == (d2 / name).read_bytes()
        header = b1.decode().splitlines()[0]
        assert header == ",".join(CSV_HEADER)


def test_report_json_deterministic(tmp_path):
    # identical config (including output_dir, which is echoed in the report)
    # must produce byte-identical JSON
    out = tmp_path / "report"
    assert main(["verify", *SMALL, "--out", str(out)]) == EXIT_PASS
    first = (out / "verify_report.json").read_bytes()
    (out / "verify_report.json").unlink()
    assert main(["verify", *SMALL, "--out", str(out)]) == EXIT_PASS
    assert (out / "verify_report.json").read_bytes() == first


def test_figures_require_csv_format():
    with pytest.raises(ConfigError):
        run_figures(RunConfig(formats=("json",)))


def test_figures_uv_override(tmp_path):
    config = RunConfig(t_count=5, x_grid_n=8, uv_pairs=((0.3, 0.6),),
                       output_dir=str(tmp_path))
    run_figures(config)
    line = (tmp_path / "fig1.csv").read_text().splitlines()[1]
    fields = line.split(",")
    assert float(fields[3]) == 0.3 and float(fields[4]) == 0.6
