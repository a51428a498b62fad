import json
from datetime import datetime

import pytest

import main
from core import TaskResult


def _ok(task_type="run"):
    now = datetime.now()
    return TaskResult(success=True, task_type=task_type, message="ok", started_at=now, finished_at=now)


def test_run_writes_report(tmp_path):
    out = tmp_path / "reports" / "ex1.csv"
    code = main.main(["run", "--example", "ex1", "--n", "4,8", "--fixed-m", "4", "--out", str(out), "-q"])
    assert code == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "resolution,error,order,cpu_seconds"
    assert len(lines) == 3


def test_run_multiple_formats(tmp_path):
    out = tmp_path / "ex1.csv"
    code = main.main(["run", "--n", "4,8", "--fixed-m", "4", "--out", str(out), "--format", "csv,markdown", "-q"])
    assert code == 0
    assert (tmp_path / "ex1.md").exists()


def test_run_rejects_decreasing_resolutions(tmp_path):
    assert main.main(["run", "--n", "8,4", "--out", str(tmp_path / "r.csv"), "-q"]) == 1


def test_run_rejects_sigma_for_ex1(tmp_path):
    assert main.main(["run", "--refine", "sigma", "--out", str(tmp_path / "r.csv"), "-q"]) == 1


def test_malformed_resolution_list_exits():
    with pytest.raises(SystemExit):
        main.parse_args(["run", "--n", "16,abc"])


def test_unknown_format_exits():
    with pytest.raises(SystemExit):
        main.parse_args(["run", "--format", "csv,pdf"])


def test_run_from_config_file(tmp_path, mocker):
    path = tmp_path / "experiment.json"
    path.write_text(json.dumps({"example": "ex1", "alpha": 0.2, "beta": 1.2}), encoding="utf-8")
    execute = mocker.patch("main.execute_task", return_value=_ok())

    assert main.main(["run", "--config", str(path), "--backend", "stepping", "-q"]) == 0
    config = execute.call_args.kwargs["config"]
    assert (config.alpha, config.beta, config.backend) == (0.2, 1.2, "stepping")


def test_table_dispatch(mocker):
    execute = mocker.patch("main.execute_task", return_value=_ok("table"))
    assert main.main(["run", "--table", "3", "--format", "markdown", "-q"]) == 0
    args, kwargs = execute.call_args
    assert args == ("table",)
    assert kwargs["table"] == "3"
    assert kwargs["overrides"]["formats"] == ["markdown"]
    assert kwargs["overrides"]["alpha"] is None


def test_failed_task_returns_one(mocker):
    result = _ok()
    result.success = False
    mocker.patch("main.execute_task", return_value=result)
    assert main.main(["run", "-q"]) == 1


def test_unexpected_exception_returns_one(mocker):
    mocker.patch("main.dispatch", side_effect=RuntimeError("boom"))
    assert main.main(["verify", "-q"]) == 1


def test_verify_selected_suite(capsys):
    assert main.main(["verify", "--only", "dst_involution"]) == 0
    assert "dst_involution" in capsys.readouterr().out


def test_bench_settings_fall_back_to_config(mocker):
    execute = mocker.patch("main.execute_task", return_value=_ok("bench"))
    assert main.main(["bench", "--fast-n", "64,128", "-q"]) == 0
    settings = execute.call_args.kwargs["settings"]
    assert settings.fast_n == [64, 128]
    assert settings.stepping_n == [1024, 2048, 4096, 8192]
    assert settings.m == 16


def test_quiet_suppresses_summary_table(tmp_path, capsys):
    out = str(tmp_path / "r.csv")
    assert main.main(["run", "--n", "4,8", "--fixed-m", "4", "--out", out, "-q"]) == 0
    assert "| N | E | order | CPU (s) |" not in capsys.readouterr().out

    assert main.main(["run", "--n", "4,8", "--fixed-m", "4", "--out", out]) == 0
    assert "| N | E | order | CPU (s) |" in capsys.readouterr().out
