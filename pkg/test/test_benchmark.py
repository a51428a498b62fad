import copy

from config.settings import DEFAULT_CONFIG
from experiments.benchmark import BenchReport, BenchRow, BenchSettings, format_bench, run_benchmark, time_backend


def test_settings_from_config(mocker):
    config = copy.deepcopy(DEFAULT_CONFIG)
    config["bench"] = {"fast_n": ["8", 16], "stepping_n": [8], "m": "4"}
    mocker.patch("experiments.benchmark.get_config", return_value=config)
    assert BenchSettings.from_config() == BenchSettings(fast_n=[8, 16], stepping_n=[8], m=4)


def test_time_backend_ratios():
    rows = time_backend("fast", [8, 16, 32], m=4)
    assert [row.n for row in rows] == [8, 16, 32]
    assert rows[0].ratio is None
    assert all(row.seconds >= 0 for row in rows)


def test_run_benchmark_small():
    report = run_benchmark(BenchSettings(fast_n=[8, 16], stepping_n=[8, 16], m=4))
    assert [row.backend for row in report.rows] == ["fast", "fast", "stepping", "stepping"]
    assert report.m == 4


def test_format_bench():
    report = BenchReport(m=4, rows=[BenchRow("fast", 8, 0.5), BenchRow("fast", 16, 1.0, ratio=2.0)])
    lines = format_bench(report).splitlines()
    assert lines[0].split() == ["backend", "N", "seconds", "ratio"]
    assert lines[2].split() == ["fast", "8", "0.5000", "--"]
    assert lines[3].split() == ["fast", "16", "1.0000", "2.00"]
    assert report.ratios("fast") == [2.0]
