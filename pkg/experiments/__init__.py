from .manufactured import (
    ManufacturedProblem,
    example_1,
    example_2,
    example_3,
    low_regularity,
    manufactured_problem,
    EXAMPLES,
)
from .refinement import (
    ExperimentConfig,
    ConvergenceRow,
    ConvergenceReport,
    observed_order,
    max_error,
    l2_error,
    run_refinement,
)
from .report_writer import emit_report, emit_reports, format_markdown, report_paths
from .verification import CheckResult, continuous_residual, run_verification
from .benchmark import BenchReport, BenchSettings, run_benchmark, format_bench
from .tables import TABLE_PRESETS, merge_overrides, table_overrides


__all__ = [
    "ManufacturedProblem",
    "example_1",
    "example_2",
    "example_3",
    "low_regularity",
    "manufactured_problem",
    "EXAMPLES",
    "ExperimentConfig",
    "ConvergenceRow",
    "ConvergenceReport",
    "observed_order",
    "max_error",
    "l2_error",
    "run_refinement",
    "emit_report",
    "emit_reports",
    "format_markdown",
    "report_paths",
    "CheckResult",
    "continuous_residual",
    "run_verification",
    "BenchReport",
    "BenchSettings",
    "run_benchmark",
    "format_bench",
    "TABLE_PRESETS",
    "table_overrides",
    "merge_overrides",
]
