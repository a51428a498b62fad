from .scheduler import (
    execute_task,
    run_experiment,
    run_table,
    run_verify,
    run_bench,
    register_processor,
    unregister_processor,
    clear_processors,
    summary_printer_processor,
    TaskResult,
    PostProcessor,
)


__all__ = [
    "execute_task",
    "run_experiment",
    "run_table",
    "run_verify",
    "run_bench",
    "register_processor",
    "unregister_processor",
    "clear_processors",
    "summary_printer_processor",
    "TaskResult",
    "PostProcessor",
]
