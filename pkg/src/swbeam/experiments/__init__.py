"""Seeded experiment studies and their result tables."""

from .config import (
    STUDY_ALIASES,
    ExperimentConfig,
    Study,
    build_experiment_config,
    load_experiment_config,
    parse_key_values,
)
from .runner import (
    FitRow,
    StudyResult,
    diameter_fits,
    run_diameter_sweep,
    run_rand_p_sweep,
    run_study,
    run_units,
    run_wfb_sweep,
)
from .tables import (
    read_fits,
    read_results,
    read_summary,
    reports_frame,
    summarize,
    summary_path,
    write_decision_logs,
    write_fits,
    write_results,
)

__all__ = [
    "STUDY_ALIASES",
    "ExperimentConfig",
    "FitRow",
    "Study",
    "StudyResult",
    "build_experiment_config",
    "diameter_fits",
    "load_experiment_config",
    "parse_key_values",
    "read_fits",
    "read_results",
    "read_summary",
    "reports_frame",
    "run_diameter_sweep",
    "run_rand_p_sweep",
    "run_study",
    "run_units",
    "run_wfb_sweep",
    "summarize",
    "summary_path",
    "write_decision_logs",
    "write_fits",
    "write_results",
]
