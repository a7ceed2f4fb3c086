from .config import (AGENT_KINDS, ALL_KINDS, BASELINE_KINDS, PRESETS,
                     ExperimentConfig, large_sweep, small_sweep)
from .csvio import HEADER, RunRecord, append_row, existing_keys, read_records
from .runner import (AggregateRow, aggregate, build_channel_params,
                     build_geometry, evaluate_policy, make_agent, run_single,
                     run_sweep, train_agent)
from .selftest import CheckResult, run_selftest

__all__ = [
    "AGENT_KINDS", "ALL_KINDS", "BASELINE_KINDS", "PRESETS", "HEADER",
    "AggregateRow", "CheckResult", "ExperimentConfig", "RunRecord",
    "aggregate", "append_row", "build_channel_params", "build_geometry",
    "evaluate_policy", "existing_keys", "large_sweep", "make_agent",
    "read_records", "run_selftest", "run_single", "run_sweep", "small_sweep",
    "train_agent",
]
