"""Factored speedup measurement for fork-join programs.

Thin Python layer over the C++ core. Times are in seconds.
"""

import os
import shutil

from ._facspeed import *  # noqa: F401,F403
from ._facspeed import ExperimentPlan, load_results, run_experiment as _run_experiment, speedup_curves

__all__ = [name for name in dir() if not name.startswith("_")]


def cli_path():
    """Path of the facspeed executable used for isolated runs, or None."""
    override = os.environ.get("FACSPEED_CLI")
    if override:
        return override
    bundled = os.path.join(os.path.dirname(__file__), "bin", "facspeed")
    if os.access(bundled, os.X_OK):
        return bundled
    return shutil.which("facspeed")


def run_experiment(plan, child_executable=None, oversubscribe=False):
    """Run `plan`; isolated plans use the bundled CLI unless told otherwise."""
    if child_executable is None:
        child_executable = cli_path() or ""
    return _run_experiment(plan, child_executable=child_executable, oversubscribe=oversubscribe)


def make_plan(benchmark_id, procs, params=None, reps=5, warmup_runs=1, adaptive_t1=False, isolate=True,
              output_path=""):
    plan = ExperimentPlan()
    plan.benchmark_id = benchmark_id
    plan.procs = list(procs)
    plan.params = {k: str(v) for k, v in (params or {}).items()}
    plan.reps = reps
    plan.warmup_runs = warmup_runs
    plan.adaptive_t1 = adaptive_t1
    plan.isolate = isolate
    plan.output_path = output_path
    return plan


def curves_from_file(path):
    results = load_results(path)
    if results.summary is None:
        raise ValueError(f"{path}: results have no summary")
    return speedup_curves(results.summary)
