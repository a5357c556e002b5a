from harness_cli.cli import ExitCode, TrialReport, main, run_trials
from harness_cli.config import Config, InvalidSetting
from harness_cli.generators import (
    GenSpec,
    Infeasible,
    Mode,
    RetriesExhausted,
    gen_nearly,
    random_weights,
    weyl_matrices,
    weyl_pair,
    with_seed,
)
from harness_cli.serialization import (
    Instance,
    MalformedInstance,
    canonical_json,
    instance_from_json,
    instance_hash,
    instance_to_json,
    rep_from_json,
    rep_to_json,
)

__all__ = [
    "Config",
    "ExitCode",
    "GenSpec",
    "Infeasible",
    "Instance",
    "InvalidSetting",
    "MalformedInstance",
    "Mode",
    "RetriesExhausted",
    "TrialReport",
    "canonical_json",
    "gen_nearly",
    "instance_from_json",
    "instance_hash",
    "instance_to_json",
    "main",
    "random_weights",
    "rep_from_json",
    "rep_to_json",
    "run_trials",
    "weyl_matrices",
    "weyl_pair",
    "with_seed",
]
