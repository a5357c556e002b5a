from theorem_engine.reduction import BadTubeData, TubeReductionData, reduced_weights
from theorem_engine.theorem_engine import (
    CaseFailed,
    ExtensionRequired,
    Hypothesis,
    HypothesisViolated,
    NotACycle,
    PreconditionFailed,
    Provenance,
    SingleTube,
    SubmoduleWitness,
    TheoremAssertionFailed,
    TraceCheck,
    delta_multiple,
    find_submodule_cycle,
    find_submodule_ext_split,
    find_submodule_multitube,
    find_submodule_nonregular,
    find_submodule_weyl,
    hom_lift_contradiction,
    nontrivial_submodule,
)

__all__ = [
    "BadTubeData",
    "CaseFailed",
    "ExtensionRequired",
    "Hypothesis",
    "HypothesisViolated",
    "NotACycle",
    "PreconditionFailed",
    "Provenance",
    "SingleTube",
    "SubmoduleWitness",
    "TheoremAssertionFailed",
    "TraceCheck",
    "TubeReductionData",
    "delta_multiple",
    "find_submodule_cycle",
    "find_submodule_ext_split",
    "find_submodule_multitube",
    "find_submodule_nonregular",
    "find_submodule_weyl",
    "hom_lift_contradiction",
    "nontrivial_submodule",
    "reduced_weights",
]
