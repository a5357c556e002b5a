from affine_structure.affine_structure import (
    Decomposition,
    NoLift,
    SummandClass,
    TubePartition,
    classify_dims,
    decompose,
    hom_lift,
    pri_split,
    tube_partition,
)

__all__ = [
    "Decomposition",
    "NoLift",
    "SummandClass",
    "TubePartition",
    "classify_dims",
    "decompose",
    "hom_lift",
    "pri_split",
    "tube_partition",
]
