from rep_core.homological import (
    PhiMap,
    ext1_dim,
    hom_dim,
    hom_from_vector,
    hom_offsets,
    hom_space,
    intertwiner_system,
    phi_map,
)
from rep_core.rep_core import (
    Blocks,
    BudgetExhausted,
    DirectSum,
    InvalidSubrep,
    MomentDefect,
    PairRep,
    RelationClass,
    RelationReport,
    Representation,
    SearchBudget,
    ShapeMismatch,
    SubRep,
    classify_relation,
    conjugate,
    conjugate_pair,
    direct_sum,
    direct_sum_pairs,
    injective,
    moment_defect,
    moment_sums,
    nonzero_vertices,
    projective,
    quotient,
    random_rep,
    reorient,
    restrict_rep,
    simple,
    transpose_rep,
    zero_rep,
)
from rep_core.submodules import Certificate, NotSimple, Simple, simplicity, spin_submodule, verify_certificate

__all__ = [
    "Blocks",
    "BudgetExhausted",
    "Certificate",
    "DirectSum",
    "InvalidSubrep",
    "MomentDefect",
    "NotSimple",
    "PairRep",
    "PhiMap",
    "RelationClass",
    "RelationReport",
    "Representation",
    "SearchBudget",
    "ShapeMismatch",
    "Simple",
    "SubRep",
    "classify_relation",
    "conjugate",
    "conjugate_pair",
    "direct_sum",
    "direct_sum_pairs",
    "ext1_dim",
    "hom_dim",
    "hom_from_vector",
    "hom_offsets",
    "hom_space",
    "injective",
    "intertwiner_system",
    "moment_defect",
    "moment_sums",
    "nonzero_vertices",
    "phi_map",
    "projective",
    "quotient",
    "random_rep",
    "reorient",
    "restrict_rep",
    "simple",
    "simplicity",
    "spin_submodule",
    "transpose_rep",
    "verify_certificate",
    "zero_rep",
]
