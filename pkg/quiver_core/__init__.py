from quiver_core.families import atilde, cycle, dtilde4, jordan, kronecker, named_quiver, tube_simples
from quiver_core.quiver_core import (
    CONNECTING_ARROW,
    INFINITY,
    AffineData,
    Arrow,
    ArrowNameCollision,
    CyclicQuiver,
    DimVector,
    DisconnectedQuiver,
    Quiver,
    UnknownQuiver,
    VertexMismatch,
    Weights,
    affine_classify,
    defect,
    double_quiver,
    euler_form,
    inj_dim_vector,
    infinity_quiver,
    is_starred,
    opposite,
    proj_dim_vector,
    reorient_quiver,
    starred,
    symmetrized_form,
    weights_dot,
)

__all__ = [
    "AffineData",
    "Arrow",
    "ArrowNameCollision",
    "CONNECTING_ARROW",
    "CyclicQuiver",
    "DimVector",
    "DisconnectedQuiver",
    "INFINITY",
    "Quiver",
    "UnknownQuiver",
    "VertexMismatch",
    "Weights",
    "affine_classify",
    "atilde",
    "cycle",
    "defect",
    "double_quiver",
    "dtilde4",
    "euler_form",
    "inj_dim_vector",
    "infinity_quiver",
    "is_starred",
    "jordan",
    "kronecker",
    "named_quiver",
    "opposite",
    "proj_dim_vector",
    "reorient_quiver",
    "starred",
    "symmetrized_form",
    "tube_simples",
    "weights_dot",
]
