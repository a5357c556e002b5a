from exact_linalg.exact_linalg import (
    CharRoots,
    FieldMismatchError,
    RankKerIm,
    RootsUnavailable,
    SingularMatrix,
    Solution,
    Subspace,
    apply,
    block_diag,
    char_roots,
    charpoly,
    columns,
    eigenvalue,
    embed,
    equal,
    fitting,
    hstack,
    inverse,
    irreducible_factor,
    irreducible_factors,
    is_zero,
    kernel,
    kron,
    matmul,
    matrix_power,
    poly_eval,
    random_invertible,
    rank,
    rank_ker_im,
    rref,
    same_field,
    solve_affine,
    span,
    spin,
    trace,
    unvec,
    vec,
    vstack,
)
from exact_linalg.fields import RATIONALS, FieldKind, FieldSpec, IncompatibleFields, InvalidFieldSpec, field_of

__all__ = [
    "CharRoots",
    "FieldKind",
    "FieldMismatchError",
    "FieldSpec",
    "IncompatibleFields",
    "InvalidFieldSpec",
    "RATIONALS",
    "RankKerIm",
    "RootsUnavailable",
    "SingularMatrix",
    "Solution",
    "Subspace",
    "apply",
    "block_diag",
    "char_roots",
    "charpoly",
    "columns",
    "eigenvalue",
    "embed",
    "equal",
    "field_of",
    "fitting",
    "hstack",
    "inverse",
    "irreducible_factor",
    "irreducible_factors",
    "is_zero",
    "kernel",
    "kron",
    "matmul",
    "matrix_power",
    "poly_eval",
    "random_invertible",
    "rank",
    "rank_ker_im",
    "rref",
    "same_field",
    "solve_affine",
    "span",
    "spin",
    "trace",
    "unvec",
    "vec",
    "vstack",
]
