from nearly_infinity.nearly_infinity import (
    InfRep,
    NotAModule,
    NotNearly,
    ell,
    gamma,
    gamma_factorization,
    infinity_weights,
    is_bistable,
    natural_map,
    restrict,
    rr,
    simple_infinity,
)

__all__ = [
    "InfRep",
    "NotAModule",
    "NotNearly",
    "ell",
    "gamma",
    "gamma_factorization",
    "infinity_weights",
    "is_bistable",
    "natural_map",
    "restrict",
    "rr",
    "simple_infinity",
]
