"""Weights on the cycle quiver attached to one tube of an affine quiver."""

import logging
import os
from dataclasses import dataclass
from typing import Any

from quiver_core import Quiver, Weights, affine_classify, euler_form, weights_dot

log = logging.getLogger("preproj.theorem_engine")
log.setLevel(os.getenv("PREPROJ_LOG_LEVEL", "INFO"))


class BadTubeData(ValueError):
    def __init__(self, reason: str):
        self.reason = reason

    def __str__(self):
        return f"Tube data rejected: {self.reason}."


@dataclass(frozen=True, eq=False)
class TubeReductionData:
    lam_prime: list
    delta_prime: list
    v_prime: int
    S_dims: list
    P_dims: list | None

    def to_json(self, field) -> dict:
        return {
            "lambda_prime": [field.encode(x) for x in self.lam_prime],
            "delta_prime": self.delta_prime,
            "v_prime": self.v_prime,
        }


def reduced_weights(lam: Weights, P_dims: list | None, S_dims: list, Q: Quiver, v: Any) -> TubeReductionData:
    """lambda'_j = sum_i lambda_i <dim P(i), dim S_j> on the cycle with one vertex per regular simple S_j.

    P_dims lists dim P(i) in vertex order. For a quiver with oriented cycles pass None: the pairing with a
    projective at i is then read off as the i-th coordinate.
    """
    v = str(v)
    lam = {str(u): x for u, x in lam.items()}
    S_dims = [Q.dim_vector(S) for S in S_dims]
    aff = affine_classify(Q)
    if not aff.is_affine:
        raise BadTubeData("the quiver is not affine")
    total = {u: sum(S[u] for S in S_dims) for u in Q.vertices}
    if total != aff.delta:
        raise BadTubeData(f"the regular simples sum to {total}, not delta = {aff.delta}")
    if P_dims is not None and len(P_dims) != len(Q.vertices):
        raise BadTubeData(f"{len(P_dims)} projective dimension vectors for {len(Q.vertices)} vertices")

    def pairing(i: int, S: dict) -> int:
        if P_dims is None:
            return S[Q.vertices[i]]
        return euler_form(Q, P_dims[i], S)

    lam_prime = []
    for S in S_dims:
        terms = [lam[u] * pairing(i, S) for i, u in enumerate(Q.vertices)]
        total_weight = terms[0]
        for t in terms[1:]:
            total_weight = total_weight + t
        lam_prime.append(total_weight)

    at_v = [pairing(Q.index(v), S) for S in S_dims]
    selected = [j for j, x in enumerate(at_v) if x == 1]
    if len(selected) != 1 or sum(at_v) != 1:
        raise BadTubeData(f"<dim P({v}), S_j> = {at_v} does not single out one simple")
    delta_prime = [1] * len(S_dims)

    expected = weights_dot(lam, aff.delta)
    summed = lam_prime[0]
    for x in lam_prime[1:]:
        summed = summed + x
    if summed != expected:
        log.error(f"reduced_weights: lambda' . delta' = {summed} but lambda . delta = {expected}")
        raise AssertionError("reduced weights do not preserve lambda . delta")
    log.debug(f"reduced_weights: v'={selected[0]} over {len(S_dims)} simples")
    return TubeReductionData(lam_prime, delta_prime, selected[0], S_dims, P_dims)
