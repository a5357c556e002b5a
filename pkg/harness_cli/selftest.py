"""Embedded invariant suite for `preproj selftest`; each check is small enough to run in a few seconds."""

import logging
import os
from typing import Callable

import numpy as np

from exact_linalg import FieldSpec, equal, matmul, trace
from harness_cli.generators import GenSpec, gen_nearly, weyl_matrices
from nearly_infinity import ell, restrict
from quiver_core import double_quiver, euler_form, named_quiver
from rep_core import PairRep, classify_relation, ext1_dim, hom_dim, moment_sums, random_rep
from theorem_engine import nontrivial_submodule

log = logging.getLogger("preproj.selftest")
log.setLevel(os.getenv("PREPROJ_LOG_LEVEL", "INFO"))

CHECKS: dict[str, Callable[[int], bool]] = {}


def check(fn):
    CHECKS[fn.__name__] = fn
    return fn


@check
def moment_trace_vanishes(seed: int) -> bool:
    Q, F = named_quiver("dtilde4"), FieldSpec.parse("gf:5")
    rng = np.random.default_rng(seed)
    dims = {u: int(rng.integers(1, 3)) for u in Q.vertices}
    R = PairRep(Q, random_rep(double_quiver(Q), F, dims, rng))
    return sum(trace(M) for M in moment_sums(R).values()) == 0


@check
def euler_form_matches_hom_ext(seed: int) -> bool:
    Q, F = named_quiver("kronecker"), FieldSpec.parse("gf:3")
    rng = np.random.default_rng(seed)
    M = random_rep(Q, F, {u: int(rng.integers(0, 3)) for u in Q.vertices}, rng)
    N = random_rep(Q, F, {u: int(rng.integers(0, 3)) for u in Q.vertices}, rng)
    return hom_dim(M, N) - ext1_dim(Q, M, N) == euler_form(Q, M.dims, N.dims)


@check
def weyl_commutator(seed: int) -> bool:
    F = FieldSpec.parse("gf:3")
    x, y = weyl_matrices(F, 3)
    return equal(matmul(x, y) - matmul(y, x), F.identity(3))


def _kronecker_instance(seed: int):
    Q, F = named_quiver("kronecker"), FieldSpec.parse("gf:5")
    spec = GenSpec.multiple_of_delta(Q, F, 2, seed=seed)
    return gen_nearly(spec), spec


@check
def generated_instance_is_nearly(seed: int) -> bool:
    R, spec = _kronecker_instance(seed)
    return classify_relation(R, spec.weights, spec.vertex).is_nearly


@check
def ell_restricts_back(seed: int) -> bool:
    R, spec = _kronecker_instance(seed)
    return restrict(ell(R, spec.weights, spec.vertex)).equals(R)


@check
def submodule_witness_verifies(seed: int) -> bool:
    R, spec = _kronecker_instance(seed)
    return nontrivial_submodule(R, spec.weights, spec.vertex, seed=seed).verify()


def run(seed: int = 0) -> list[dict]:
    results = []
    for name, fn in CHECKS.items():
        try:
            passed, detail = bool(fn(seed)), None
        except Exception as e:
            log.exception(f"selftest {name} raised")
            passed, detail = False, f"{type(e).__name__}: {e}"
        log.debug(f"selftest {name}: {passed=}")
        results.append({"name": name, "passed": passed, "detail": detail})
    return results
