"""Seeded generators of nearly representations and of the characteristic-p Weyl pair.

Every generator draws from one numpy Generator (PCG64) seeded by GenSpec.seed, so a spec determines its instance.
"""

import dataclasses
import enum
import logging
import os
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from exact_linalg import (
    FieldSpec,
    apply,
    block_diag,
    hstack,
    inverse,
    irreducible_factor,
    kernel,
    kron,
    matmul,
    poly_eval,
    random_invertible,
    solve_affine,
    unvec,
    vec,
)
from nearly_infinity import InfRep, restrict
from quiver_core import INFINITY, AffineData, Quiver, affine_classify, infinity_quiver, jordan, weights_dot
from rep_core import (
    PairRep,
    Representation,
    classify_relation,
    conjugate_pair,
    direct_sum_pairs,
    hom_space,
    phi_map,
    random_rep,
)

log = logging.getLogger("preproj.harness_cli")
log.setLevel(os.getenv("PREPROJ_LOG_LEVEL", "INFO"))

RNG_ALGORITHM = "PCG64"


class Infeasible(ValueError):
    def __init__(self, reason: str):
        self.reason = reason

    def __str__(self):
        return f"No instance can be generated: {self.reason}."


class RetriesExhausted(RuntimeError):
    def __init__(self, mode: str, retries: int):
        self.mode = mode
        self.retries = retries

    def __str__(self):
        return f"{self.mode} produced no instance in {self.retries} attempts."


class Mode(str, enum.Enum):
    SOLVE_NEARLY = "SolveNearly"
    CONJUGATED_SUM = "ConjugatedSum"
    ELL_LIFT = "EllLift"
    WEYL_SUM = "WeylSum"


def random_weights(Q: Quiver, field: FieldSpec, delta: dict, vertex: str, rng: np.random.Generator) -> dict:
    """Random weights with lambda . delta = 0, solved for at `vertex` (delta there must be invertible)."""
    lam = {u: field.random_scalar(rng) for u in Q.vertices if u != vertex}
    rest = weights_dot(lam, delta) if lam else field.zero()
    lam[vertex] = -rest / field.scalar(delta[vertex])
    return {u: lam[u] for u in Q.vertices}


@dataclass(frozen=True, eq=False)
class GenSpec:
    quiver: Quiver
    vertex: str
    lam: dict
    dims: dict
    field: FieldSpec
    seed: int = 0
    mode: Mode = Mode.SOLVE_NEARLY
    retries: int = 20

    def __post_init__(self):
        object.__setattr__(self, "vertex", str(self.vertex))
        object.__setattr__(self, "dims", self.quiver.dim_vector(self.dims))
        object.__setattr__(self, "lam", {str(u): x for u, x in self.lam.items()})
        object.__setattr__(self, "mode", Mode(self.mode))
        if any(d < 0 for d in self.dims.values()):
            raise ValueError(f"dimension vector {self.dims} has a negative entry")
        if self.vertex not in self.quiver.vertices:
            raise ValueError(f"vertex {self.vertex!r} is not a vertex of the quiver")

    @classmethod
    def multiple_of_delta(
        cls,
        Q: Quiver,
        field: FieldSpec,
        m: int,
        seed: int = 0,
        mode: Mode = Mode.SOLVE_NEARLY,
        vertex: Any = None,
        lam: dict | None = None,
        retries: int = 20,
    ) -> "GenSpec":
        """Dimension vector m * delta at an extending vertex, with random weights orthogonal to delta."""
        aff = affine_classify(Q)
        if not aff.is_affine:
            raise Infeasible("the quiver is not affine")
        vertex = aff.extending_vertices[0] if vertex is None else str(vertex)
        if lam is None:
            lam = random_weights(Q, field, aff.delta, vertex, np.random.default_rng(seed))
        dims = {u: m * d for u, d in aff.delta.items()}
        return cls(Q, vertex, lam, dims, field, seed, mode, retries)

    @property
    def weights(self) -> dict:
        return {u: self.field.scalar(self.lam[u]) for u in self.quiver.vertices}

    def to_json(self) -> dict:
        return {
            "quiver": self.quiver.to_json(),
            "vertex": self.vertex,
            "lambda": {u: self.field.encode(x) for u, x in self.weights.items()},
            "dims": self.dims,
            "field": self.field.to_json(),
            "seed": self.seed,
            "mode": self.mode.value,
            "rng": RNG_ALGORITHM,
        }


# the linear system for xi


def _solve_pair(X: Representation, weights: dict, v: str | None, x, rng: np.random.Generator) -> PairRep | None:
    """A random xi with Phi_XX(xi) = lambda 1 + (x y^T at v); y is a further unknown when x is given."""
    F = X.field
    phi = phi_map(X, X)
    A = phi.matrix
    b = F.zeros(A.shape[0])
    for u, rows, cols, start in phi.codomain:
        b[start : start + rows * cols] = vec(F.identity(rows) * weights[u])
    if x is not None:
        n = X.dims[v]
        perturbation = F.zeros(A.shape[0], n)
        start = next(s for u, _, _, s in phi.codomain if u == v)
        perturbation[start : start + n * n, :] = -kron(F.identity(n), x.reshape(-1, 1))
        A = hstack([A, perturbation], field=F, rows=A.shape[0])
    solution = solve_affine(A, b)
    if solution is None:
        return None
    unknowns = solution.particular
    if solution.nullspace.dim:
        unknowns = unknowns + apply(solution.nullspace.basis, F.random_matrix(rng, solution.nullspace.dim))
    xi = {name: unvec(unknowns[start : start + rows * cols], rows, cols) for name, rows, cols, start in phi.domain}
    return PairRep.from_rep(X.quiver, X, xi)


def _pick_vector(X: Representation, v: str, rng: np.random.Generator, shrink: bool):
    """A nonzero vector of X_v; with `shrink`, one from a generalized eigenspace of a random endomorphism.

    The solver needs y orthogonal to End(X) x, so a vector with a small End(X)-orbit leaves room for y != 0.
    """
    F = X.field
    n = X.dims[v]
    x = F.random_matrix(rng, n)
    if shrink:
        phi = F.zeros(n, n)
        for f in hom_space(X, X):
            phi = phi + f[v] * F.random_scalar(rng)
        null = kernel(poly_eval(irreducible_factor(phi), phi))
        x = apply(null.basis, F.random_matrix(rng, null.dim))
    if not np.any(x != 0):
        x[int(rng.integers(0, n))] = F.one()
    return x


def _solve_nearly(
    Q: Quiver, F: FieldSpec, dims: dict, weights: dict, v: str, rng, attempt: int, perturb: bool = True
) -> PairRep | None:
    X = random_rep(Q, F, dims, rng)
    x = _pick_vector(X, v, rng, shrink=attempt % 2 == 0) if perturb and dims[v] else None
    return _solve_pair(X, weights, v if x is not None else None, x, rng)


def _solve_with_retries(
    Q: Quiver, F: FieldSpec, dims: dict, weights: dict, v: str, rng, retries: int, perturb: bool = True
) -> PairRep:
    for attempt in range(retries):
        R = _solve_nearly(Q, F, dims, weights, v, rng, attempt, perturb)
        if R is not None:
            return R
    raise RetriesExhausted(Mode.SOLVE_NEARLY.value, retries)


# modes


def _delta_multiple(spec: GenSpec) -> tuple[AffineData, int]:
    aff = affine_classify(spec.quiver)
    if not aff.is_affine:
        raise Infeasible(f"{spec.mode.value} needs an affine quiver")
    m = spec.dims[spec.vertex] // aff.delta[spec.vertex]
    if m < 1 or any(spec.dims[u] != m * d for u, d in aff.delta.items()):
        raise Infeasible(f"{spec.mode.value} needs a positive multiple of delta, got {spec.dims}")
    return aff, m


def _conjugated_sum(spec: GenSpec, weights: dict, rng, attempt: int) -> PairRep:
    """m pieces of dimension delta, or one piece of dimension (m - 1) delta and one of dimension delta.

    Only the last piece carries the rank-one defect at the vertex; the others are modules.
    """
    aff, m = _delta_multiple(spec)
    delta = aff.delta
    if weights_dot(weights, delta) != 0:
        raise Infeasible("ConjugatedSum needs lambda . delta = 0")
    if m > 1 and rng.integers(0, 2):
        sizes = [m - 1, 1]
    else:
        sizes = [1] * m
    pieces = [
        _solve_with_retries(
            spec.quiver,
            spec.field,
            {u: k * d for u, d in delta.items()},
            weights,
            spec.vertex,
            rng,
            spec.retries,
            perturb=i == len(sizes) - 1,
        )
        for i, k in enumerate(sizes)
    ]
    summed, _ = direct_sum_pairs(pieces)
    T = {u: random_invertible(spec.field, d, rng) for u, d in summed.dims.items()}
    log.debug(f"conjugated sum of pieces {sizes=}")
    return conjugate_pair(summed, T)


def _ell_lift(spec: GenSpec, weights: dict, rng, attempt: int) -> PairRep | None:
    """A module over Q_inf with dimension one at ∞, with ∞ forgotten."""
    Qinf, lam_inf = infinity_quiver(spec.quiver, spec.vertex, weights)
    dims = {**spec.dims, INFINITY: 1}
    X = random_rep(Qinf, spec.field, dims, rng)
    lifted = _solve_pair(X, lam_inf, None, None, rng)
    if lifted is None:
        return None
    return restrict(InfRep(lifted, spec.quiver, spec.vertex))


def weyl_matrices(field: FieldSpec, p: int) -> tuple:
    """d/dt and multiplication by t on K[t]/(t^p), so that x y - y x = 1 in characteristic p."""
    x, y = field.zeros(p, p), field.zeros(p, p)
    for j in range(1, p):
        x[j - 1, j] = field.scalar(j)
        y[j, j - 1] = field.one()
    return x, y


def _weyl_sum(spec: GenSpec, weights: dict, rng, attempt: int) -> PairRep:
    Q, F = spec.quiver, spec.field
    if len(Q.vertices) != 1 or len(Q.arrows) != 1:
        raise Infeasible("WeylSum needs a single vertex with a single loop")
    if not F.is_finite:
        raise Infeasible("WeylSum needs positive characteristic")
    lam = weights[spec.vertex]
    n, p = spec.dims[spec.vertex], F.p
    if lam == 0 or n % p or n == 0:
        raise Infeasible(f"WeylSum needs a nonzero weight and a positive multiple of {p} as dimension")
    x, y = weyl_matrices(F, p)
    X, Y = block_diag([x] * (n // p), field=F), block_diag([y] * (n // p), field=F) * lam
    T = random_invertible(F, n, rng)
    T_inv = inverse(T)
    (loop,) = Q.arrows
    return PairRep.from_parts(
        Q, F, spec.dims, {loop.name: matmul(T_inv, matmul(X, T))}, {loop.name: matmul(T_inv, matmul(Y, T))}
    )


def _solve_mode(spec: GenSpec, weights: dict, rng, attempt: int) -> PairRep | None:
    return _solve_nearly(spec.quiver, spec.field, spec.dims, weights, spec.vertex, rng, attempt)


BUILDERS: dict[Mode, Callable] = {
    Mode.SOLVE_NEARLY: _solve_mode,
    Mode.CONJUGATED_SUM: _conjugated_sum,
    Mode.ELL_LIFT: _ell_lift,
    Mode.WEYL_SUM: _weyl_sum,
}


def gen_nearly(spec: GenSpec) -> PairRep:
    """A nearly representation for `spec`, re-verified by classify_relation before it is returned."""
    weights = spec.weights
    pairing = weights_dot(weights, spec.dims)
    if pairing != 0:
        raise Infeasible(f"lambda . dims = {spec.field.encode(pairing)} is not zero")
    rng = np.random.default_rng(spec.seed)
    build = BUILDERS[spec.mode]
    for attempt in range(spec.retries):
        R = build(spec, weights, rng, attempt)
        if R is None:
            log.debug(f"gen_nearly: no solution, retrying {attempt=} mode={spec.mode.value}")
            continue
        report = classify_relation(R, weights, spec.vertex)
        if not report.is_nearly:
            log.error(f"gen_nearly: {spec.mode.value} built a non-nearly instance, ranks {report.defect.ranks}")
            raise AssertionError("generated instance failed verification")
        log.debug(f"gen_nearly: {report.classification.value} instance after {attempt=}")
        return R
    raise RetriesExhausted(spec.mode.value, spec.retries)


def weyl_pair(p: int, m: int, seed: int = 0) -> PairRep:
    """m copies of the p-dimensional Weyl pair over GF(p) with weight 1, in a random basis."""
    spec = GenSpec(jordan(), "0", {"0": 1}, {"0": m * p}, FieldSpec.gf(p), seed, Mode.WEYL_SUM)
    return gen_nearly(spec)


def with_seed(spec: GenSpec, seed: int) -> GenSpec:
    return dataclasses.replace(spec, seed=seed)
