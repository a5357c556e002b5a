"""Krull-Schmidt decomposition, the preprojective/regular/preinjective split, tubes and lifting of homomorphisms."""

import dataclasses
import enum
import logging
import os
from dataclasses import dataclass

import networkx as nx
import numpy as np

from exact_linalg import Subspace, fitting, hstack, irreducible_factor, kron, matmul, poly_eval, solve_affine, vstack
from quiver_core import AffineData, Quiver, defect
from rep_core import (
    Blocks,
    BudgetExhausted,
    Representation,
    SearchBudget,
    SubRep,
    direct_sum,
    ext1_dim,
    hom_dim,
    hom_from_vector,
    hom_offsets,
    hom_space,
    intertwiner_system,
    restrict_rep,
    zero_rep,
)

log = logging.getLogger("preproj.affine_structure")
log.setLevel(os.getenv("PREPROJ_LOG_LEVEL", "INFO"))


class NoLift(ValueError):
    def __init__(self, vertex: str):
        self.vertex = vertex

    def __str__(self):
        return f"No homomorphism takes the given vector to the target at vertex {self.vertex!r}."


class SummandClass(str, enum.Enum):
    PREPROJECTIVE = "preprojective"
    REGULAR = "regular"
    PREINJECTIVE = "preinjective"


def classify_dims(Q: Quiver, aff: AffineData, dims) -> SummandClass:
    """Class of an indecomposable by the sign of its defect; everything is regular over an oriented cycle."""
    if aff.has_oriented_cycle:
        return SummandClass.REGULAR
    d = defect(Q, aff, dims)
    if d < 0:
        return SummandClass.PREPROJECTIVE
    if d > 0:
        return SummandClass.PREINJECTIVE
    return SummandClass.REGULAR


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Indecomposable summands of `original`.

    Column block k of base_change[v] is a basis of the k-th summand at v, so conjugating the original by
    base_change gives the block diagonal sum of the summands.
    """

    original: Representation
    summands: list
    classes: list
    base_change: dict
    blocks: Blocks

    def summed(self) -> Representation:
        if not self.summands:
            return zero_rep(self.original.quiver, self.original.field, self.original.dims)
        return direct_sum(self.summands).rep

    def embedding(self, k: int) -> dict:
        return {v: T[:, self.blocks.indices(v, [k])] for v, T in self.base_change.items()}

    def indices(self, cls: SummandClass) -> list:
        return [k for k, c in enumerate(self.classes) if c is cls]

    def to_json(self) -> dict:
        return {
            "summands": [
                {"dims": S.dims, "class": c.value if c is not None else None}
                for S, c in zip(self.summands, self.classes)
            ]
        }


def _random_endomorphism(Y: Representation, basis: list, rng: np.random.Generator) -> dict:
    F = Y.field
    phi = {v: F.zeros(d, d) for v, d in Y.dims.items()}
    for f in basis:
        c = F.random_scalar(rng)
        for v in phi:
            phi[v] = phi[v] + f[v] * c
    return phi


def _try_split(Y: Representation, basis: list, rng: np.random.Generator):
    """Fitting decomposition of f(phi) for a random endomorphism phi and an irreducible factor f."""
    phi = _random_endomorphism(Y, basis, rng)
    first = next(v for v in Y.quiver.vertices if Y.dims[v])
    factor = irreducible_factor(phi[first])
    kernels, images = {}, {}
    for v, d in Y.dims.items():
        if d == 0:
            kernels[v] = images[v] = Subspace.zero(Y.field, 0)
            continue
        kernels[v], images[v] = fitting(poly_eval(factor, phi[v]))
    size = sum(K.dim for K in kernels.values())
    if 0 < size < Y.total_dim:
        return kernels, images
    return None


def decompose(
    X: Representation, seed: int = 0, budget: SearchBudget = SearchBudget(), strict: bool = False
) -> Decomposition:
    """Split X into indecomposables by Fitting decompositions of random endomorphisms.

    A piece with a one-dimensional endomorphism ring is indecomposable. Any other piece is declared indecomposable
    after budget.split_attempts failed splits, or raises BudgetExhausted when `strict`.
    """
    rng = np.random.default_rng(seed)
    F = X.field
    pending = [{v: F.identity(d) for v, d in X.dims.items()}] if X.total_dim else []
    done = []
    while pending:
        bases = pending.pop()
        Y = restrict_rep(X, SubRep(X, {v: Subspace(B) for v, B in bases.items()}))
        endo = hom_space(Y, Y)
        split = None
        if len(endo) > 1:
            for attempt in range(budget.split_attempts):
                split = _try_split(Y, endo, rng)
                if split is not None:
                    log.debug(f"decompose: split {Y.dims} after {attempt=}")
                    break
            else:
                if strict:
                    raise BudgetExhausted("decomposition", budget.split_attempts)
                log.debug(f"decompose: declaring {Y.dims} indecomposable, dim End={len(endo)}")
        if split is None:
            done.append(bases)
            continue
        for part in reversed(split):
            pending.append({v: matmul(bases[v], part[v].basis) for v in bases})

    summands = [restrict_rep(X, SubRep(X, {v: Subspace(B) for v, B in bases.items()})) for bases in done]
    base_change = {
        v: hstack([bases[v] for bases in done], field=F, rows=d) if done else F.zeros(d, 0) for v, d in X.dims.items()
    }
    return Decomposition(X, summands, [None] * len(summands), base_change, Blocks([S.dims for S in summands]))


def pri_split(Q: Quiver, aff: AffineData, D: Decomposition) -> Decomposition:
    if not aff.is_affine:
        raise ValueError("pri_split needs an affine quiver")
    return dataclasses.replace(D, classes=[classify_dims(Q, aff, S.dims) for S in D.summands])


@dataclass(frozen=True, eq=False)
class TubePartition:
    groups: list
    dims: list

    def to_json(self) -> list:
        return [{"members": list(g), "dims": d} for g, d in zip(self.groups, self.dims)]


def _linked(Q: Quiver, M: Representation, N: Representation) -> bool:
    return hom_dim(M, N) > 0 or hom_dim(N, M) > 0 or ext1_dim(Q, M, N) > 0 or ext1_dim(Q, N, M) > 0


def tube_partition(regulars: list) -> TubePartition:
    """Group regular indecomposables into tubes: components of the graph linking summands with Hom or Ext."""
    G = nx.Graph()
    G.add_nodes_from(range(len(regulars)))
    for i in range(len(regulars)):
        for j in range(i + 1, len(regulars)):
            if _linked(regulars[i].quiver, regulars[i], regulars[j]):
                G.add_edge(i, j)
    groups = sorted(tuple(sorted(c)) for c in nx.connected_components(G))
    dims = [{v: sum(regulars[k].dims[v] for k in g) for v in regulars[g[0]].quiver.vertices} for g in groups]
    log.debug(f"tube_partition: {groups=}")
    return TubePartition(groups, dims)


def hom_lift(P: Representation, I: Representation, v: str, x, y) -> dict:
    """A homomorphism f: P -> I with f_v(x) = y, raising NoLift when none exists."""
    v = str(v)
    F = P.field
    system = intertwiner_system(P, I)
    offsets, unknowns = hom_offsets(P, I)
    evaluation = F.zeros(I.dims[v], unknowns)
    start = offsets[v]
    evaluation[:, start : start + I.dims[v] * P.dims[v]] = kron(x.reshape(1, -1), F.identity(I.dims[v]))
    A = vstack([system, evaluation], field=F, cols=unknowns)
    b = F.zeros(A.shape[0])
    b[system.shape[0] :] = y
    solution = solve_affine(A, b)
    if solution is None:
        log.error(f"hom_lift: no lift at {v=}")
        raise NoLift(v)
    return hom_from_vector(P, I, solution.particular)
