"""Representations of quivers and double quivers, and the moment-map relations of the pair view (X, xi)."""

import enum
import logging
import os
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from exact_linalg import (
    FieldMismatchError,
    FieldSpec,
    Subspace,
    block_diag,
    equal,
    field_of,
    hstack,
    inverse,
    matmul,
    rank,
    span,
)
from quiver_core import (
    Quiver,
    VertexMismatch,
    Weights,
    double_quiver,
    opposite,
    proj_dim_vector,
    reorient_quiver,
    starred,
    weights_dot,
)

log = logging.getLogger("preproj.rep_core")
log.setLevel(os.getenv("PREPROJ_LOG_LEVEL", "INFO"))


class ShapeMismatch(ValueError):
    def __init__(self, arrow: str, expected: tuple, got: tuple):
        self.arrow = arrow
        self.expected = expected
        self.got = got

    def __str__(self):
        return f"Matrix for arrow {self.arrow!r} has shape {self.got}, expected {self.expected}."


class InvalidSubrep(ValueError):
    def __init__(self, arrow: str | None = None, reason: str = "not closed under the arrow"):
        self.arrow = arrow
        self.reason = reason

    def __str__(self):
        where = f" at arrow {self.arrow!r}" if self.arrow else ""
        return f"Invalid subrepresentation{where}: {self.reason}."


class BudgetExhausted(RuntimeError):
    def __init__(self, what: str, attempts: int):
        self.what = what
        self.attempts = attempts

    def __str__(self):
        return f"{self.what} undecided after {self.attempts} attempts."


@dataclass(frozen=True)
class SearchBudget:
    """Effort limits for randomized searches."""

    random_elements: int = 64
    word_length: int = 4
    exhaustive_bound: int = 1 << 20
    split_attempts: int = 40


@dataclass(frozen=True, eq=False)
class Representation:
    """A vector space K^{dims[i]} per vertex and a matrix of shape dims[h(a)] x dims[t(a)] per arrow."""

    quiver: Quiver
    field: FieldSpec
    dims: dict
    matrices: dict

    def __post_init__(self):
        dims = {str(k): int(d) for k, d in self.dims.items()}
        if set(dims) != set(self.quiver.vertices):
            raise VertexMismatch(self.quiver.vertices, dims)
        object.__setattr__(self, "dims", {v: dims[v] for v in self.quiver.vertices})
        matrices = dict(self.matrices)
        if set(matrices) != set(self.quiver.arrow_names()):
            raise ShapeMismatch(",".join(sorted(set(matrices) ^ set(self.quiver.arrow_names()))), (), ())
        for a in self.quiver.arrows:
            M = matrices[a.name]
            expected = (self.dims[a.head], self.dims[a.tail])
            if tuple(M.shape) != expected:
                raise ShapeMismatch(a.name, expected, tuple(M.shape))
            if field_of(M) != self.field and M.size:
                raise FieldMismatchError(self.field, field_of(M))
            if field_of(M) != self.field:
                matrices[a.name] = self.field.zeros(*expected)
        object.__setattr__(self, "matrices", {a.name: matrices[a.name] for a in self.quiver.arrows})

    def __getitem__(self, arrow: str):
        return self.matrices[arrow]

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def dim_list(self) -> list:
        return [self.dims[v] for v in self.quiver.vertices]

    def offsets(self) -> dict:
        out, start = {}, 0
        for v in self.quiver.vertices:
            out[v] = start
            start += self.dims[v]
        return out

    def vertex_slice(self, v: str) -> slice:
        start = self.offsets()[v]
        return slice(start, start + self.dims[v])

    def embedded(self, arrow: str):
        """The arrow matrix acting on the total space, the direct sum of all vertex spaces."""
        a = self.quiver.arrow(arrow)
        n = self.total_dim
        out = self.field.zeros(n, n)
        out[self.vertex_slice(a.head), self.vertex_slice(a.tail)] = self.matrices[arrow]
        return out

    def projection(self, v: str):
        n = self.total_dim
        out = self.field.zeros(n, n)
        s = self.vertex_slice(v)
        out[s, s] = self.field.identity(self.dims[v])
        return out

    def total_operators(self, projections: bool = True) -> list:
        ops = [self.embedded(a.name) for a in self.quiver.arrows]
        if projections:
            ops += [self.projection(v) for v in self.quiver.vertices if self.dims[v]]
        return ops

    def replace(self, **matrices) -> "Representation":
        return Representation(self.quiver, self.field, self.dims, {**self.matrices, **matrices})

    def equals(self, other: "Representation") -> bool:
        return (
            self.quiver == other.quiver
            and self.field == other.field
            and self.dims == other.dims
            and all(equal(self.matrices[a], other.matrices[a]) for a in self.matrices)
        )


def zero_rep(Q: Quiver, field: FieldSpec, dims: Mapping) -> Representation:
    dims = {str(k): int(d) for k, d in dims.items()}
    return Representation(Q, field, dims, {a.name: field.zeros(dims[a.head], dims[a.tail]) for a in Q.arrows})


def random_rep(Q: Quiver, field: FieldSpec, dims: Mapping, rng: np.random.Generator) -> Representation:
    dims = {str(k): int(d) for k, d in dims.items()}
    return Representation(
        Q, field, dims, {a.name: field.random_matrix(rng, dims[a.head], dims[a.tail]) for a in Q.arrows}
    )


def simple(Q: Quiver, i: Any, field: FieldSpec) -> Representation:
    return zero_rep(Q, field, {v: int(v == str(i)) for v in Q.vertices})


def _paths_from(Q: Quiver, i: str) -> list:
    """All paths starting at i as (end vertex, arrow-name tuple), shortest first; Q must be acyclic."""
    proj_dim_vector(Q, i)
    paths, frontier = [(i, ())], [(i, ())]
    while frontier:
        grown = []
        for end, word in frontier:
            for a in Q.arrows:
                if a.tail == end:
                    grown.append((a.head, word + (a.name,)))
        paths += grown
        frontier = grown
    return paths


def projective(Q: Quiver, i: Any, field: FieldSpec) -> Representation:
    """P(i): basis of P(i)_j the paths from i to j, arrows act by extending paths."""
    i = str(i)
    paths = _paths_from(Q, i)
    index = {v: {} for v in Q.vertices}
    for end, word in paths:
        index[end][word] = len(index[end])
    dims = {v: len(index[v]) for v in Q.vertices}
    matrices = {}
    for a in Q.arrows:
        M = field.zeros(dims[a.head], dims[a.tail])
        for word, col in index[a.tail].items():
            M[index[a.head][word + (a.name,)], col] = field.one()
        matrices[a.name] = M
    return Representation(Q, field, dims, matrices)


def transpose_rep(R: Representation) -> Representation:
    """Arrows reversed, matrices transposed: the dual representation over the opposite quiver."""
    return Representation(opposite(R.quiver), R.field, R.dims, {a: M.T.copy() for a, M in R.matrices.items()})


def injective(Q: Quiver, i: Any, field: FieldSpec) -> Representation:
    return transpose_rep(projective(opposite(Q), i, field))


def conjugate(R: Representation, T: Mapping) -> Representation:
    """R written in the bases given by the columns of the invertible T[v]: X_a -> T_h^-1 X_a T_t."""
    inverses = {v: inverse(T[v]) for v in R.quiver.vertices}
    return Representation(
        R.quiver,
        R.field,
        R.dims,
        {a.name: matmul(matmul(inverses[a.head], R[a.name]), T[a.tail]) for a in R.quiver.arrows},
    )


@dataclass(frozen=True, eq=False)
class Blocks:
    """Where each summand of a direct sum sits inside every vertex space."""

    sizes: list

    def offset(self, part: int, v: str) -> int:
        return sum(s[v] for s in self.sizes[:part])

    def indices(self, v: str, parts: Iterable[int]) -> list:
        out = []
        for part in parts:
            start = self.offset(part, v)
            out.extend(range(start, start + self.sizes[part][v]))
        return out

    def block(self, M, row_vertex: str, row_parts: Iterable[int], col_vertex: str, col_parts: Iterable[int]):
        rows = np.array(self.indices(row_vertex, row_parts), dtype=np.intp)
        cols = np.array(self.indices(col_vertex, col_parts), dtype=np.intp)
        return M[np.ix_(rows, cols)]


@dataclass(frozen=True, eq=False)
class DirectSum:
    rep: Representation
    blocks: Blocks

    def part(self, k: int) -> Representation:
        R = self.rep
        return Representation(
            R.quiver,
            R.field,
            self.blocks.sizes[k],
            {a.name: self.blocks.block(R[a.name], a.head, [k], a.tail, [k]) for a in R.quiver.arrows},
        )


def direct_sum(parts: Sequence[Representation]) -> DirectSum:
    parts = list(parts)
    first = parts[0]
    for R in parts[1:]:
        if R.quiver != first.quiver:
            raise VertexMismatch(first.quiver.vertices, R.quiver.vertices)
        if R.field != first.field:
            raise FieldMismatchError(first.field, R.field)
    dims = {v: sum(R.dims[v] for R in parts) for v in first.quiver.vertices}
    matrices = {a: block_diag([R[a] for R in parts], field=first.field) for a in first.quiver.arrow_names()}
    return DirectSum(Representation(first.quiver, first.field, dims, matrices), Blocks([dict(R.dims) for R in parts]))


# pair view


@dataclass(frozen=True, eq=False)
class PairRep:
    """A representation of the double quiver seen as (X, xi): X on the arrows of Q, xi on the starred ones."""

    base_quiver: Quiver
    rep: Representation

    def __post_init__(self):
        if self.rep.quiver != double_quiver(self.base_quiver):
            raise VertexMismatch(double_quiver(self.base_quiver).arrow_names(), self.rep.quiver.arrow_names())

    @classmethod
    def from_parts(cls, Q: Quiver, field: FieldSpec, dims: Mapping, X: Mapping, xi: Mapping) -> "PairRep":
        matrices = {a.name: X[a.name] for a in Q.arrows}
        matrices.update({starred(a.name): xi[a.name] for a in Q.arrows})
        return cls(Q, Representation(double_quiver(Q), field, dims, matrices))

    @classmethod
    def from_rep(cls, Q: Quiver, X: Representation, xi: Mapping) -> "PairRep":
        return cls.from_parts(Q, X.field, X.dims, X.matrices, xi)

    @property
    def field(self) -> FieldSpec:
        return self.rep.field

    @property
    def dims(self) -> dict:
        return self.rep.dims

    @property
    def X(self) -> Representation:
        return Representation(
            self.base_quiver, self.field, self.dims, {a.name: self.rep[a.name] for a in self.base_quiver.arrows}
        )

    @property
    def xi(self) -> dict:
        """The starred matrices keyed by the base arrow; xi[a] maps X_{h(a)} to X_{t(a)}."""
        return {a.name: self.rep[starred(a.name)] for a in self.base_quiver.arrows}

    def equals(self, other: "PairRep") -> bool:
        return self.base_quiver == other.base_quiver and self.rep.equals(other.rep)


def direct_sum_pairs(parts: Sequence[PairRep]) -> tuple[PairRep, Blocks]:
    summed = direct_sum([P.rep for P in parts])
    return PairRep(parts[0].base_quiver, summed.rep), summed.blocks


def conjugate_pair(R: PairRep, T: Mapping) -> PairRep:
    return PairRep(R.base_quiver, conjugate(R.rep, T))


def _weights_in(field: FieldSpec, lam: Weights, Q: Quiver) -> dict:
    lam = {str(k): x for k, x in lam.items()}
    if set(lam) != set(Q.vertices):
        raise VertexMismatch(Q.vertices, lam)
    return {v: field.scalar(lam[v]) for v in Q.vertices}


@dataclass(frozen=True, eq=False)
class MomentDefect:
    """X_{c,i} = sum_{h(a)=i} X_a X_a* - sum_{t(a)=i} X_a* X_a - lambda_i at every vertex."""

    per_vertex: dict
    ranks: dict

    def is_zero(self) -> bool:
        return all(r == 0 for r in self.ranks.values())

    def is_zero_except(self, v: str) -> bool:
        return all(r == 0 for u, r in self.ranks.items() if u != v)


def moment_sums(R: PairRep) -> dict:
    """Phi_XX(xi): the moment map with no weights subtracted."""
    F = R.field
    out = {v: F.zeros(R.dims[v], R.dims[v]) for v in R.base_quiver.vertices}
    for a in R.base_quiver.arrows:
        Xa, Xs = R.rep[a.name], R.rep[starred(a.name)]
        out[a.head] = out[a.head] + matmul(Xa, Xs)
        out[a.tail] = out[a.tail] - matmul(Xs, Xa)
    return out


def moment_defect(R: PairRep, lam: Weights) -> MomentDefect:
    F = R.field
    weights = _weights_in(F, lam, R.base_quiver)
    sums = moment_sums(R)
    per_vertex = {v: sums[v] - F.identity(R.dims[v]) * weights[v] for v in R.base_quiver.vertices}
    return MomentDefect(per_vertex, {v: rank(M) for v, M in per_vertex.items()})


class RelationClass(str, enum.Enum):
    MODULE = "module"
    NEARLY = "nearly"
    NEITHER = "neither"


@dataclass(frozen=True, eq=False)
class RelationReport:
    classification: RelationClass
    defect: MomentDefect
    weight_pairing: Any

    @property
    def is_module(self) -> bool:
        return self.classification is RelationClass.MODULE

    @property
    def is_nearly(self) -> bool:
        return self.classification is not RelationClass.NEITHER


def classify_relation(R: PairRep, lam: Weights, v: Any) -> RelationReport:
    v = str(v)
    if v not in R.base_quiver.vertices:
        raise VertexMismatch(R.base_quiver.vertices, [v])
    defect = moment_defect(R, lam)
    pairing = weights_dot(_weights_in(R.field, lam, R.base_quiver), R.dims)
    if defect.is_zero():
        classification = RelationClass.MODULE
    elif pairing == 0 and defect.is_zero_except(v) and defect.ranks[v] <= 1:
        classification = RelationClass.NEARLY
    else:
        classification = RelationClass.NEITHER
    log.debug(f"classify_relation: {classification=} ranks={defect.ranks}")
    return RelationReport(classification, defect, pairing)


def reorient(R: PairRep, flips: Iterable[str]) -> PairRep:
    """Flip arrows of Q: the new a is the old a*, the new a* is minus the old a. Moment defects are unchanged."""
    flips = set(flips)
    Q = reorient_quiver(R.base_quiver, flips)
    X, xi = {}, {}
    for a in R.base_quiver.arrows:
        if a.name in flips:
            X[a.name], xi[a.name] = R.rep[starred(a.name)], -R.rep[a.name]
        else:
            X[a.name], xi[a.name] = R.rep[a.name], R.rep[starred(a.name)]
    return PairRep.from_parts(Q, R.field, R.dims, X, xi)


# subrepresentations


@dataclass(frozen=True, eq=False)
class SubRep:
    """A subspace of every vertex space, closed under every arrow of the parent."""

    parent: Representation
    spaces: dict

    @property
    def dims(self) -> dict:
        return {v: self.spaces[v].dim for v in self.parent.quiver.vertices}

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_proper_nonzero(self) -> bool:
        return 0 < self.total_dim < self.parent.total_dim

    def failing_arrow(self) -> str | None:
        for a in self.parent.quiver.arrows:
            image = matmul(self.parent[a.name], self.spaces[a.tail].basis)
            if not self.spaces[a.head].contains(image):
                return a.name
        return None

    def is_closed(self) -> bool:
        return self.failing_arrow() is None

    def check(self) -> "SubRep":
        arrow = self.failing_arrow()
        if arrow is not None:
            raise InvalidSubrep(arrow)
        return self

    def total_basis(self):
        """Basis of the subspace of the total space."""
        R = self.parent
        out = R.field.zeros(R.total_dim, self.total_dim)
        col = 0
        for v in R.quiver.vertices:
            B = self.spaces[v].basis
            out[R.vertex_slice(v), col : col + B.shape[1]] = B
            col += B.shape[1]
        return out

    @classmethod
    def from_total(cls, parent: Representation, W: Subspace) -> "SubRep":
        """The graded pieces of a subspace of the total space that is stable under the vertex projections."""
        spaces = {}
        for v in parent.quiver.vertices:
            rows = W.basis[parent.vertex_slice(v), :]
            spaces[v] = span(rows) if rows.size else Subspace.zero(parent.field, parent.dims[v])
        return cls(parent, spaces)

    @classmethod
    def zero(cls, parent: Representation) -> "SubRep":
        return cls(parent, {v: Subspace.zero(parent.field, d) for v, d in parent.dims.items()})

    @classmethod
    def whole(cls, parent: Representation) -> "SubRep":
        return cls(parent, {v: Subspace.full(parent.field, d) for v, d in parent.dims.items()})

    def to_json(self) -> dict:
        return {v: self.parent.field.encode_array(self.spaces[v].basis) for v in self.parent.quiver.vertices}


def quotient(R: Representation, S: SubRep) -> Representation:
    """R / S on the complements spanned by standard basis vectors that extend the bases of S."""
    S.check()
    change, sizes = {}, {}
    for v in R.quiver.vertices:
        space = S.spaces[v]
        complement = space.complement()
        change[v] = hstack([space.basis, complement.basis], field=R.field, rows=R.dims[v])
        sizes[v] = (space.dim, complement.dim)
    inverses = {v: inverse(change[v]) for v in R.quiver.vertices}
    matrices = {}
    for a in R.quiver.arrows:
        s_h, _ = sizes[a.head]
        s_t, _ = sizes[a.tail]
        complement_t = change[a.tail][:, s_t:]
        matrices[a.name] = matmul(inverses[a.head], matmul(R[a.name], complement_t))[s_h:, :]
    return Representation(R.quiver, R.field, {v: sizes[v][1] for v in R.quiver.vertices}, matrices)


def restrict_rep(R: Representation, S: SubRep) -> Representation:
    """The representation carried by S, in the bases of its spaces."""
    S.check()
    matrices = {}
    for a in R.quiver.arrows:
        head, tail = S.spaces[a.head], S.spaces[a.tail]
        if head.dim and tail.dim:
            matrices[a.name] = head.coordinates(matmul(R[a.name], tail.basis))
        else:
            matrices[a.name] = R.field.zeros(head.dim, tail.dim)
    return Representation(R.quiver, R.field, S.dims, matrices)


def nonzero_vertices(R: Representation) -> list:
    return [v for v in R.quiver.vertices if R.dims[v]]
