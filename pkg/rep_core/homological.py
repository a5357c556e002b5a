"""Hom spaces, Ext^1 dimensions and the map Phi_MN: r(N, M) -> h(N, M).

Unknown matrices are flattened column-major (see exact_linalg.vec), blocks follow vertex order for h and
arrow order for r.
"""

import logging
import os
from dataclasses import dataclass
from typing import Mapping

from exact_linalg import FieldMismatchError, apply, field_of, kernel, kron, rank, unvec, vec
from quiver_core import Quiver, VertexMismatch, euler_form
from rep_core.rep_core import Representation

log = logging.getLogger("preproj.rep_core")
log.setLevel(os.getenv("PREPROJ_LOG_LEVEL", "INFO"))


def _check_compatible(M: Representation, N: Representation):
    if M.quiver != N.quiver:
        raise VertexMismatch(M.quiver.vertices, N.quiver.vertices)
    if M.field != N.field:
        raise FieldMismatchError(M.field, N.field)


def hom_offsets(M: Representation, N: Representation) -> tuple[dict, int]:
    """Column offset of vec(f_i) for every vertex in the intertwiner system, and the number of unknowns."""
    offsets, start = {}, 0
    for v in M.quiver.vertices:
        offsets[v] = start
        start += N.dims[v] * M.dims[v]
    return offsets, start


def intertwiner_system(M: Representation, N: Representation):
    """Matrix of f -> (f_h M_a - N_a f_t)_a on the unknowns vec(f_i), f_i of shape N_i x M_i."""
    _check_compatible(M, N)
    F = M.field
    offsets, unknowns = hom_offsets(M, N)
    equations = sum(N.dims[a.head] * M.dims[a.tail] for a in M.quiver.arrows)
    system = F.zeros(equations, unknowns)
    row = 0
    for a in M.quiver.arrows:
        h, t = a.head, a.tail
        size = N.dims[h] * M.dims[t]
        rows = slice(row, row + size)
        head_cols = slice(offsets[h], offsets[h] + N.dims[h] * M.dims[h])
        tail_cols = slice(offsets[t], offsets[t] + N.dims[t] * M.dims[t])
        system[rows, head_cols] = system[rows, head_cols] + kron(M[a.name].T, F.identity(N.dims[h]))
        system[rows, tail_cols] = system[rows, tail_cols] - kron(F.identity(M.dims[t]), N[a.name])
        row += size
    return system


def hom_from_vector(M: Representation, N: Representation, vector) -> dict:
    offsets, _ = hom_offsets(M, N)
    out = {}
    for v in M.quiver.vertices:
        n, m = N.dims[v], M.dims[v]
        out[v] = unvec(vector[offsets[v] : offsets[v] + n * m], n, m)
    return out


def hom_space(M: Representation, N: Representation) -> list[dict]:
    """A basis of Hom(M, N); each element maps vertex i to a matrix of shape dims N_i x dims M_i."""
    system = intertwiner_system(M, N)
    null = kernel(system)
    return [hom_from_vector(M, N, null.basis[:, j]) for j in range(null.dim)]


def hom_dim(M: Representation, N: Representation) -> int:
    system = intertwiner_system(M, N)
    return system.shape[1] - rank(system)


def ext1_dim(Q: Quiver, M: Representation, N: Representation) -> int:
    """dim Ext^1(M, N) = dim Hom(M, N) - <dim M, dim N> for the hereditary path algebra of Q."""
    return hom_dim(M, N) - euler_form(Q, M.dims, N.dims)


@dataclass(frozen=True, eq=False)
class PhiMap:
    """Phi_MN(theta) = sum_a (M_a theta_a - theta_a N_a), theta_a: N_{h(a)} -> M_{t(a)}.

    Domain blocks are (arrow, rows, cols, offset) with theta_a of shape dims M_t x dims N_h; codomain blocks are
    (vertex, rows, cols, offset) with entries of shape dims M_i x dims N_i.
    """

    matrix: object
    domain: list
    codomain: list

    def flatten(self, theta: Mapping):
        F = self.field
        out = F.zeros(self.matrix.shape[1])
        for name, rows, cols, start in self.domain:
            out[start : start + rows * cols] = vec(theta[name])
        return out

    def unflatten(self, vector) -> dict:
        return {v: unvec(vector[start : start + rows * cols], rows, cols) for v, rows, cols, start in self.codomain}

    @property
    def field(self):
        return field_of(self.matrix)

    def __call__(self, theta: Mapping) -> dict:
        return self.unflatten(apply(self.matrix, self.flatten(theta)))

    def kernel_dim(self) -> int:
        return self.matrix.shape[1] - rank(self.matrix)

    def cokernel_dim(self) -> int:
        return self.matrix.shape[0] - rank(self.matrix)


def phi_map(M: Representation, N: Representation) -> PhiMap:
    _check_compatible(M, N)
    F = M.field
    codomain, start = [], 0
    for v in M.quiver.vertices:
        codomain.append((v, M.dims[v], N.dims[v], start))
        start += M.dims[v] * N.dims[v]
    rows_total = start
    where = {v: s for v, _, _, s in codomain}
    domain, start = [], 0
    for a in M.quiver.arrows:
        domain.append((a.name, M.dims[a.tail], N.dims[a.head], start))
        start += M.dims[a.tail] * N.dims[a.head]
    matrix = F.zeros(rows_total, start)
    for a, (_, rows, cols, col_start) in zip(M.quiver.arrows, domain):
        block = slice(col_start, col_start + rows * cols)
        h, t = a.head, a.tail
        h_rows = slice(where[h], where[h] + M.dims[h] * N.dims[h])
        t_rows = slice(where[t], where[t] + M.dims[t] * N.dims[t])
        matrix[h_rows, block] = matrix[h_rows, block] + kron(F.identity(N.dims[h]), M[a.name])
        matrix[t_rows, block] = matrix[t_rows, block] - kron(N[a.name].T, F.identity(M.dims[t]))
    log.debug(f"phi_map: shape={matrix.shape}")
    return PhiMap(matrix, domain, codomain)
