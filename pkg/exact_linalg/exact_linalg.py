"""Dense exact linear algebra over FieldSpec fields.

All elimination picks the first nonzero entry of a column as its pivot, so every result is a deterministic
function of its inputs.
"""

import logging
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

import galois
import numpy as np
import sympy

from exact_linalg.fields import RATIONALS, FieldSpec, IncompatibleFields, embedding_table, field_of

log = logging.getLogger("preproj.exact_linalg")
log.setLevel(os.getenv("PREPROJ_LOG_LEVEL", "INFO"))


class FieldMismatchError(ArithmeticError):
    def __init__(self, left: FieldSpec, right: FieldSpec):
        self.left = left
        self.right = right

    def __str__(self):
        return f"Operands live over different fields: {self.left} and {self.right}."


class RootsUnavailable(ArithmeticError):
    def __init__(self, field: FieldSpec, reason: str = "the characteristic polynomial has no root in the field"):
        self.field = field
        self.reason = reason

    def __str__(self):
        return f"No eigenvalue over {self.field}: {self.reason}."


class SingularMatrix(ArithmeticError):
    def __init__(self, rank: int, size: int):
        self.rank = rank
        self.size = size

    def __str__(self):
        return f"Matrix of size {self.size} has rank {self.rank} and is not invertible."


def same_field(*arrays) -> FieldSpec:
    field = field_of(arrays[0])
    for other in arrays[1:]:
        if field_of(other) != field:
            raise FieldMismatchError(field, field_of(other))
    return field


# construction


def matmul(A, B):
    if A.shape[-1] != B.shape[0]:
        raise ValueError(f"cannot multiply {A.shape} by {B.shape}")
    field = same_field(A, B)
    if 0 in A.shape or 0 in B.shape:
        return field.zeros(A.shape[0], *B.shape[1:])
    return A @ B


def apply(A, v):
    """A times a 1-D vector."""
    return matmul(A, v.reshape(-1, 1)).reshape(-1)


def hstack(blocks: Sequence, field: FieldSpec | None = None, rows: int | None = None):
    blocks = list(blocks)
    field = field or same_field(*blocks)
    rows = blocks[0].shape[0] if rows is None else rows
    out = field.zeros(rows, sum(b.shape[1] for b in blocks))
    col = 0
    for b in blocks:
        out[:, col : col + b.shape[1]] = b
        col += b.shape[1]
    return out


def vstack(blocks: Sequence, field: FieldSpec | None = None, cols: int | None = None):
    blocks = list(blocks)
    field = field or same_field(*blocks)
    cols = blocks[0].shape[1] if cols is None else cols
    out = field.zeros(sum(b.shape[0] for b in blocks), cols)
    row = 0
    for b in blocks:
        out[row : row + b.shape[0], :] = b
        row += b.shape[0]
    return out


def block_diag(blocks: Sequence, field: FieldSpec | None = None):
    blocks = list(blocks)
    field = field or same_field(*blocks)
    out = field.zeros(sum(b.shape[0] for b in blocks), sum(b.shape[1] for b in blocks))
    row = col = 0
    for b in blocks:
        out[row : row + b.shape[0], col : col + b.shape[1]] = b
        row += b.shape[0]
        col += b.shape[1]
    return out


def columns(vectors: Sequence, field: FieldSpec, n: int):
    """Matrix whose columns are the given 1-D vectors."""
    out = field.zeros(n, len(vectors))
    for j, v in enumerate(vectors):
        out[:, j] = v
    return out


def kron(A, B):
    field = same_field(A, B)
    (ra, ca), (rb, cb) = A.shape, B.shape
    if 0 in (ra, ca, rb, cb):
        return field.zeros(ra * rb, ca * cb)
    return (A[:, None, :, None] * B[None, :, None, :]).reshape(ra * rb, ca * cb)


def vec(X):
    """Column-major vectorization, so that vec(A X B) = kron(B.T, A) vec(X)."""
    return X.T.reshape(-1)


def unvec(v, rows: int, cols: int):
    return v.reshape(cols, rows).T


def is_zero(A) -> bool:
    return A.size == 0 or not np.any(A != 0)


def equal(A, B) -> bool:
    return A.shape == B.shape and (A.size == 0 or not np.any(A != B))


def trace(M):
    field = field_of(M)
    total = field.zero()
    for i in range(min(M.shape)):
        total = total + M[i, i]
    return total


def matrix_power(A, e: int):
    field = field_of(A)
    result = field.identity(A.shape[0])
    base = A
    while e:
        if e & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        e >>= 1
    return result


def poly_eval(coeffs: Sequence, M):
    """Evaluate the polynomial with little-endian coefficients at the square matrix M (Horner)."""
    field = field_of(M)
    n = M.shape[0]
    out = field.zeros(n, n)
    I = field.identity(n)
    for c in reversed(list(coeffs)):
        out = matmul(out, M) + I * c
    return out


# elimination


def rref(A):
    """Reduced row echelon form and the list of pivot columns."""
    R = A.copy()
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nonzero = np.flatnonzero(R[r:, c] != 0)
        if nonzero.size == 0:
            continue
        i = r + int(nonzero[0])
        if i != r:
            R[[r, i], :] = R[[i, r], :]
        R[r, :] = R[r, :] / R[r, c]
        factors = R[:, c].copy()
        factors[r] = 0
        if not is_zero(factors):
            R = R - factors.reshape(-1, 1) * R[r, :].reshape(1, -1)
        pivots.append(c)
        r += 1
    return R, pivots


def rank(M) -> int:
    return len(rref(M)[1]) if M.size else 0


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of K^n given by a basis of linearly independent columns."""

    basis: Any

    @classmethod
    def zero(cls, field: FieldSpec, n: int) -> "Subspace":
        return cls(field.zeros(n, 0))

    @classmethod
    def full(cls, field: FieldSpec, n: int) -> "Subspace":
        return cls(field.identity(n))

    @property
    def field(self) -> FieldSpec:
        return field_of(self.basis)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def contains(self, vectors) -> bool:
        """Whether every column of `vectors` (or a single 1-D vector) lies in the subspace."""
        if vectors.ndim == 1:
            vectors = vectors.reshape(-1, 1)
        if vectors.shape[1] == 0:
            return True
        if self.dim == 0:
            return is_zero(vectors)
        return rank(hstack([self.basis, vectors])) == self.dim

    def equals(self, other: "Subspace") -> bool:
        return self.ambient_dim == other.ambient_dim and self.dim == other.dim and self.contains(other.basis)

    def is_invariant(self, operator) -> bool:
        return self.contains(matmul(operator, self.basis))

    def coordinates(self, vectors):
        """Coordinates of vectors in this basis; raises ValueError for vectors outside the subspace."""
        flat = vectors.ndim == 1
        if flat:
            vectors = vectors.reshape(-1, 1)
        n, d, k = self.ambient_dim, self.dim, vectors.shape[1]
        R, pivots = rref(hstack([self.basis, vectors], field=self.field, rows=n))
        if any(p >= d for p in pivots):
            raise ValueError("vectors do not lie in the subspace")
        coords = R[:d, d : d + k]
        return coords.reshape(-1) if flat else coords

    def complement(self) -> "Subspace":
        """Span of the standard basis vectors, taken in index order, that extend this basis."""
        n = self.ambient_dim
        _, pivots = rref(hstack([self.basis, self.field.identity(n)], field=self.field, rows=n))
        chosen = [p - self.dim for p in pivots if p >= self.dim]
        return Subspace(self.field.identity(n)[:, chosen])

    def sum(self, other: "Subspace") -> "Subspace":
        return span(hstack([self.basis, other.basis], field=self.field, rows=self.ambient_dim))


@dataclass(frozen=True, eq=False)
class RankKerIm:
    rank: int
    kernel: Subspace
    image: Subspace

    def __iter__(self):
        return iter((self.rank, self.kernel, self.image))


def rank_ker_im(M) -> RankKerIm:
    field = field_of(M)
    rows, cols = M.shape
    if M.size == 0:
        return RankKerIm(0, Subspace.full(field, cols), Subspace.zero(field, rows))
    R, pivots = rref(M)
    free = [c for c in range(cols) if c not in pivots]
    kernel = field.zeros(cols, len(free))
    for j, f in enumerate(free):
        kernel[f, j] = field.one()
        for i, p in enumerate(pivots):
            kernel[p, j] = -R[i, f]
    return RankKerIm(len(pivots), Subspace(kernel), Subspace(M[:, pivots]))


def kernel(M) -> Subspace:
    return rank_ker_im(M).kernel


def span(M) -> Subspace:
    return rank_ker_im(M).image


@dataclass(frozen=True, eq=False)
class Solution:
    particular: Any
    nullspace: Subspace


def solve_affine(A, b) -> Solution | None:
    """Solve A x = b. Returns None when b is not in the image of A."""
    if A.shape[0] != b.shape[0]:
        raise ValueError(f"{A.shape[0]} equations but {b.shape[0]} right-hand entries")
    field = same_field(A, b)
    rows, cols = A.shape
    nullspace = kernel(A)
    if rows == 0:
        return Solution(field.zeros(cols), nullspace)
    R, pivots = rref(hstack([A, b.reshape(-1, 1)], field=field, rows=rows))
    if cols in pivots:
        return None
    x = field.zeros(cols)
    for i, p in enumerate(pivots):
        x[p] = R[i, cols]
    return Solution(x, nullspace)


def inverse(A):
    n = A.shape[0]
    field = field_of(A)
    R, pivots = rref(hstack([A, field.identity(n)], field=field, rows=n))
    if pivots[:n] != list(range(n)):
        raise SingularMatrix(sum(p < n for p in pivots), n)
    return R[:, n:]


def random_invertible(field: FieldSpec, n: int, rng: np.random.Generator):
    while True:
        T = field.random_matrix(rng, n, n)
        if n == 0 or rank(T) == n:
            return T


# spaces generated by operators


class _Echelon:
    """Incrementally reduced set of vectors with distinct pivots."""

    def __init__(self):
        self.rows = []

    def reduce(self, v):
        for pivot, row in self.rows:
            if v[pivot] != 0:
                v = v - v[pivot] * row
        return v

    def add(self, v) -> bool:
        v = self.reduce(v)
        nonzero = np.flatnonzero(v != 0)
        if nonzero.size == 0:
            return False
        pivot = int(nonzero[0])
        self.rows.append((pivot, v / v[pivot]))
        return True


def spin(vectors, operators: Iterable) -> Subspace:
    """Smallest subspace containing the columns of `vectors` and closed under every operator."""
    field = field_of(vectors)
    n = vectors.shape[0]
    operators = list(operators)
    echelon = _Echelon()
    basis = []
    queue = [vectors[:, j] for j in range(vectors.shape[1])]
    while queue and len(basis) < n:
        v = queue.pop(0)
        if echelon.add(v):
            basis.append(v)
            queue.extend(apply(op, v) for op in operators)
    return Subspace(columns(basis, field, n))


def fitting(phi) -> tuple[Subspace, Subspace]:
    """(Ker phi^n, Im phi^n) for phi acting on an n-dimensional space."""
    power = matrix_power(phi, phi.shape[0])
    result = rank_ker_im(power)
    return result.kernel, result.image


# eigenvalues


@dataclass(frozen=True, eq=False)
class CharRoots:
    """Roots of a characteristic polynomial with multiplicities, sorted canonically, and the field they live in."""

    roots: list
    field: FieldSpec
    splits: bool

    def first(self):
        if not self.roots:
            raise RootsUnavailable(self.field)
        return self.roots[0][0]


def _hessenberg(M):
    """Upper Hessenberg matrix similar to M, by elimination below the subdiagonal."""
    H = M.copy()
    n = H.shape[0]
    for j in range(n - 2):
        nonzero = np.flatnonzero(H[j + 1 :, j] != 0)
        if nonzero.size == 0:
            continue
        i = j + 1 + int(nonzero[0])
        if i != j + 1:
            H[[i, j + 1], :] = H[[j + 1, i], :]
            H[:, [i, j + 1]] = H[:, [j + 1, i]]
        for k in range(j + 2, n):
            if H[k, j] == 0:
                continue
            u = H[k, j] / H[j + 1, j]
            H[k, :] = H[k, :] - u * H[j + 1, :]
            H[:, j + 1] = H[:, j + 1] + u * H[:, k]
    return H


def charpoly(M) -> list:
    """Little-endian coefficients of the monic characteristic polynomial det(x - M).

    Reduces to Hessenberg form and runs the row recurrence, O(n^3) field operations.
    """
    field = field_of(M)
    n = M.shape[0]
    zero, one = field.zero(), field.one()
    if n == 1:
        return [-M[0, 0], one]
    H = _hessenberg(M)
    polys = [[one]]
    for m in range(n):
        prev = polys[m]
        nxt = [zero] + prev
        for d, c in enumerate(prev):
            nxt[d] = nxt[d] - H[m, m] * c
        sub = one
        for i in range(m - 1, -1, -1):
            sub = sub * H[i + 1, i]
            if sub == 0:
                break
            coeff = H[i, m] * sub
            if coeff == 0:
                continue
            for d, c in enumerate(polys[i]):
                nxt[d] = nxt[d] - coeff * c
        polys.append(nxt)
    return polys[n]


def _galois_charpoly(M) -> galois.Poly:
    GF = field_of(M).galois_field()
    return galois.Poly(GF([int(c) for c in reversed(charpoly(M))]))


def _rational_charpoly(M):
    n = M.shape[0]
    entries = [sympy.Rational(x.numerator, x.denominator) for x in M.reshape(-1)]
    return sympy.Matrix(n, n, entries).charpoly()


def char_roots(M, extend: bool = True) -> CharRoots:
    """Eigenvalues of M.

    Over GF(p^k), with `extend` the roots are taken in the smallest extension GF(p^{kd}) where the characteristic
    polynomial splits; without it only the roots in the base field are returned. Over Q only rational roots exist.
    """
    field = field_of(M)
    n = M.shape[0]
    if n == 0:
        return CharRoots([], field, True)
    if not field.is_finite:
        found = _rational_charpoly(M).ground_roots()
        roots = sorted(
            ((Fraction(int(r.p), int(r.q)), int(mult)) for r, mult in found.items()),
            key=lambda pair: field.sort_key(pair[0]),
        )
        return CharRoots(roots, field, sum(m for _, m in roots) == n)

    poly = _galois_charpoly(M)
    target = field
    if extend:
        factors, _ = poly.factors()
        d = math.lcm(*(int(f.degree) for f in factors))
        if d > 1:
            target = field.extension(d)
            log.debug(f"extending scalars for roots: {field=} {target=}")
            poly = galois.Poly(embed(poly.coeffs, target))
    found, mults = poly.roots(multiplicity=True)
    roots = sorted(
        ((found[i], int(mults[i])) for i in range(len(found))),
        key=lambda pair: target.sort_key(pair[0]),
    )
    return CharRoots(roots, target, sum(m for _, m in roots) == n)


def eigenvalue(M, extend: bool = True):
    """The first eigenvalue in canonical order, preferring the base field. Returns (alpha, field)."""
    base = char_roots(M, extend=False)
    if base.roots:
        return base.first(), base.field
    field = field_of(M)
    if not extend or not field.is_finite:
        raise RootsUnavailable(field)
    extended = char_roots(M, extend=True)
    return extended.first(), extended.field


def irreducible_factors(M) -> list:
    """Little-endian coefficient lists of the distinct monic irreducible factors of the characteristic polynomial.

    Over Q the factors come from sympy's factorization over the rationals, lowest degree first.
    """
    field = field_of(M)
    if M.shape[0] == 0:
        return []
    if not field.is_finite:
        _, found = _rational_charpoly(M).factor_list()
        out = []
        for f, _ in found:
            coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(f.all_coeffs())]
            out.append([c / coeffs[-1] for c in coeffs])
        return sorted(out, key=lambda coeffs: (len(coeffs), [field.sort_key(c) for c in coeffs]))
    factors, _ = _galois_charpoly(M).factors()
    return [[f.coeffs[i] for i in range(len(f.coeffs) - 1, -1, -1)] for f in factors]


def irreducible_factor(M) -> list | None:
    """One monic irreducible factor of the characteristic polynomial, or None for an empty matrix."""
    factors = irreducible_factors(M)
    return factors[0] if factors else None


def embed(A, new_field: FieldSpec):
    """Entrywise image of A under the embedding of its field into `new_field`."""
    source = field_of(A)
    if source == new_field:
        return A
    if not source.is_finite or not new_field.is_finite:
        raise IncompatibleFields(source, new_field)
    table = embedding_table(source, new_field)
    return new_field.galois_field()(table[A.view(np.ndarray)])


def to_rationals(A):
    """Object array of Fraction from integer-like entries."""
    out = np.empty(A.shape, dtype=object)
    for idx, x in np.ndenumerate(A):
        out[idx] = Fraction(x)
    return out
