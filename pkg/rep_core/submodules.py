"""Generated subrepresentations and a MeatAxe-style simplicity test.

The test runs on the total space with the vertex projections among the operators, so every subspace it spins
is graded and converts back to a SubRep.
"""

import itertools
import logging
import os
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Literal

import numpy as np

from exact_linalg import (
    Subspace,
    columns,
    irreducible_factors,
    kernel,
    matmul,
    poly_eval,
    spin,
)
from rep_core.rep_core import BudgetExhausted, Representation, SearchBudget, SubRep

log = logging.getLogger("preproj.rep_core")
log.setLevel(os.getenv("PREPROJ_LOG_LEVEL", "INFO"))

Method = Literal["auto", "randomized", "exhaustive"]


def spin_submodule(R: Representation, vectors: Iterable[tuple]) -> SubRep:
    """Smallest SubRep containing the given (vertex, vector) pairs."""
    n = R.total_dim
    starts = []
    for v, x in vectors:
        embedded = R.field.zeros(n)
        embedded[R.vertex_slice(str(v))] = x
        starts.append(embedded)
    if not starts:
        return SubRep.zero(R)
    W = spin(columns(starts, R.field, n), R.total_operators())
    return SubRep.from_total(R, W)


@dataclass(frozen=True, eq=False)
class Certificate:
    """Why a representation was declared simple.

    `exhaustive` spins every nonzero vertex vector up to scalars, which proves simplicity. `norton` records the
    degree of the irreducible factor whose kernel and dual kernel both spun to the whole space.
    """

    method: str
    spun: int
    factor_degree: int | None = None
    attempts: int = 0


@dataclass(frozen=True, eq=False)
class Simple:
    certificate: Certificate
    is_simple: bool = dc_field(default=True, init=False)


@dataclass(frozen=True, eq=False)
class NotSimple:
    witness: SubRep
    is_simple: bool = dc_field(default=False, init=False)


def _witness(R: Representation, W: Subspace) -> SubRep | None:
    if 0 < W.dim < R.total_dim:
        return SubRep.from_total(R, W).check()
    return None


def _annihilator(W: Subspace) -> Subspace:
    """Vectors killed by every column of W, read as linear forms."""
    return kernel(W.basis.T.copy())


def _normalized_vectors(field, d: int):
    """Nonzero vectors of K^d whose first nonzero coordinate is 1."""
    elements = list(field.elements())
    for lead in range(d):
        for tail in itertools.product(elements, repeat=d - lead - 1):
            x = field.zeros(d)
            x[lead] = field.one()
            for offset, c in enumerate(tail):
                x[lead + 1 + offset] = c
            yield x


def exhaustive_allowed(R: Representation, budget: SearchBudget) -> bool:
    return R.field.is_finite and R.field.order**R.total_dim <= budget.exhaustive_bound


def _spin_homogeneous(R: Representation, ops: list, v: str, x) -> Subspace:
    start = R.field.zeros(R.total_dim, 1)
    start[R.vertex_slice(v), 0] = x
    return spin(start, ops)


def _random_element(R: Representation, ops: list, rng: np.random.Generator, budget: SearchBudget):
    """A random linear combination of random words of length at most budget.word_length in the operators."""
    F = R.field
    n = R.total_dim
    theta = F.zeros(n, n)
    for _ in range(budget.word_length):
        length = int(rng.integers(1, budget.word_length + 1))
        word = F.identity(n)
        for index in rng.integers(0, len(ops), size=length):
            word = matmul(ops[int(index)], word)
        theta = theta + word * F.random_scalar(rng)
    return theta


def simplicity(
    R: Representation, budget: SearchBudget = SearchBudget(), seed: int = 0, method: Method = "auto"
) -> Simple | NotSimple:
    """Decide whether R has no proper nonzero subrepresentation.

    Simple verdicts carry a certificate, NotSimple verdicts a verified witness. Raises BudgetExhausted when the
    randomized search can neither find a submodule nor certify simplicity.
    """
    n = R.total_dim
    if n == 0:
        raise ValueError("the zero representation is neither simple nor not simple")
    ops = R.total_operators()
    spun = 0

    for v in R.quiver.vertices:
        for j in range(R.dims[v]):
            x = R.field.zeros(R.dims[v])
            x[j] = R.field.one()
            spun += 1
            witness = _witness(R, _spin_homogeneous(R, ops, v, x))
            if witness is not None:
                log.debug(f"simplicity: basis vector {j} at {v=} spins to a proper submodule")
                return NotSimple(witness)
    if n == 1:
        return Simple(Certificate("exhaustive", spun))

    if method == "exhaustive" or (method == "auto" and exhaustive_allowed(R, budget)):
        if not R.field.is_finite:
            raise ValueError("exhaustive search needs a finite field")
        for v in R.quiver.vertices:
            for x in _normalized_vectors(R.field, R.dims[v]):
                spun += 1
                witness = _witness(R, _spin_homogeneous(R, ops, v, x))
                if witness is not None:
                    return NotSimple(witness)
        return Simple(Certificate("exhaustive", spun))

    rng = np.random.default_rng(seed)
    arrows = R.total_operators(projections=False) or ops
    transposed = [op.T.copy() for op in ops]
    for attempt in range(1, budget.random_elements + 1):
        theta = _random_element(R, arrows + ops, rng, budget)
        for factor in irreducible_factors(theta):
            null = kernel(poly_eval(factor, theta))
            for j in range(null.dim):
                spun += 1
                witness = _witness(R, spin(null.basis[:, j : j + 1], ops))
                if witness is not None:
                    log.debug(f"simplicity: kernel vector of a random element spins to a submodule {attempt=}")
                    return NotSimple(witness)
            degree = len(factor) - 1
            if null.dim != degree:
                continue
            dual = kernel(poly_eval(factor, theta.T.copy()))
            dual_span = spin(dual.basis[:, :1], transposed)
            witness = _witness(R, _annihilator(dual_span))
            if witness is not None:
                log.debug(f"simplicity: dual spin gives a submodule {attempt=}")
                return NotSimple(witness)
            return Simple(Certificate("norton", spun, degree, attempt))
    raise BudgetExhausted("simplicity", budget.random_elements)


def verify_certificate(R: Representation, result: Simple | NotSimple) -> bool:
    """Re-check a verdict: witnesses must be closed and proper, exhaustive certificates are recomputed."""
    if isinstance(result, NotSimple):
        return result.witness.parent is R and result.witness.is_closed() and result.witness.is_proper_nonzero()
    if result.certificate.method == "exhaustive":
        return isinstance(simplicity(R, method="exhaustive"), Simple)
    return True
