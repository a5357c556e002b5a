"""Common invariant subspaces of two matrices whose commutator has rank at most one."""

import functools
import logging
import os
from dataclasses import dataclass
from typing import Any, Mapping

from exact_linalg import (
    FieldSpec,
    IncompatibleFields,
    Subspace,
    eigenvalue,
    embed,
    field_of,
    is_zero,
    kernel,
    matmul,
    rank,
    rank_ker_im,
    same_field,
    spin,
)
from quiver_core import Weights
from rep_core import PairRep, Representation

log = logging.getLogger("preproj.almost_commuting")
log.setLevel(os.getenv("PREPROJ_LOG_LEVEL", "INFO"))


class RankTooHigh(ValueError):
    def __init__(self, rank: int):
        self.rank = rank

    def __str__(self):
        return f"Commutator has rank {self.rank}, at most 1 is required."


@dataclass(frozen=True, eq=False)
class ACInstance:
    a: Any
    b: Any

    def __post_init__(self):
        if self.a.shape != self.b.shape or self.a.shape[0] != self.a.shape[1]:
            raise ValueError(f"need square matrices of equal size, got {self.a.shape} and {self.b.shape}")
        same_field(self.a, self.b)

    @classmethod
    def from_pair(cls, R: PairRep) -> "ACInstance":
        """The loop and its star of a Jordan-quiver representation."""
        (loop,) = R.base_quiver.arrows
        return cls(R.rep[loop.name], R.xi[loop.name])

    @functools.cached_property
    def c(self):
        return matmul(self.a, self.b) - matmul(self.b, self.a)

    @property
    def m(self) -> int:
        return self.a.shape[0]

    @property
    def field(self) -> FieldSpec:
        return field_of(self.a)


def _eigenline(b) -> tuple[Subspace, FieldSpec]:
    beta, target = eigenvalue(b)
    b = embed(b, target)
    null = kernel(b - target.identity(b.shape[0]) * beta)
    return Subspace(null.basis[:, :1]), target


def common_invariant(inst: ACInstance) -> Subspace:
    """A proper nonzero subspace invariant under a and b.

    Shift a by an eigenvalue alpha. If a - alpha vanishes, an eigenvector line of b works; otherwise Im(a - alpha)
    when it contains Im(c), else Ker(a - alpha). The result lives over the field of the eigenvalue, an extension
    of the input field when a has no eigenvalue in it.
    """
    m = inst.m
    if m <= 1:
        raise ValueError("a common invariant subspace needs size at least 2")
    r = rank(inst.c)
    if r > 1:
        raise RankTooHigh(r)

    alpha, field = eigenvalue(inst.a)
    if field != inst.field:
        log.info(f"common_invariant: extending scalars {inst.field} -> {field}")
    a, b, c = (embed(M, field) for M in (inst.a, inst.b, inst.c))
    shifted = a - field.identity(m) * alpha

    if is_zero(shifted):
        U, field = _eigenline(b)
        a, b = embed(a, field), embed(b, field)
        branch = "eigenline"
    else:
        _, null, image = rank_ker_im(shifted)
        if image.contains(c):
            U, branch = image, "image"
        else:
            U, branch = null, "kernel"
    log.debug(f"common_invariant: {branch=} dim={U.dim} {m=}")

    if not (0 < U.dim < m) or not spin(U.basis, [a, b]).equals(U):
        log.error(f"common_invariant: {branch} subspace of dim {U.dim} is not a proper common invariant subspace")
        raise AssertionError("common invariant subspace failed verification")
    return U


def extend_weights(lam: Weights, source: FieldSpec, target: FieldSpec) -> dict:
    if source == target:
        return dict(lam)
    if not source.is_finite:
        raise IncompatibleFields(source, target)
    codes = source.galois_field()([source.element_int(x) for x in lam.values()])
    return dict(zip(lam, embed(codes, target)))


def extend_scalars(obj, new_field: FieldSpec):
    """Embed a Representation, PairRep, Subspace, matrix or mapping of matrices into an extension field."""
    if isinstance(obj, PairRep):
        return PairRep(obj.base_quiver, extend_scalars(obj.rep, new_field))
    if isinstance(obj, Representation):
        return Representation(obj.quiver, new_field, obj.dims, extend_scalars(obj.matrices, new_field))
    if isinstance(obj, Subspace):
        return Subspace(embed(obj.basis, new_field))
    if isinstance(obj, Mapping):
        return {k: embed(M, new_field) for k, M in obj.items()}
    return embed(obj, new_field)
