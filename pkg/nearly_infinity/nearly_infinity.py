"""Nearly representations of Q as representations of Q_inf.

Q_inf adds a vertex ∞ and an arrow a∞: ∞ -> v with weight zero at ∞. ell and rr put X_v at ∞ and use the
moment-map defect X_{c,v} for the connecting maps; gamma is the image of the natural map between them.
"""

import logging
import os
from dataclasses import dataclass
from typing import Any

from exact_linalg import FieldSpec, rank_ker_im
from quiver_core import CONNECTING_ARROW, INFINITY, Quiver, Weights, double_quiver, infinity_quiver, starred
from rep_core import PairRep, classify_relation, hom_dim, moment_defect, zero_rep

log = logging.getLogger("preproj.nearly_infinity")
log.setLevel(os.getenv("PREPROJ_LOG_LEVEL", "INFO"))


class NotNearly(ValueError):
    def __init__(self, ranks: dict, vertex: str):
        self.ranks = ranks
        self.vertex = vertex

    def __str__(self):
        return f"Not a nearly representation with respect to {self.vertex!r}: defect ranks {self.ranks}."


class NotAModule(ValueError):
    def __init__(self, ranks: dict):
        self.ranks = ranks

    def __str__(self):
        return f"Relations fail over Q_inf: defect ranks {self.ranks}."


@dataclass(frozen=True, eq=False)
class InfRep:
    """A pair representation over Q_inf; `quiver` is the original Q and `vertex` the end of the connecting arrow."""

    pair: PairRep
    quiver: Quiver
    vertex: str

    @property
    def connecting(self) -> tuple:
        return self.pair.rep[CONNECTING_ARROW], self.pair.rep[starred(CONNECTING_ARROW)]

    @property
    def dim_infinity(self) -> int:
        return self.pair.dims[INFINITY]


def infinity_weights(lam: Weights, Q: Quiver, v: Any) -> dict:
    return infinity_quiver(Q, v, lam)[1]


def _extend(R: PairRep, v: str, inf_dim: int, X_conn, xi_conn) -> InfRep:
    Q = R.base_quiver
    Qinf, _ = infinity_quiver(Q, v, {u: 0 for u in Q.vertices})
    X = {a.name: R.rep[a.name] for a in Q.arrows}
    xi = dict(R.xi)
    X[CONNECTING_ARROW], xi[CONNECTING_ARROW] = X_conn, xi_conn
    dims = {**R.dims, INFINITY: inf_dim}
    return InfRep(PairRep.from_parts(Qinf, R.field, dims, X, xi), Q, v)


def ell(R: PairRep, lam: Weights, v: Any) -> InfRep:
    """X_inf = X_v, X_a = -X_{c,v}, X_a* = 1."""
    v = str(v)
    defect = moment_defect(R, lam).per_vertex[v]
    return _extend(R, v, R.dims[v], -defect, R.field.identity(R.dims[v]))


def rr(R: PairRep, lam: Weights, v: Any) -> InfRep:
    """X_inf = X_v, X_a = 1, X_a* = -X_{c,v}."""
    v = str(v)
    defect = moment_defect(R, lam).per_vertex[v]
    return _extend(R, v, R.dims[v], R.field.identity(R.dims[v]), -defect)


def natural_map(R: PairRep, lam: Weights, v: Any) -> dict:
    """The homomorphism ell(R) -> rr(R): identity on the vertices of Q, -X_{c,v} at ∞."""
    v = str(v)
    F = R.field
    out = {u: F.identity(d) for u, d in R.dims.items()}
    out[INFINITY] = -moment_defect(R, lam).per_vertex[v]
    return out


def _image_basis(R: PairRep, lam: Weights, v: str):
    defect = moment_defect(R, lam).per_vertex[v]
    image = rank_ker_im(defect).image
    return defect, image


def gamma(R: PairRep, lam: Weights, v: Any) -> InfRep:
    """The image of the natural map; gamma(R)_∞ is Im X_{c,v} with basis C, a∞ acts by C."""
    v = str(v)
    report = classify_relation(R, lam, v)
    if not report.is_nearly:
        raise NotNearly(report.defect.ranks, v)
    defect, image = _image_basis(R, lam, v)
    Y = _extend(R, v, image.dim, image.basis, image.coordinates(-defect))
    log.debug(f"gamma: dim at infinity {image.dim}")
    return Y


def gamma_factorization(R: PairRep, lam: Weights, v: Any) -> tuple[dict, dict]:
    """The surjection ell(R) -> gamma(R) and the injection gamma(R) -> rr(R); they compose to natural_map."""
    v = str(v)
    defect, image = _image_basis(R, lam, v)
    F = R.field
    surjection = {u: F.identity(d) for u, d in R.dims.items()}
    injection = dict(surjection)
    surjection[INFINITY] = image.coordinates(-defect)
    injection[INFINITY] = image.basis
    return surjection, injection


def restrict(Y: InfRep) -> PairRep:
    """Forget ∞ and the connecting arrows."""
    Q = Y.quiver
    X = {a.name: Y.pair.rep[a.name] for a in Q.arrows}
    xi = {a.name: Y.pair.xi[a.name] for a in Q.arrows}
    dims = {u: Y.pair.dims[u] for u in Q.vertices}
    return PairRep.from_parts(Q, Y.pair.field, dims, X, xi)


def simple_infinity(Qinf: Quiver, field: FieldSpec) -> PairRep:
    """S(∞) over the pair quiver of Q_inf."""
    return PairRep(Qinf, zero_rep(double_quiver(Qinf), field, {u: int(u == INFINITY) for u in Qinf.vertices}))


def is_bistable(Y: InfRep, lam_inf: Weights) -> bool:
    """No nonzero homomorphism to or from S(∞); raises NotAModule unless every relation of Q_inf holds."""
    defect = moment_defect(Y.pair, lam_inf)
    if not defect.is_zero():
        raise NotAModule(defect.ranks)
    S = simple_infinity(Y.pair.base_quiver, Y.pair.field).rep
    return hom_dim(S, Y.pair.rep) == 0 and hom_dim(Y.pair.rep, S) == 0
