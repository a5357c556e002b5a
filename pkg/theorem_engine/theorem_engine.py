"""Proper nonzero submodules of nearly representations of dimension m * delta over affine quivers.

Each case of the argument is its own finder returning a verified SubmoduleWitness; nontrivial_submodule checks
the hypotheses and dispatches: oriented cycles first, then non-regular X, then regular X spread over several
tubes, and a certified generic search for a single tube.
"""

import enum
import itertools
import logging
import os
from dataclasses import dataclass
from typing import Any

from affine_structure import Decomposition, SummandClass, decompose, hom_lift, pri_split, tube_partition
from almost_commuting import ACInstance, common_invariant, extend_scalars
from exact_linalg import (
    RootsUnavailable,
    Subspace,
    eigenvalue,
    hstack,
    irreducible_factor,
    irreducible_factors,
    is_zero,
    kernel,
    matmul,
    matrix_power,
    poly_eval,
    rank,
    trace,
)
from quiver_core import AffineData, DisconnectedQuiver, Quiver, affine_classify, defect, euler_form, weights_dot
from rep_core import (
    BudgetExhausted,
    NotSimple,
    PairRep,
    Representation,
    SearchBudget,
    SubRep,
    classify_relation,
    conjugate_pair,
    ext1_dim,
    hom_dim,
    hom_space,
    moment_defect,
    phi_map,
    projective,
    reorient,
    simplicity,
    spin_submodule,
)

log = logging.getLogger("preproj.theorem_engine")
log.setLevel(os.getenv("PREPROJ_LOG_LEVEL", "INFO"))


class Provenance(str, enum.Enum):
    NON_REGULAR = "NonRegular"
    MULTI_TUBE = "MultiTube"
    SINGLE_TUBE_SEARCH = "SingleTubeSearch"
    CYCLE_REORIENT = "CycleReorient"
    LOOP_LEMMA = "LoopLemma"
    GENERIC_SEARCH = "GenericSearch"
    WEYL_CENTRE = "WeylCentre"
    EXT_SPLIT = "ExtSplit"


class Hypothesis(str, enum.Enum):
    NOT_NEARLY = "not a nearly representation"
    NOT_AFFINE = "the quiver is not affine"
    NOT_EXTENDING = "the vertex is not extending"
    NOT_DELTA_MULTIPLE = "the dimension vector is not a multiple of delta"
    MULTIPLICITY = "m <= 1"
    WEIGHT_PAIRING = "lambda . delta != 0"


class PreconditionFailed(ValueError):
    def __init__(self, hypothesis: Hypothesis, detail: str = ""):
        self.hypothesis = hypothesis
        self.detail = detail

    def __str__(self):
        suffix = f" ({self.detail})" if self.detail else ""
        return f"Hypothesis failed: {self.hypothesis.value}{suffix}."


class HypothesisViolated(ValueError):
    def __init__(self, case: str, reason: str):
        self.case = case
        self.reason = reason

    def __str__(self):
        return f"{self.case} does not apply: {self.reason}."


class SingleTube(ValueError):
    def __init__(self, groups: int):
        self.groups = groups

    def __str__(self):
        return f"The regular summands form {self.groups} tube group(s), at least 2 are needed."


class NotACycle(ValueError):
    def __init__(self, quiver: Quiver):
        self.quiver = quiver

    def __str__(self):
        return f"Quiver with arrows {self.quiver.arrow_names()} is not an oriented cycle."


class CaseFailed(RuntimeError):
    """A case produced no verified witness; the dispatcher falls back to generic search."""

    def __init__(self, case: str, reason: str):
        self.case = case
        self.reason = reason

    def __str__(self):
        return f"{self.case} failed: {self.reason}."


class ExtensionRequired(RuntimeError):
    """Simple over the base field: witnesses exist only after adjoining a root of `minimal_polynomial`."""

    def __init__(self, case: str, field, minimal_polynomial: list):
        self.case = case
        self.field = field
        self.minimal_polynomial = minimal_polynomial

    def __str__(self):
        coeffs = [self.field.encode(c) for c in self.minimal_polynomial]
        return f"{self.case}: no submodule over {self.field}, one needs a root of the polynomial {coeffs}."


class TheoremAssertionFailed(AssertionError):
    def __init__(self, case: str, reason: str):
        self.case = case
        self.reason = reason

    def __str__(self):
        return f"{self.case}: {self.reason}."


@dataclass(frozen=True, eq=False)
class SubmoduleWitness:
    """A subrepresentation of the input's double-quiver representation, possibly after extending scalars."""

    sub: SubRep
    provenance: Provenance
    trail: tuple = ()

    @property
    def field(self):
        return self.sub.parent.field

    @property
    def dims(self) -> dict:
        return self.sub.dims

    def verify(self) -> bool:
        return self.sub.is_closed() and self.sub.is_proper_nonzero()

    def to_json(self) -> dict:
        return {
            "provenance": self.provenance.value,
            "trail": [p.value for p in self.trail],
            "field": self.field.to_json(),
            "dims": self.dims,
            "basis": self.sub.to_json(),
        }


def _checked(witness: SubmoduleWitness) -> SubmoduleWitness:
    if not witness.verify():
        raise CaseFailed(witness.provenance.value, f"subspaces of dims {witness.dims} are not a proper submodule")
    return witness


def _multiplicity(Q: Quiver, aff: AffineData, dims: dict) -> int | None:
    """m with dims = m * delta, or None."""
    first = Q.vertices[0]
    m, rest = divmod(dims[first], aff.delta[first])
    if rest or any(dims[u] != m * d for u, d in aff.delta.items()):
        return None
    return m


def _block_zero(E: dict, D: Decomposition, rows: list, cols: list) -> bool:
    return all(is_zero(D.blocks.block(M, u, rows, u, cols)) for u, M in E.items())


def _from_parts(R: PairRep, D: Decomposition, parts: list, provenance: Provenance) -> SubmoduleWitness:
    spaces = {u: Subspace(T[:, D.blocks.indices(u, parts)]) for u, T in D.base_change.items()}
    return SubmoduleWitness(SubRep(R.rep, spaces), provenance)


def _split(R: PairRep, aff: AffineData, seed: int, budget: SearchBudget, D: Decomposition | None) -> Decomposition:
    if D is None:
        D = decompose(R.X, seed=seed, budget=budget)
    if any(c is None for c in D.classes):
        D = pri_split(R.base_quiver, aff, D)
    return D


def _defects(R: PairRep, lam, D: Decomposition) -> dict:
    """Moment defects in the basis where X is block diagonal."""
    return moment_defect(conjugate_pair(R, D.base_change), lam).per_vertex


def _endomorphism_witness(R: PairRep, provenance: Provenance, trail: tuple) -> SubmoduleWitness:
    """The kernel of f - alpha for a non-scalar endomorphism f and an eigenvalue alpha, over the field of alpha."""
    first = next(u for u in R.base_quiver.vertices if R.dims[u])
    irrational = None
    for f in hom_space(R.rep, R.rep):
        try:
            alpha, field = eigenvalue(f[first])
        except RootsUnavailable:
            if irrational is None:
                irrational = irreducible_factor(f[first])
            continue
        parent = extend_scalars(R.rep, field)
        shifted = {u: M - field.identity(M.shape[0]) * alpha for u, M in extend_scalars(f, field).items()}
        spaces = {u: kernel(M) if M.size else Subspace.zero(field, 0) for u, M in shifted.items()}
        sub = SubRep(parent, spaces)
        if sub.is_proper_nonzero():
            log.info(f"no submodule over {R.field}, extending scalars to {field}")
            return _checked(SubmoduleWitness(sub, provenance, trail))
    if irrational is not None:
        log.info(f"{provenance.value}: endomorphisms have no eigenvalue over {R.field}")
        raise ExtensionRequired(provenance.value, R.field, irrational)
    log.error(f"{provenance.value}: simple with trivial endomorphism ring, dims {R.dims}")
    raise TheoremAssertionFailed(provenance.value, "the representation is absolutely simple")


def _generic(R: PairRep, budget: SearchBudget, seed: int, provenance: Provenance, trail: tuple = ()):
    result = simplicity(R.rep, budget, seed)
    if isinstance(result, NotSimple):
        return _checked(SubmoduleWitness(result.witness, provenance, trail))
    return _endomorphism_witness(R, provenance, trail)


# cases


def find_submodule_nonregular(
    R: PairRep,
    lam,
    aff: AffineData,
    seed: int = 0,
    budget: SearchBudget = SearchBudget(),
    decomposition: Decomposition | None = None,
) -> SubmoduleWitness:
    """X = P + R + I with P and I nonzero: R + I is a submodule when the PR block of the defect vanishes, else I."""
    D = _split(R, aff, seed, budget, decomposition)
    P = D.indices(SummandClass.PREPROJECTIVE)
    Rg = D.indices(SummandClass.REGULAR)
    I = D.indices(SummandClass.PREINJECTIVE)
    if not P or not I:
        raise HypothesisViolated(Provenance.NON_REGULAR.value, "X has no preprojective or no preinjective summand")
    E = _defects(R, lam, D)
    if not _block_zero(E, D, P, I):
        log.error("find_submodule_nonregular: Phi_PI(xi_PI) is not zero")
        raise TheoremAssertionFailed(Provenance.NON_REGULAR.value, "the PI block of the defect is not zero")
    if _block_zero(E, D, P, Rg):
        parts = Rg + I
    elif _block_zero(E, D, Rg, I):
        parts = I
    else:
        log.error("find_submodule_nonregular: neither the PR nor the RI block vanishes")
        raise TheoremAssertionFailed(Provenance.NON_REGULAR.value, "neither the PR nor the RI block is zero")
    log.debug(f"find_submodule_nonregular: {len(P)=} {len(Rg)=} {len(I)=} parts={parts}")
    return _checked(_from_parts(R, D, sorted(parts), Provenance.NON_REGULAR))


def _block_pair(R: PairRep, D: Decomposition, parts: list) -> PairRep:
    """The diagonal block of the conjugated pair on the given summands."""
    C = conjugate_pair(R, D.base_change)
    Q = R.base_quiver
    X = {a.name: D.blocks.block(C.rep[a.name], a.head, parts, a.tail, parts) for a in Q.arrows}
    xi = {a.name: D.blocks.block(C.xi[a.name], a.tail, parts, a.head, parts) for a in Q.arrows}
    dims = {u: len(D.blocks.indices(u, parts)) for u in Q.vertices}
    return PairRep.from_parts(Q, R.field, dims, X, xi)


def find_submodule_multitube(
    R: PairRep,
    lam,
    aff: AffineData,
    v: Any,
    seed: int = 0,
    budget: SearchBudget = SearchBudget(),
    decomposition: Decomposition | None = None,
) -> SubmoduleWitness:
    """Regular X split as U + V with V the last tube group.

    For dim V = delta one of V and U is a submodule. For dim V = m' delta the search recurses on V and returns the
    inner witness W, or U + W when the defect maps W into U.
    """
    v = str(v)
    Q = R.base_quiver
    F = R.field
    D = _split(R, aff, seed, budget, decomposition)
    if D.indices(SummandClass.PREPROJECTIVE) or D.indices(SummandClass.PREINJECTIVE):
        raise HypothesisViolated(Provenance.MULTI_TUBE.value, "X is not regular")
    regular = D.indices(SummandClass.REGULAR)
    partition = tube_partition([D.summands[k] for k in regular])
    if len(partition.groups) < 2:
        raise SingleTube(len(partition.groups))
    V = [regular[i] for i in partition.groups[-1]]
    U = [k for k in regular if k not in V]
    m_prime = _multiplicity(Q, aff, partition.dims[-1])
    if not m_prime:
        reason = f"tube group of dims {partition.dims[-1]} is not a multiple of delta"
        raise CaseFailed(Provenance.MULTI_TUBE.value, reason)
    E = _defects(R, lam, D)

    if m_prime == 1:
        if not _block_zero(E, D, V, V):
            log.error("find_submodule_multitube: the defect restricted to a delta block is not zero")
            raise TheoremAssertionFailed(Provenance.MULTI_TUBE.value, "the VV block of the defect is not zero")
        if _block_zero(E, D, U, V):
            parts = V
        elif _block_zero(E, D, V, U):
            parts = U
        else:
            log.error("find_submodule_multitube: neither the UV nor the VU block vanishes")
            raise TheoremAssertionFailed(Provenance.MULTI_TUBE.value, "neither the UV nor the VU block is zero")
        log.debug(f"find_submodule_multitube: {len(partition.groups)} groups, returning {parts=}")
        return _checked(_from_parts(R, D, sorted(parts), Provenance.MULTI_TUBE))

    inner = _dispatch(_block_pair(R, D, V), lam, v, aff, budget, seed + 1)
    if inner.field != F:
        raise CaseFailed(Provenance.MULTI_TUBE.value, f"the inner witness lives over {inner.field}")
    if defect(Q, aff, inner.dims):
        raise CaseFailed(Provenance.MULTI_TUBE.value, f"the inner witness of dims {inner.dims} is not regular")
    spaces = {}
    maps_into_U = False
    for u in Q.vertices:
        n = R.dims[u]
        rows_V, rows_U = D.blocks.indices(u, V), D.blocks.indices(u, U)
        W = F.zeros(n, inner.dims[u])
        W[rows_V, :] = inner.sub.spaces[u].basis
        if not is_zero(matmul(E[u], W)[rows_U, :]):
            maps_into_U = True
        spaces[u] = W
    if maps_into_U:
        for u in Q.vertices:
            spaces[u] = hstack([F.identity(R.dims[u])[:, D.blocks.indices(u, U)], spaces[u]], field=F, rows=R.dims[u])
    spaces = {u: Subspace(matmul(D.base_change[u], B)) for u, B in spaces.items()}
    log.debug(f"find_submodule_multitube: recursion on m'={m_prime}, {maps_into_U=}")
    witness = SubmoduleWitness(SubRep(R.rep, spaces), Provenance.MULTI_TUBE, (inner.provenance,) + inner.trail)
    return _checked(witness)


def find_submodule_weyl(
    R: PairRep, lam, budget: SearchBudget = SearchBudget(), seed: int = 0
) -> SubmoduleWitness:
    """A Jordan-quiver module with lambda != 0 in characteristic p: x^p and y^p are central.

    A proper kernel of g(x^p) or g(y^p) for an irreducible factor g is a submodule. When both act as scalars the
    module is a sum of p-dimensional simples, and a vector killed by x - beta spins to one of them.
    """
    Q = R.base_quiver
    F = R.field
    if len(Q.vertices) != 1 or len(Q.arrows) != 1:
        raise HypothesisViolated(Provenance.WEYL_CENTRE.value, "needs the Jordan quiver")
    (u,) = Q.vertices
    (loop,) = Q.arrows
    weight = F.scalar({str(k): x for k, x in lam.items()}[u])
    if not F.is_finite or weight == 0:
        raise HypothesisViolated(Provenance.WEYL_CENTRE.value, "needs lambda != 0 in positive characteristic")
    if not classify_relation(R, lam, u).is_module:
        raise HypothesisViolated(Provenance.WEYL_CENTRE.value, "the relation does not hold")
    x, y = R.rep[loop.name], R.xi[loop.name]
    n, p = R.dims[u], F.p

    central = [matrix_power(x, p), matrix_power(y, p)]
    for z in central:
        for g in irreducible_factors(z):
            null = kernel(poly_eval(g, z))
            if 0 < null.dim < n:
                log.debug(f"find_submodule_weyl: kernel of a central factor, dim {null.dim}")
                return _checked(SubmoduleWitness(SubRep(R.rep, {u: null}), Provenance.WEYL_CENTRE))

    scalar = all(is_zero(z - F.identity(n) * z[0, 0]) for z in central)
    if scalar:
        alpha = central[0][0, 0]
        beta = alpha ** (p ** (F.k - 1))
        N = matrix_power(x - F.identity(n) * beta, p - 1)
        candidates = [N[:, j] for j in range(n) if not is_zero(N[:, j])]
        candidates += [F.identity(n)[:, j] for j in range(n)]
        for c in candidates:
            sub = spin_submodule(R.rep, [(u, c)])
            if sub.is_proper_nonzero():
                log.debug(f"find_submodule_weyl: spun a submodule of dim {sub.total_dim}")
                return _checked(SubmoduleWitness(sub, Provenance.WEYL_CENTRE))
    log.info("find_submodule_weyl: central elements give nothing, falling back to generic search")
    return _generic(R, budget, seed, Provenance.GENERIC_SEARCH)


def find_submodule_cycle(
    R: PairRep, lam, v: Any, seed: int = 0, budget: SearchBudget = SearchBudget()
) -> SubmoduleWitness:
    """Loops go through the almost-commuting lemma; longer cycles are reoriented to an acyclic quiver."""
    v = str(v)
    Q = R.base_quiver
    if not Q.is_oriented_cycle():
        raise NotACycle(Q)
    F = R.field
    lam = {str(k): x for k, x in lam.items()}

    if len(Q.vertices) == 1:
        weight = F.scalar(lam[v])
        if weight == 0:
            try:
                U = common_invariant(ACInstance.from_pair(R))
            except RootsUnavailable:
                return _generic(R, budget, seed, Provenance.GENERIC_SEARCH)
            if U.field == F:
                return _checked(SubmoduleWitness(SubRep(R.rep, {v: U}), Provenance.LOOP_LEMMA))
            try:
                result = simplicity(R.rep, budget, seed)
                if isinstance(result, NotSimple):
                    return _checked(SubmoduleWitness(result.witness, Provenance.GENERIC_SEARCH))
            except BudgetExhausted:
                pass
            log.info(f"find_submodule_cycle: invariant subspace over {U.field}")
            parent = extend_scalars(R.rep, U.field)
            return _checked(SubmoduleWitness(SubRep(parent, {v: U}), Provenance.LOOP_LEMMA))
        if classify_relation(R, lam, v).is_module and F.is_finite:
            return find_submodule_weyl(R, lam, budget, seed)
        return _generic(R, budget, seed, Provenance.GENERIC_SEARCH)

    flipped = reorient(R, [Q.arrows[-1].name])
    aff = affine_classify(flipped.base_quiver)
    inner = _dispatch(flipped, lam, v, aff, budget, seed)
    parent = R.rep if inner.field == F else extend_scalars(R.rep, inner.field)
    log.debug(f"find_submodule_cycle: pulled back {inner.provenance.value} witness")
    witness = SubmoduleWitness(
        SubRep(parent, dict(inner.sub.spaces)), Provenance.CYCLE_REORIENT, (inner.provenance,) + inner.trail
    )
    return _checked(witness)


def find_submodule_ext_split(R: PairRep, lam, aff: AffineData, seed: int = 0) -> SubmoduleWitness:
    """For a module with X = U + V and Ext^1(U, V) = 0, V is a submodule."""
    Q = R.base_quiver
    if not classify_relation(R, lam, Q.vertices[0]).is_module:
        raise HypothesisViolated(Provenance.EXT_SPLIT.value, "the relation does not hold")
    D = decompose(R.X, seed=seed)
    k = len(D.summands)
    ext = [[ext1_dim(Q, D.summands[i], D.summands[j]) for j in range(k)] for i in range(k)]
    for size in range(1, k):
        for V in itertools.combinations(range(k), size):
            U = [i for i in range(k) if i not in V]
            if any(ext[i][j] for i in U for j in V):
                continue
            log.debug(f"find_submodule_ext_split: {V=} of {k} summands")
            return _checked(_from_parts(R, D, list(V), Provenance.EXT_SPLIT))
    raise HypothesisViolated(Provenance.EXT_SPLIT.value, f"no split of {k} summands has Ext^1(U, V) = 0")


# dispatch


def _dispatch(R: PairRep, lam, v: str, aff: AffineData, budget: SearchBudget, seed: int) -> SubmoduleWitness:
    Q = R.base_quiver
    if Q.is_oriented_cycle():
        return find_submodule_cycle(R, lam, v, seed, budget)
    try:
        D = _split(R, aff, seed, budget, None)
        if D.indices(SummandClass.PREPROJECTIVE) or D.indices(SummandClass.PREINJECTIVE):
            return find_submodule_nonregular(R, lam, aff, seed, budget, D)
        regular = [D.summands[k] for k in D.indices(SummandClass.REGULAR)]
        if len(tube_partition(regular).groups) >= 2:
            return find_submodule_multitube(R, lam, aff, v, seed, budget, D)
        return _generic(R, budget, seed, Provenance.SINGLE_TUBE_SEARCH)
    except CaseFailed as e:
        log.info(f"{e}; falling back to generic search")
        return _generic(R, budget, seed, Provenance.GENERIC_SEARCH)


def nontrivial_submodule(
    R: PairRep, lam, v: Any, budget: SearchBudget = SearchBudget(), seed: int = 0
) -> SubmoduleWitness:
    """A verified proper nonzero submodule of a nearly representation of dimension m * delta, m > 1."""
    v = str(v)
    Q = R.base_quiver
    try:
        aff = affine_classify(Q)
    except DisconnectedQuiver as e:
        raise PreconditionFailed(Hypothesis.NOT_AFFINE, str(e))
    if not aff.is_affine:
        raise PreconditionFailed(Hypothesis.NOT_AFFINE)
    if v not in aff.extending_vertices:
        raise PreconditionFailed(Hypothesis.NOT_EXTENDING, v)
    m = _multiplicity(Q, aff, R.dims)
    if m is None:
        raise PreconditionFailed(Hypothesis.NOT_DELTA_MULTIPLE, str(R.dims))
    if m <= 1:
        raise PreconditionFailed(Hypothesis.MULTIPLICITY, f"m = {m}")
    lam = {str(k): x for k, x in lam.items()}
    weights = {u: R.field.scalar(lam[u]) for u in Q.vertices}
    if weights_dot(weights, aff.delta) != 0:
        raise PreconditionFailed(Hypothesis.WEIGHT_PAIRING)
    report = classify_relation(R, weights, v)
    if not report.is_nearly:
        raise PreconditionFailed(Hypothesis.NOT_NEARLY, f"defect ranks {report.defect.ranks}")
    log.debug(f"nontrivial_submodule: {m=} {report.classification.value}")
    witness = _dispatch(R, weights, v, aff, budget, seed)
    if not witness.verify():
        log.error(f"nontrivial_submodule: {witness.provenance.value} witness failed re-verification")
        raise TheoremAssertionFailed(witness.provenance.value, "witness failed re-verification")
    return witness


# diagnostics


def delta_multiple(X: Representation, v: Any) -> int:
    """m with dim X = m * delta, read off as dim Hom(P(v), X) for a regular X with <dim X, dim X> = 0."""
    v = str(v)
    Q = X.quiver
    aff = affine_classify(Q)
    if not aff.is_affine:
        raise ValueError("delta_multiple needs an affine quiver")
    if euler_form(Q, X.dims, X.dims) != 0:
        raise ValueError(f"<dim X, dim X> != 0 for dims {X.dims}")
    if aff.has_oriented_cycle:
        return X.dims[v] // aff.delta[v]
    if defect(Q, aff, X.dims) != 0:
        raise ValueError(f"dims {X.dims} have nonzero defect")
    return hom_dim(projective(Q, v, X.field), X) // aff.delta[v]


@dataclass(frozen=True, eq=False)
class TraceCheck:
    """local = tr(Phi(theta)_v f_v) for a lift f with f_v(x) = e_j; total sums the trace pairing over all vertices.

    The pairing of Im Phi with Hom(P, I) vanishes, so total is zero. A defect supported at v with rank one would
    make local one.
    """

    local: Any
    total: Any
    supported: bool
    lift: dict

    @property
    def contradiction(self) -> bool:
        return self.supported and self.local != self.total


def hom_lift_contradiction(P: Representation, I: Representation, theta: dict, v: Any) -> TraceCheck:
    v = str(v)
    image = phi_map(P, I)(theta)
    M = image[v]
    j = next((j for j in range(M.shape[1]) if not is_zero(M[:, j])), None)
    if j is None:
        raise ValueError(f"Phi(theta) vanishes at {v!r}")
    target = I.field.zeros(I.dims[v])
    target[j] = I.field.one()
    f = hom_lift(P, I, v, M[:, j], target)
    local = trace(matmul(M, f[v]))
    total = I.field.zero()
    for u in P.quiver.vertices:
        if P.dims[u] and I.dims[u]:
            total = total + trace(matmul(image[u], f[u]))
    supported = rank(M) == 1 and all(is_zero(N) for u, N in image.items() if u != v)
    return TraceCheck(local, total, supported, f)
