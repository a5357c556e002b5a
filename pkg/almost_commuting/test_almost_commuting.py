import numpy as np
import pytest

from almost_commuting.almost_commuting import (
    ACInstance,
    RankTooHigh,
    common_invariant,
    extend_scalars,
    extend_weights,
)
from exact_linalg import RATIONALS, FieldSpec, char_roots, equal, inverse, matmul, poly_eval, random_invertible, rank
from quiver_core import named_quiver
from rep_core import PairRep, classify_relation

FIELDS = [FieldSpec.gf(7), FieldSpec.gf(3, 2), RATIONALS]


def rank_one_instance(F, rng):
    """a = p(b) + x y^T with x an eigenvector of b, disguised by a random change of basis."""
    m = int(rng.integers(2, 6))
    b = F.random_matrix(rng, m, m)
    b[:, 0] = F.zero()
    b[0, 0] = F.random_scalar(rng)
    x = F.zeros(m, 1)
    x[0, 0] = F.one()
    y = F.random_matrix(rng, 1, m)
    a = poly_eval([F.random_scalar(rng) for _ in range(3)], b) + matmul(x, y)
    T = random_invertible(F, m, rng)
    T_inv = inverse(T)
    return ACInstance(matmul(T_inv, matmul(a, T)), matmul(T_inv, matmul(b, T)))


def check(inst, U):
    a, b = (extend_scalars(M, U.field) for M in (inst.a, inst.b))
    assert 0 < U.dim < inst.m
    assert U.is_invariant(a) and U.is_invariant(b)


def test_a_zero():
    GF5 = FieldSpec.gf(5)
    inst = ACInstance(GF5.zeros(2, 2), GF5.array([[0, 1], [0, 0]]))
    U = common_invariant(inst)
    assert U.dim == 1 and U.contains(GF5.array([1, 0], ndim=1))


def test_jordan_nearly_over_rationals():
    inst = ACInstance(RATIONALS.array([[0, 1], [0, 0]]), RATIONALS.array([[0, 0], [0, 1]]))
    assert rank(inst.c) == 1
    U = common_invariant(inst)
    assert U.contains(RATIONALS.array([1, 0], ndim=1))
    check(inst, U)


def test_commuting_with_distinct_eigenvalues():
    F = FieldSpec.gf(7)
    a = F.array([[1, 0, 0], [0, 1, 0], [0, 0, 2]])
    b = F.array([[3, 4, 0], [5, 6, 0], [0, 0, 1]])
    inst = ACInstance(a, b)
    assert rank(inst.c) == 0
    U = common_invariant(inst)
    check(inst, U)


def test_extension_when_no_base_eigenvalue():
    F = FieldSpec.gf(3)
    rotation = F.array([[0, -1], [1, 0]])
    inst = ACInstance(rotation, F.identity(2))
    U = common_invariant(inst)
    assert U.field.order == 9
    check(inst, U)


def test_from_pair():
    F = FieldSpec.gf(5)
    Q = named_quiver("jordan")
    R = PairRep.from_parts(Q, F, {"0": 2}, {"a": F.identity(2)}, {"a": F.array([[0, 1], [0, 0]])})
    inst = ACInstance.from_pair(R)
    assert equal(inst.b, R.xi["a"])


def test_rank_too_high():
    F = FieldSpec.gf(7)
    a = F.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    b = a.T.copy()
    with pytest.raises(RankTooHigh):
        common_invariant(ACInstance(a, b))


def _coverage(field, count, seed):
    rng = np.random.default_rng(seed)
    done = 0
    while done < count:
        inst = rank_one_instance(field, rng)
        assert rank(inst.c) <= 1
        if not field.is_finite and not char_roots(inst.a, extend=False).roots:
            continue
        check(inst, common_invariant(inst))
        done += 1
    for _ in range(count // 5):
        m = int(rng.integers(3, 6))
        inst = ACInstance(field.random_matrix(rng, m, m), field.random_matrix(rng, m, m))
        if rank(inst.c) >= 2:
            with pytest.raises(RankTooHigh):
                common_invariant(inst)


@pytest.mark.parametrize("field", FIELDS, ids=str)
def test_lemma_coverage(field):
    _coverage(field, 40, 5)


@pytest.mark.slow
@pytest.mark.parametrize("field", FIELDS, ids=str)
def test_lemma_coverage_full(field):
    _coverage(field, 500, 6)


def test_extend_scalars_preserves_rank():
    rng = np.random.default_rng(1)
    small, big = FieldSpec.gf(3), FieldSpec.gf(3, 2)
    for _ in range(10):
        M = small.random_matrix(rng, 3, 4)
        assert rank(extend_scalars(M, big)) == rank(M)
    assert equal(extend_scalars(FieldSpec.gf(2).identity(3), FieldSpec.gf(2, 2)), FieldSpec.gf(2, 2).identity(3))


def test_extend_then_classify():
    F, big = FieldSpec.gf(3, 2), FieldSpec.gf(3, 4)
    Q = named_quiver("jordan")
    a = F.array([[0, 1], [0, 0]])
    b = F.array([[0, 0], [0, 1]])
    R = PairRep.from_parts(Q, F, {"0": 2}, {"a": a}, {"a": b})
    lam = {"0": F.scalar([0, 1])}
    before = classify_relation(R, lam, "0")
    after = classify_relation(extend_scalars(R, big), extend_weights(lam, F, big), "0")
    assert after.classification is before.classification
    assert after.defect.ranks == before.defect.ranks
