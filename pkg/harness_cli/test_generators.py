import numpy as np
import pytest

from exact_linalg import RATIONALS, FieldSpec, equal, matmul
from harness_cli.generators import (
    GenSpec,
    Infeasible,
    Mode,
    RetriesExhausted,
    gen_nearly,
    random_weights,
    weyl_matrices,
    weyl_pair,
    with_seed,
)
from quiver_core import Arrow, Quiver, affine_classify, jordan, named_quiver, weights_dot
from rep_core import RelationClass, classify_relation, moment_defect

GF5 = FieldSpec.gf(5)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_weyl_matrices_commutator(p):
    F = FieldSpec.gf(p)
    x, y = weyl_matrices(F, p)
    assert equal(matmul(x, y) - matmul(y, x), F.identity(p))


@pytest.mark.parametrize("p, m", [(2, 1), (3, 2), (5, 1)])
def test_weyl_pair_is_module(p, m):
    R = weyl_pair(p, m, seed=4)
    assert R.dims == {"0": m * p}
    assert moment_defect(R, {"0": 1}).is_zero()


def test_random_weights_orthogonal_to_delta():
    Q = named_quiver("dtilde4")
    delta = affine_classify(Q).delta
    lam = random_weights(Q, GF5, delta, "1", np.random.default_rng(3))
    assert set(lam) == set(Q.vertices)
    assert weights_dot(lam, delta) == 0


def test_spec_rejects_negative_dims():
    with pytest.raises(ValueError):
        GenSpec(jordan(), "0", {"0": 0}, {"0": -1}, GF5)


def test_spec_rejects_unknown_vertex():
    with pytest.raises(ValueError):
        GenSpec(jordan(), "7", {"0": 0}, {"0": 2}, GF5)


def test_multiple_of_delta_needs_affine_quiver():
    a2 = Quiver(("1", "2"), (Arrow("a", "1", "2"),))
    with pytest.raises(Infeasible):
        GenSpec.multiple_of_delta(a2, GF5, 2)


def test_nonzero_pairing_is_infeasible():
    spec = GenSpec(jordan(), "0", {"0": 1}, {"0": 2}, RATIONALS)
    with pytest.raises(Infeasible):
        gen_nearly(spec)


def test_weyl_sum_needs_positive_characteristic():
    spec = GenSpec(jordan(), "0", {"0": 0}, {"0": 2}, RATIONALS, mode=Mode.WEYL_SUM)
    with pytest.raises(Infeasible):
        gen_nearly(spec)


def test_weyl_sum_over_gf2():
    R = gen_nearly(GenSpec(jordan(), "0", {"0": 1}, {"0": 4}, FieldSpec.gf(2), mode=Mode.WEYL_SUM))
    assert moment_defect(R, {"0": 1}).is_zero()


def test_weyl_sum_needs_nonzero_weight():
    spec = GenSpec(jordan(), "0", {"0": 0}, {"0": 5}, FieldSpec.gf(5), mode=Mode.WEYL_SUM)
    with pytest.raises(Infeasible):
        gen_nearly(spec)


def test_conjugated_sum_needs_delta_multiple():
    Q = named_quiver("kronecker")
    spec = GenSpec(Q, "1", {"1": 0, "2": 0}, {"1": 2, "2": 1}, GF5, mode=Mode.CONJUGATED_SUM)
    with pytest.raises(Infeasible):
        gen_nearly(spec)


@pytest.mark.parametrize("mode", [Mode.SOLVE_NEARLY, Mode.CONJUGATED_SUM, Mode.ELL_LIFT])
@pytest.mark.parametrize("name", ["kronecker", "cycle:2", "dtilde4"])
def test_modes_produce_nearly_instances(name, mode):
    spec = GenSpec.multiple_of_delta(named_quiver(name), GF5, 2, seed=11, mode=mode)
    R = gen_nearly(spec)
    assert R.dims == spec.dims
    assert classify_relation(R, spec.weights, spec.vertex).is_nearly


def test_same_seed_same_instance():
    spec = GenSpec.multiple_of_delta(named_quiver("kronecker"), GF5, 2, seed=21)
    assert gen_nearly(spec).equals(gen_nearly(with_seed(spec, 21)))


def test_solve_nearly_over_rationals():
    spec = GenSpec.multiple_of_delta(named_quiver("kronecker"), RATIONALS, 1, seed=2)
    report = classify_relation(gen_nearly(spec), spec.weights, spec.vertex)
    assert report.classification in (RelationClass.NEARLY, RelationClass.MODULE)


def test_zero_retries_exhausts():
    spec = GenSpec.multiple_of_delta(named_quiver("kronecker"), GF5, 1, retries=0)
    with pytest.raises(RetriesExhausted):
        gen_nearly(spec)


def test_spec_json_names_rng():
    spec = GenSpec.multiple_of_delta(named_quiver("jordan"), GF5, 2, seed=5)
    obj = spec.to_json()
    assert obj["seed"] == 5
    assert obj["mode"] == "SolveNearly"
    assert obj["dims"] == {"0": 2}
    assert obj["rng"] == "PCG64"


@pytest.mark.parametrize("name", ["jordan", "cycle:2", "kronecker", "dtilde4"])
def test_rank_one_defect_on_a_line_vanishes(name):
    for seed in range(25):
        spec = GenSpec.multiple_of_delta(named_quiver(name), GF5, 1, seed=seed)
        report = classify_relation(gen_nearly(spec), spec.weights, spec.vertex)
        assert report.classification is RelationClass.MODULE
