import numpy as np
import pytest

from exact_linalg import RATIONALS, FieldSpec, Subspace
from harness_cli.generators import GenSpec, Mode, gen_nearly, weyl_pair
from quiver_core import Arrow, Quiver, affine_classify, named_quiver, proj_dim_vector, tube_simples, weights_dot
from rep_core import PairRep, Representation, Simple, direct_sum, injective, projective, random_rep, simplicity
from theorem_engine import (
    BadTubeData,
    ExtensionRequired,
    Hypothesis,
    PreconditionFailed,
    Provenance,
    SingleTube,
    TheoremAssertionFailed,
    delta_multiple,
    find_submodule_cycle,
    find_submodule_multitube,
    find_submodule_nonregular,
    find_submodule_weyl,
    hom_lift_contradiction,
    nontrivial_submodule,
    reduced_weights,
)

GF5 = FieldSpec.gf(5)


def zero_xi(X):
    return {a.name: X.field.zeros(X.dims[a.tail], X.dims[a.head]) for a in X.quiver.arrows}


def module_with_zero_xi(X):
    return PairRep.from_rep(X.quiver, X, zero_xi(X))


def kronecker_block(field, t):
    """The regular (1, 1) representation a = 1, b = t, one per homogeneous tube."""
    X = {"a": field.array([[1]]), "b": field.array([[t]])}
    return Representation(named_quiver("kronecker"), field, {"1": 1, "2": 1}, X)


def generated(name, field, m, seed, mode=Mode.SOLVE_NEARLY):
    spec = GenSpec.multiple_of_delta(named_quiver(name), field, m, seed=seed, mode=mode)
    return gen_nearly(spec), spec


def assert_proper(witness, R):
    assert witness.verify()
    total = sum(witness.dims.values())
    assert 0 < total < sum(R.dims.values())


# nonregular


@pytest.fixture
def projective_plus_injective():
    Q = named_quiver("kronecker")
    X = direct_sum([projective(Q, "1", RATIONALS), injective(Q, "2", RATIONALS)]).rep
    return module_with_zero_xi(X)


def test_nonregular_zero_xi_returns_injective(projective_plus_injective):
    R = projective_plus_injective
    lam = {"1": 0, "2": 0}
    witness = find_submodule_nonregular(R, lam, affine_classify(R.base_quiver))
    assert witness.provenance is Provenance.NON_REGULAR
    assert witness.dims == {"1": 2, "2": 1}
    assert witness.verify()


def test_dispatch_sends_nonregular_input_to_nonregular_case(projective_plus_injective):
    witness = nontrivial_submodule(projective_plus_injective, {"1": 0, "2": 0}, "1")
    assert witness.provenance is Provenance.NON_REGULAR


def test_nonregular_rejects_regular_input():
    R = module_with_zero_xi(direct_sum([kronecker_block(GF5, 0), kronecker_block(GF5, 1)]).rep)
    with pytest.raises(ValueError):
        find_submodule_nonregular(R, {"1": 0, "2": 0}, affine_classify(R.base_quiver))


@pytest.mark.parametrize("seed", range(4))
def test_generated_kronecker(seed):
    R, spec = generated("kronecker", GF5, 2, seed)
    witness = nontrivial_submodule(R, spec.weights, spec.vertex, seed=seed)
    assert_proper(witness, R)


# multitube


def test_multitube_two_tubes():
    R = module_with_zero_xi(direct_sum([kronecker_block(GF5, 0), kronecker_block(GF5, 1)]).rep)
    lam = {"1": 0, "2": 0}
    witness = find_submodule_multitube(R, lam, affine_classify(R.base_quiver), "1")
    assert witness.provenance is Provenance.MULTI_TUBE
    assert witness.dims == {"1": 1, "2": 1}
    assert witness.verify()


def test_multitube_nested_tube_group():
    X = direct_sum([kronecker_block(GF5, 0), kronecker_block(GF5, 2), kronecker_block(GF5, 2)]).rep
    R = module_with_zero_xi(X)
    witness = nontrivial_submodule(R, {"1": 0, "2": 0}, "1", seed=3)
    assert witness.provenance in (Provenance.MULTI_TUBE, Provenance.GENERIC_SEARCH)
    assert_proper(witness, R)


def test_multitube_single_tube():
    R = module_with_zero_xi(direct_sum([kronecker_block(GF5, 3), kronecker_block(GF5, 3)]).rep)
    with pytest.raises(SingleTube):
        find_submodule_multitube(R, {"1": 0, "2": 0}, affine_classify(R.base_quiver), "1", seed=1)


# cycles


@pytest.fixture
def jordan_nearly():
    a = RATIONALS.array([[0, 1], [0, 0]])
    b = RATIONALS.array([[0, 0], [0, 1]])
    return PairRep.from_parts(named_quiver("jordan"), RATIONALS, {"0": 2}, {"a": a}, {"a": b})


def test_loop_lemma_example(jordan_nearly):
    witness = nontrivial_submodule(jordan_nearly, {"0": 0}, "0")
    assert witness.provenance is Provenance.LOOP_LEMMA
    assert witness.dims == {"0": 1}
    assert witness.sub.spaces["0"].equals(Subspace(RATIONALS.array([[1], [0]])))


@pytest.mark.parametrize("name", ["cycle:2", "cycle:3"])
def test_cycle_reorientation(name):
    R, spec = generated(name, GF5, 2, seed=5)
    witness = find_submodule_cycle(R, spec.weights, spec.vertex, seed=5)
    assert witness.provenance is Provenance.CYCLE_REORIENT
    assert witness.trail
    assert_proper(witness, R)


def test_cycle_rejects_acyclic_quiver(projective_plus_injective):
    with pytest.raises(ValueError):
        find_submodule_cycle(projective_plus_injective, {"1": 0, "2": 0}, "1")


def test_rational_simple_needs_extension():
    a = RATIONALS.array([[0, 2], [1, 0]])
    R = PairRep.from_parts(named_quiver("jordan"), RATIONALS, {"0": 2}, {"a": a}, {"a": a})
    with pytest.raises(ExtensionRequired) as e:
        nontrivial_submodule(R, {"0": 0}, "0")
    assert len(e.value.minimal_polynomial) == 3
    assert e.value.field == RATIONALS


# weyl pair


@pytest.mark.parametrize("p", [2, 3, 5])
def test_weyl_single_copy_is_simple(p):
    R = weyl_pair(p, 1, seed=p)
    result = simplicity(R.rep, seed=p)
    assert isinstance(result, Simple)
    if p <= 3:
        assert result.certificate.method == "exhaustive"


@pytest.mark.parametrize("p", [3, 5, 7])
def test_weyl_single_copy_is_simple_by_norton(p):
    R = weyl_pair(p, 1, seed=p)
    result = simplicity(R.rep, seed=p, method="randomized")
    assert isinstance(result, Simple)
    assert result.certificate.method == "norton"
    assert result.certificate.attempts >= 1


@pytest.mark.parametrize("p, m", [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (5, 3)])
def test_weyl_copies_have_submodule(p, m):
    R = weyl_pair(p, m, seed=m)
    witness = find_submodule_weyl(R, {"0": 1})
    assert witness.provenance is Provenance.WEYL_CENTRE
    assert witness.dims["0"] % p == 0
    assert_proper(witness, R)


def test_weyl_single_copy_has_no_witness():
    with pytest.raises(TheoremAssertionFailed):
        find_submodule_weyl(weyl_pair(3, 1), {"0": 1})


def test_cycle_routes_weyl_pair():
    witness = find_submodule_cycle(weyl_pair(3, 2, seed=7), {"0": 1}, "0")
    assert witness.provenance is Provenance.WEYL_CENTRE


# preconditions


def test_precondition_multiplicity():
    R, spec = generated("kronecker", GF5, 1, seed=0)
    with pytest.raises(PreconditionFailed) as e:
        nontrivial_submodule(R, spec.weights, spec.vertex)
    assert e.value.hypothesis is Hypothesis.MULTIPLICITY


def test_precondition_weight_pairing():
    zero = RATIONALS.zeros(2, 2)
    R = PairRep.from_parts(named_quiver("jordan"), RATIONALS, {"0": 2}, {"a": zero}, {"a": zero})
    with pytest.raises(PreconditionFailed) as e:
        nontrivial_submodule(R, {"0": 1}, "0")
    assert e.value.hypothesis is Hypothesis.WEIGHT_PAIRING


def test_precondition_not_nearly():
    Q = named_quiver("kronecker")
    X = random_rep(Q, GF5, {"1": 2, "2": 2}, np.random.default_rng(1))
    with pytest.raises(PreconditionFailed) as e:
        nontrivial_submodule(module_with_zero_xi(X), {"1": 1, "2": -1}, "1")
    assert e.value.hypothesis is Hypothesis.NOT_NEARLY


def test_precondition_not_extending():
    R, spec = generated("dtilde4", GF5, 2, seed=0)
    with pytest.raises(PreconditionFailed) as e:
        nontrivial_submodule(R, spec.weights, "0")
    assert e.value.hypothesis is Hypothesis.NOT_EXTENDING


def test_precondition_not_delta_multiple():
    X = random_rep(named_quiver("kronecker"), GF5, {"1": 2, "2": 1}, np.random.default_rng(0))
    with pytest.raises(PreconditionFailed) as e:
        nontrivial_submodule(module_with_zero_xi(X), {"1": 0, "2": 0}, "1")
    assert e.value.hypothesis is Hypothesis.NOT_DELTA_MULTIPLE


def test_precondition_not_affine():
    a2 = Quiver(("1", "2"), (Arrow("a", "1", "2"),))
    X = random_rep(a2, GF5, {"1": 1, "2": 1}, np.random.default_rng(0))
    with pytest.raises(PreconditionFailed) as e:
        nontrivial_submodule(module_with_zero_xi(X), {"1": 0, "2": 0}, "1")
    assert e.value.hypothesis is Hypothesis.NOT_AFFINE


# main theorem over generated instances

THEOREM_QUIVERS = ["jordan", "cycle:2", "cycle:3", "kronecker", "dtilde4"]
THEOREM_MODES = [Mode.SOLVE_NEARLY, Mode.CONJUGATED_SUM, Mode.ELL_LIFT]


def check_theorem(name, m, field, trials):
    for seed in range(trials):
        R, spec = generated(name, field, m, seed, THEOREM_MODES[seed % len(THEOREM_MODES)])
        witness = nontrivial_submodule(R, spec.weights, spec.vertex, seed=seed)
        assert_proper(witness, R)


@pytest.mark.parametrize("field", ["gf:5", "gf:7^2"])
@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("name", THEOREM_QUIVERS)
def test_theorem_generated(name, m, field):
    check_theorem(name, m, FieldSpec.parse(field), 3)


@pytest.mark.slow
@pytest.mark.parametrize("field", ["gf:5", "gf:7^2"])
@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("name", THEOREM_QUIVERS)
def test_theorem_generated_full(name, m, field):
    check_theorem(name, m, FieldSpec.parse(field), 50)


# reduced weights


@pytest.mark.parametrize("n", [2, 3, 4])
def test_reduced_weights_cycle(n):
    Q, F = named_quiver(f"cycle:{n}"), FieldSpec.gf(7)
    rng = np.random.default_rng(n)
    simples = tube_simples(f"cycle:{n}")
    delta = affine_classify(Q).delta
    for _ in range(50):
        lam = {u: F.random_scalar(rng) for u in Q.vertices}
        v = Q.vertices[int(rng.integers(0, n))]
        data = reduced_weights(lam, None, simples, Q, v)
        assert data.lam_prime == [lam[u] for u in Q.vertices]
        assert data.v_prime == Q.index(v)
        assert data.delta_prime == [1] * n
        total = data.lam_prime[0]
        for x in data.lam_prime[1:]:
            total = total + x
        assert total == weights_dot(lam, delta)


def test_reduced_weights_homogeneous():
    Q = named_quiver("kronecker")
    P = [proj_dim_vector(Q, u) for u in Q.vertices]
    lam = {"1": RATIONALS.scalar("2/3"), "2": RATIONALS.scalar(5)}
    data = reduced_weights(lam, P, tube_simples("kronecker"), Q, "1")
    assert data.lam_prime == [RATIONALS.scalar("17/3")]
    assert data.v_prime == 0


def test_reduced_weights_zero():
    Q = named_quiver("dtilde4")
    P = [proj_dim_vector(Q, u) for u in Q.vertices]
    data = reduced_weights({u: 0 for u in Q.vertices}, P, tube_simples("dtilde4"), Q, "3")
    assert data.lam_prime == [0, 0]
    assert data.v_prime == 1


def test_reduced_weights_dtilde4():
    Q, F = named_quiver("dtilde4"), FieldSpec.gf(7)
    P = [proj_dim_vector(Q, u) for u in Q.vertices]
    lam = {u: F.scalar(i + 1) for i, u in enumerate(Q.vertices)}
    data = reduced_weights(lam, P, tube_simples("dtilde4"), Q, "1")
    assert data.lam_prime == [F.scalar(1 + 2 + 3), F.scalar(1 + 4 + 5)]
    assert data.to_json(F)["v_prime"] == 0


def test_reduced_weights_bad_simples():
    Q = named_quiver("cycle:3")
    with pytest.raises(BadTubeData):
        reduced_weights({u: 0 for u in Q.vertices}, None, [{"0": 1, "1": 1, "2": 0}], Q, "0")


# diagnostics


def test_delta_multiple():
    rng = np.random.default_rng(0)
    assert delta_multiple(random_rep(named_quiver("kronecker"), GF5, {"1": 2, "2": 2}, rng), "1") == 2
    assert delta_multiple(random_rep(named_quiver("cycle:3"), GF5, {"0": 3, "1": 3, "2": 3}, rng), "0") == 3
    with pytest.raises(ValueError):
        delta_multiple(random_rep(named_quiver("kronecker"), GF5, {"1": 1, "2": 2}, rng), "1")


def test_hom_lift_trace_pairing():
    Q = named_quiver("kronecker")
    P, I = projective(Q, "1", RATIONALS), injective(Q, "2", RATIONALS)
    theta = {"a": RATIONALS.array([[1]]), "b": RATIONALS.array([[0]])}
    check = hom_lift_contradiction(P, I, theta, "1")
    assert check.total == 0
    assert check.local == 1
    assert not check.supported
    assert not check.contradiction
