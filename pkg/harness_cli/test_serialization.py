import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exact_linalg import RATIONALS, FieldSpec
from harness_cli.generators import GenSpec, gen_nearly
from harness_cli.serialization import (
    MalformedInstance,
    canonical_json,
    instance_from_json,
    instance_hash,
    instance_to_json,
    parse_dims,
    quiver_from_arg,
    rep_from_json,
    rep_to_json,
    weights_from_arg,
)
from quiver_core import UnknownQuiver, VertexMismatch, named_quiver
from rep_core import random_rep

FIELDS = ["q", "gf:2", "gf:7", "gf:2^3"]


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), field=st.sampled_from(FIELDS), name=st.sampled_from(["kronecker", "cycle:3"]))
def test_rep_survives_json_text(seed, field, name):
    Q, F = named_quiver(name), FieldSpec.parse(field)
    rng = np.random.default_rng(seed)
    R = random_rep(Q, F, {u: int(rng.integers(0, 3)) for u in Q.vertices}, rng)
    assert rep_from_json(json.loads(json.dumps(rep_to_json(R)))).equals(R)


@pytest.fixture
def instance():
    spec = GenSpec.multiple_of_delta(named_quiver("kronecker"), FieldSpec.gf(5), 2, seed=8)
    return gen_nearly(spec), spec


def test_instance_keeps_weights_and_vertex(instance):
    R, spec = instance
    obj = json.loads(json.dumps(instance_to_json(R, spec.weights, spec.vertex)))
    inst = instance_from_json(obj)
    assert inst.pair.equals(R)
    assert inst.vertex == spec.vertex
    assert inst.lam == spec.weights


def test_instance_without_weights(instance):
    R, _ = instance
    inst = instance_from_json(instance_to_json(R))
    assert inst.lam is None and inst.vertex is None


def test_rational_entries_are_strings():
    Q = named_quiver("jordan")
    R = random_rep(Q, RATIONALS, {"0": 2}, np.random.default_rng(0))
    obj = rep_to_json(R)
    assert all(isinstance(x, str) for row in obj["matrices"]["a"] for x in row)


def test_hash_ignores_key_order(instance):
    R, spec = instance
    obj = instance_to_json(R, spec.weights, spec.vertex)
    shuffled = dict(reversed(list(obj.items())))
    assert instance_hash(obj) == instance_hash(shuffled)
    assert len(instance_hash(obj)) == 64


def test_hash_changes_with_weights(instance):
    R, spec = instance
    one = spec.field.one()
    lam = dict(spec.weights)
    lam["1"], lam["2"] = lam["1"] + one, lam["2"] - one
    assert instance_hash(instance_to_json(R, spec.weights)) != instance_hash(instance_to_json(R, lam))


def test_canonical_json_is_compact():
    assert canonical_json({"b": [1, 2], "a": "λ"}) == '{"a":"λ","b":[1,2]}'


def test_wrong_shape_is_malformed(instance):
    R, _ = instance
    obj = instance_to_json(R)
    obj["matrices"]["a*"] = obj["matrices"]["a"] + [obj["matrices"]["a"][0]]
    with pytest.raises(MalformedInstance):
        instance_from_json(obj)


def test_missing_key_is_malformed(instance):
    R, _ = instance
    obj = instance_to_json(R)
    del obj["base_quiver"]
    with pytest.raises(MalformedInstance):
        instance_from_json(obj)


def test_weights_from_inline_assignments():
    Q, F = named_quiver("cycle:3"), FieldSpec.gf(7)
    lam = weights_from_arg("0=3, 2=-3", Q, F)
    assert lam == {"0": F.scalar(3), "1": F.zero(), "2": F.scalar(4)}


def test_weights_from_json_list():
    Q = named_quiver("kronecker")
    half = RATIONALS.scalar("1/2")
    assert weights_from_arg('["1/2", "-1/2"]', Q, RATIONALS) == {"1": half, "2": -half}


def test_weights_unknown_vertex():
    with pytest.raises(VertexMismatch):
        weights_from_arg("9=1", named_quiver("kronecker"), RATIONALS)


def test_parse_dims_forms():
    Q = named_quiver("kronecker")
    assert parse_dims('{"1": 2, "2": 3}', Q) == {"1": 2, "2": 3}
    assert parse_dims("1=2,2=3", Q) == {"1": 2, "2": 3}
    with pytest.raises(MalformedInstance):
        parse_dims("1=2", Q)


def test_quiver_from_file(tmp_path):
    path = tmp_path / "q.json"
    path.write_text(json.dumps(named_quiver("dtilde4").to_json()))
    assert quiver_from_arg(str(path)) == named_quiver("dtilde4")


def test_unknown_quiver_name():
    with pytest.raises(UnknownQuiver):
        quiver_from_arg("e8tilde")


def test_instance_is_double_quiver_representation(instance):
    R, spec = instance
    obj = instance_to_json(R, spec.weights, spec.vertex)
    assert obj["base_quiver"] == named_quiver("kronecker").to_json()
    assert set(obj["matrices"]) == {"a", "b", "a*", "b*"}
    assert rep_from_json(obj).equals(R.rep)


def test_reads_handwritten_pair_file(tmp_path):
    path = tmp_path / "pair.json"
    path.write_text(
        json.dumps(
            {
                "field": "q",
                "base_quiver": {"vertices": ["0"], "arrows": [{"name": "a", "tail": "0", "head": "0"}]},
                "quiver": {
                    "vertices": ["0"],
                    "arrows": [{"name": "a", "tail": "0", "head": "0"}, {"name": "a*", "tail": "0", "head": "0"}],
                },
                "dims": {"0": 2},
                "matrices": {"a": [["0", "2"], ["1", "0"]], "a*": [["1/2", "0"], ["0", "1/2"]]},
                "lambda": {"0": "0"},
                "vertex": "0",
            }
        )
    )
    inst = instance_from_json(json.loads(path.read_text()))
    assert inst.pair.base_quiver == named_quiver("jordan")
    assert inst.pair.rep["a*"][0, 0] == RATIONALS.scalar("1/2")
    assert inst.lam == {"0": RATIONALS.zero()}
    assert instance_from_json(instance_to_json(inst.pair, inst.lam, inst.vertex)).pair.equals(inst.pair)


def test_reads_separate_x_and_xi_keys(instance):
    R, _ = instance
    Q = R.base_quiver
    obj = {
        "quiver": Q.to_json(),
        "field": R.field.to_json(),
        "dims": R.dims,
        "X": {a.name: R.field.encode_array(R.rep[a.name]) for a in Q.arrows},
        "xi": {a.name: R.field.encode_array(R.rep[a.name + "*"]) for a in Q.arrows},
    }
    assert instance_from_json(obj).pair.equals(R)


def test_base_quiver_must_match_double(instance):
    R, _ = instance
    obj = instance_to_json(R)
    obj["base_quiver"] = named_quiver("cycle:2").to_json()
    with pytest.raises(MalformedInstance):
        instance_from_json(obj)
