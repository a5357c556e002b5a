import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quiver_core.families import named_quiver, tube_simples
from quiver_core.quiver_core import (
    INFINITY,
    Arrow,
    ArrowNameCollision,
    CyclicQuiver,
    DisconnectedQuiver,
    Quiver,
    UnknownQuiver,
    VertexMismatch,
    affine_classify,
    defect,
    double_quiver,
    euler_form,
    inj_dim_vector,
    infinity_quiver,
    opposite,
    proj_dim_vector,
    reorient_quiver,
)


@pytest.fixture
def arrow12():
    return Quiver(("1", "2"), (Arrow("a", "1", "2"),))


@pytest.fixture
def kronecker():
    return named_quiver("kronecker")


def test_double_quiver(arrow12):
    doubled = double_quiver(arrow12)
    assert doubled.vertices == arrow12.vertices
    assert doubled.arrows == (Arrow("a", "1", "2"), Arrow("a*", "2", "1"))


def test_double_quiver_jordan():
    doubled = double_quiver(named_quiver("jordan"))
    assert [(a.name, a.tail, a.head) for a in doubled.arrows] == [("a", "0", "0"), ("a*", "0", "0")]


def test_double_quiver_edge_cases():
    empty = Quiver(("0",))
    assert double_quiver(empty) == empty
    with pytest.raises(ArrowNameCollision):
        double_quiver(Quiver(("0",), (Arrow("x*", "0", "0"),)))


def test_quiver_validation():
    with pytest.raises(ArrowNameCollision):
        Quiver(("0",), (Arrow("a", "0", "0"), Arrow("a", "0", "0")))
    with pytest.raises(VertexMismatch):
        Quiver(("0",), (Arrow("a", "0", "1"),))
    with pytest.raises(VertexMismatch):
        Quiver(("0", "0"))


def test_json_round_trip(kronecker):
    assert Quiver.from_json(kronecker.to_json()) == kronecker


@pytest.mark.parametrize("m, n", [(0, 0), (1, 3), (4, 2)])
def test_euler_form_jordan(m, n):
    assert euler_form(named_quiver("jordan"), [m], [n]) == 0


def test_euler_form_examples(kronecker, arrow12):
    assert euler_form(kronecker, [1, 1], [1, 1]) == 0
    assert euler_form(arrow12, {"1": 1, "2": 0}, {"1": 0, "2": 1}) == -1
    with pytest.raises(VertexMismatch):
        euler_form(arrow12, [1], [1, 0])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=15, max_size=15))
def test_euler_form_bilinear(values):
    Q = named_quiver("Dtilde4")
    a, b, c = values[:5], values[5:10], values[10:]
    summed = [x + y for x, y in zip(a, b)]
    assert euler_form(Q, summed, c) == euler_form(Q, a, c) + euler_form(Q, b, c)
    assert euler_form(Q, c, summed) == euler_form(Q, c, a) + euler_form(Q, c, b)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_affine_classify_cycle(n):
    aff = affine_classify(named_quiver(f"cycle:{n}"))
    assert aff.is_affine and aff.has_oriented_cycle
    assert list(aff.delta.values()) == [1] * n
    assert len(aff.extending_vertices) == n


def test_affine_classify_kronecker(kronecker):
    aff = affine_classify(kronecker)
    assert aff.is_affine and not aff.has_oriented_cycle
    assert aff.delta == {"1": 1, "2": 1}
    assert aff.extending_vertices == ("1", "2")


def test_affine_classify_dynkin(arrow12):
    assert not affine_classify(arrow12).is_affine


def test_affine_classify_dtilde4():
    aff = affine_classify(named_quiver("Dtilde4"))
    assert aff.delta == {"0": 2, "1": 1, "2": 1, "3": 1, "4": 1}
    assert aff.extending_vertices == ("1", "2", "3", "4")


def test_affine_classify_disconnected():
    with pytest.raises(DisconnectedQuiver):
        affine_classify(Quiver(("0", "1")))


@pytest.mark.parametrize("name", ["jordan", "cycle:2", "cycle:3", "kronecker", "Dtilde4", "atilde:3", "atilde:4"])
def test_delta_is_radical(name):
    Q = named_quiver(name)
    aff = affine_classify(Q)
    assert euler_form(Q, aff.delta, aff.delta) == 0
    for v in Q.vertices:
        unit = {u: int(u == v) for u in Q.vertices}
        assert euler_form(Q, aff.delta, unit) + euler_form(Q, unit, aff.delta) == 0
    for v in aff.extending_vertices:
        assert aff.delta[v] == 1


def test_defect_kronecker(kronecker):
    aff = affine_classify(kronecker)
    assert defect(kronecker, aff, aff.delta) == 0
    for n in range(4):
        assert defect(kronecker, aff, [n, n + 1]) == -1
        assert defect(kronecker, aff, [n + 1, n]) == 1


@pytest.mark.parametrize("name", ["kronecker", "Dtilde4", "atilde:3"])
def test_defect_of_projective_at_extending_vertex(name):
    Q = named_quiver(name)
    aff = affine_classify(Q)
    for v in aff.extending_vertices:
        assert defect(Q, aff, proj_dim_vector(Q, v)) == -1
        assert defect(Q, aff, inj_dim_vector(Q, v)) == 1


def test_infinity_quiver():
    Q = named_quiver("jordan")
    Qinf, lam = infinity_quiver(Q, "0", {"0": 3})
    assert Qinf.vertices == ("0", INFINITY)
    assert len(Qinf.arrows) == 2
    assert Qinf.arrows[-1].tail == INFINITY and Qinf.arrows[-1].head == "0"
    assert lam[INFINITY] == 0
    with pytest.raises(VertexMismatch):
        infinity_quiver(Qinf, "0", lam)


def test_proj_dim_vector(arrow12, kronecker):
    assert proj_dim_vector(arrow12, "1") == {"1": 1, "2": 1}
    assert proj_dim_vector(arrow12, "2") == {"1": 0, "2": 1}
    assert proj_dim_vector(kronecker, "1") == {"1": 1, "2": 2}
    with pytest.raises(CyclicQuiver):
        proj_dim_vector(named_quiver("cycle:2"), "0")


def test_reorient(kronecker):
    flipped = reorient_quiver(kronecker, ["a"])
    assert flipped.arrow("a") == Arrow("a", "2", "1")
    assert flipped.has_oriented_cycle()
    assert opposite(opposite(kronecker)) == kronecker


def test_named_quivers():
    assert named_quiver("cycle:3").is_oriented_cycle()
    assert named_quiver("jordan").is_oriented_cycle()
    assert not named_quiver("kronecker").is_oriented_cycle()
    for bad in ["cycle", "cycle:x", "star:3", "atilde:1"]:
        with pytest.raises(UnknownQuiver):
            named_quiver(bad)


@pytest.mark.parametrize("name", ["jordan", "cycle:3", "kronecker", "Dtilde4", "atilde:2", "atilde:4"])
def test_tube_simples_sum_to_delta(name):
    Q = named_quiver(name)
    aff = affine_classify(Q)
    simples = tube_simples(name)
    assert {v: sum(s[v] for s in simples) for v in Q.vertices} == aff.delta
    if not aff.has_oriented_cycle:
        assert all(defect(Q, aff, s) == 0 for s in simples)
