import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from stonecoalg import CarrierMismatch, ClopenFamily, Relation, backward_lift, forward_lift, relation_ops
from stonecoalg.relation import membership

import oracles

F = frozenset


def rel_strategy(max_size=4):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_size))
        m = draw(st.integers(1, max_size))
        xs, ys = [f"x{i}" for i in range(n)], [f"y{j}" for j in range(m)]
        pairs = draw(st.sets(st.tuples(st.sampled_from(xs), st.sampled_from(ys))))
        return Relation(xs, ys, pairs)
    return build()


def test_ops_examples():
    r = Relation(["a"], [1], [("a", 1)])
    s = Relation([1], ["p"], [(1, "p")])
    comp, conv, img = relation_ops(r, s, ["a"])
    assert comp.pairs == {("a", "p")}
    assert conv.pairs == {(1, "a")}
    assert img == F({1})


def test_carrier_checks():
    with pytest.raises(CarrierMismatch):
        Relation(["a"], [1], [("b", 1)])
    with pytest.raises(CarrierMismatch):
        Relation(["a"], [1]).compose(Relation([2], [3]))
    with pytest.raises(CarrierMismatch):
        Relation(["a"], [1]).image(["z"])


def test_empty_relations_on_different_carriers_differ():
    assert Relation(["a"], [1]) != Relation(["a", "b"], [1])


@settings(max_examples=100)
@given(rel_strategy())
def test_converse_involution(r):
    assert r.converse().converse() == r


def test_forward_examples():
    xs = ["a", "b"]
    empty = Relation(xs, [1])
    assert len(forward_lift(empty)) == 4 * 2
    ident = Relation.identity(xs)
    assert forward_lift(ident).pairs == {(p, q) for p in oracles.powerset(xs) for q in oracles.powerset(xs) if p <= q}
    r = Relation(xs, [1], [("a", 1)])
    fl = forward_lift(r)
    assert (F("ab"), F({1})) in fl
    assert (F("a"), F()) not in fl


def test_backward_examples():
    xs = ["a", "b"]
    assert len(backward_lift(Relation(xs, xs))) == 16
    assert backward_lift(Relation.identity(xs)).pairs == {
        (p, q) for p in oracles.powerset(xs) for q in oracles.powerset(xs) if q <= p}


@settings(max_examples=60, deadline=None)
@given(rel_strategy(3), st.integers(0, 10**6))
def test_antitone(r, seed):
    rng = random.Random(seed)
    bigger = Relation(r.dom, r.cod, set(r.pairs) | {p for p in product(r.dom, r.cod) if rng.random() < 0.3})
    assert forward_lift(bigger) <= forward_lift(r)
    assert backward_lift(bigger) <= backward_lift(r)


@settings(max_examples=60, deadline=None)
@given(rel_strategy(4))
def test_forward_of_converse_is_converse_of_backward(r):
    assert forward_lift(r.converse()) == backward_lift(r).converse()


@settings(max_examples=60, deadline=None)
@given(rel_strategy(3))
def test_key_inclusion(r):
    # R† ; ∈_X ; →R ⊆ ∈_Y
    chain = r.converse().compose(membership(r.dom)).compose(forward_lift(r))
    assert chain <= membership(r.cod)


def test_lift_over_explicit_family():
    xs = ["a", "b"]
    fam = ClopenFamily(F(xs), frozenset({F(), F(xs)}))
    assert fam.is_boolean_algebra()
    fl = forward_lift(Relation.identity(xs), fam, fam)
    assert fl.pairs == {(F(), F()), (F(), F(xs)), (F(xs), F(xs))}
    assert not ClopenFamily(F(xs), frozenset({F(), F("a")})).is_boolean_algebra()
