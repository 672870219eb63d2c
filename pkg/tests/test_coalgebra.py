import random

import pytest

from stonecoalg import (CarrierMismatch, Constant, Coproduct, FinCoalgebra, Identity, InvalidInput,
                        MalformedValue, Powerset, Relation, behaviour_tower,
                        behavioural_equivalence, behaviourally_equivalent, companion,
                        greatest_L_bisimulation, is_coalgebra_morphism, is_L_bisimulation)
from stonecoalg.values import Inj

from conftest import pcoalg
import oracles

F = frozenset
LOOP = pcoalg({"1": {"1"}})
CYCLE = pcoalg({"a": {"b"}, "b": {"a"}})
DEAD = pcoalg({"a": set()})
LIVE_A = pcoalg({"a": {"a"}})


def test_structure_validation():
    with pytest.raises(MalformedValue):
        FinCoalgebra(Powerset(), {"a": F({"z"})})
    with pytest.raises(InvalidInput):
        FinCoalgebra(Powerset(), {"a": F()}, carrier=["a", "b"])


def test_morphism_examples():
    assert is_coalgebra_morphism({"a": "a", "b": "b"}, CYCLE, CYCLE).holds
    v = is_coalgebra_morphism({"a": "1"}, LIVE_A, pcoalg({"1": set()}))
    assert not v.holds and v.witness == "a"
    assert is_coalgebra_morphism({"a": "1", "b": "1"}, CYCLE, LOOP).holds
    with pytest.raises(CarrierMismatch):
        is_coalgebra_morphism({"a": "9"}, LIVE_A, LOOP)


def test_l_bisim_examples():
    assert is_L_bisimulation(Relation(["a"], ["1"]), DEAD, LOOP).holds
    assert is_L_bisimulation(Relation(["a"], ["1"], [("a", "1")]), LIVE_A, LOOP).holds
    v = is_L_bisimulation(Relation(["a"], ["1"], [("a", "1")]), DEAD, LOOP)
    assert not v.holds and v.witness == ("a", "1")


def test_greatest_examples():
    assert greatest_L_bisimulation(LIVE_A, LIVE_A).pairs == {("a", "a")}
    assert greatest_L_bisimulation(CYCLE, LOOP) == Relation.full(CYCLE.carrier, LOOP.carrier)
    assert len(greatest_L_bisimulation(DEAD, LOOP)) == 0


def test_tower_examples():
    t = behaviour_tower(CYCLE)
    assert len(set(t.stages[0].beh.values())) == 1
    assert behaviourally_equivalent(CYCLE, "a", LOOP, "1").holds
    v = behaviourally_equivalent(DEAD, "a", LOOP, "1")
    assert not v.holds and v.witness == 1


def test_kernel_chain_refines():
    rng = random.Random(11)
    for _ in range(30):
        xs = [str(i) for i in range(rng.randint(1, 5))]
        c = pcoalg({x: {y for y in xs if rng.random() < 0.4} for x in xs})
        t = behaviour_tower(c)
        assert t.stabilized_at is not None
        for prev, nxt in zip(t.stages, t.stages[1:]):
            assert all(any(b <= a for a in prev.kernel()) for b in nxt.kernel())
            for x in c.carrier:
                assert nxt.down[nxt.beh[x]] == prev.beh[x]


def test_beq_matches_greatest_and_kripke(corpus2):
    for da, a in corpus2:
        for db, b in corpus2:
            g = greatest_L_bisimulation(a, b)
            assert g == behavioural_equivalence(a, b)
            assert g.pairs == oracles.greatest_kripke(da, db)


def test_beq_random_up_to_five():
    rng = random.Random(5)
    for _ in range(40):
        ds = []
        for _ in range(2):
            xs = [str(i) for i in range(rng.randint(1, 5))]
            ds.append({x: {y for y in xs if rng.random() < 0.35} for x in xs})
        a, b = pcoalg(ds[0]), pcoalg(ds[1])
        assert greatest_L_bisimulation(a, b) == behavioural_equivalence(a, b)
        assert greatest_L_bisimulation(a, b).pairs == oracles.greatest_kripke(*ds)


def test_beq_other_functor():
    f = Coproduct(Constant(F({"s"})), Identity())
    a = FinCoalgebra(f, {"0": Inj("inr", "1"), "1": Inj("inr", "0"), "2": Inj("inl", "s")})
    r = behavioural_equivalence(a, a)
    assert r.pairs == {("0", "0"), ("0", "1"), ("1", "0"), ("1", "1"), ("2", "2")}
    assert r == greatest_L_bisimulation(a, a)


def test_morphism_graph_is_bisimulation():
    fn = {"a": "1", "b": "1"}
    assert is_L_bisimulation(Relation.graph(fn, CYCLE.carrier, LOOP.carrier), CYCLE, LOOP).holds


def test_companion_examples():
    c = pcoalg({"a": {"a", "b"}, "b": set()})
    hat = companion(c)
    assert hat("a") == F({F("ab")})
    const = FinCoalgebra(Constant(F({"c"})), {"x": "c", "y": "c"})
    h = companion(const)
    assert h("x") == h("y") == F({"c"})
    ident = FinCoalgebra(Identity(), {"a": "b", "b": "b"})
    assert companion(ident)("a") == F({"b"})


def test_companion_defining_property():
    c = pcoalg({"0": {"1"}, "1": {"0", "1"}})
    hat = companion(c)
    table = hat.algebra.table
    for u in c.carrier:
        for k, phi in enumerate(table.formulas):
            by_atom = hat(u) <= table.extension(k)
            assert by_atom == (c(u) in table.extension(k)) == hat.contains_formula(u, phi)
            assert hat.formula_masks[u][k] == by_atom
