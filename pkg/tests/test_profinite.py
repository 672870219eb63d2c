import threading

import pytest

from stonecoalg import (DepthUnavailable, InvalidInput, LevelRelation, Relation, SizeGuardExceeded,
                        Thread, Tower, cantor_shift_example, check_nbisim_to_depth,
                        closure_approx, closure_theorem_probe, companion, is_coalgebra_morphism,
                        is_neighbourhood_bisimulation, is_vietoris_bisimulation, validate_tower)
from stonecoalg.profinite import (CANTOR_RELATIONS, cantor_level_relation, closure_levels,
                                  image_compatibility)

from conftest import pcoalg

F = frozenset
LOOP = pcoalg({"e": {"e"}})


@pytest.fixture(scope="module")
def cantor6():
    return cantor_shift_example(6)


def test_validate_examples():
    assert validate_tower(Tower.constant(LOOP, 4)).valid
    assert validate_tower(cantor_shift_example(5)).valid
    t = cantor_shift_example(3)
    broken = Tower(t.levels, [dict(p) for p in t.projections])
    for w in broken.projections[2]:
        broken.projections[2][w] = "00"
    v = validate_tower(broken)
    assert not v.valid and v.failing_level == 2 and "surjective" in v.reason


def test_validate_catches_bad_square():
    from stonecoalg import FinCoalgebra
    t = cantor_shift_example(2)
    top = dict(t.levels[2].structure)
    top["00"] = F({"00"})
    v = validate_tower(Tower(t.levels[:2] + [FinCoalgebra(t.functor, top)], t.projections))
    assert not v.valid and v.failing_level == 1 and "00" in v.reason


def test_cantor_examples(cantor6):
    t = cantor_shift_example(1)
    assert t.carrier(0) == ("",) and t.carrier(1) == ("0", "1")
    # successors of w are the words shifting onto w: b + w[:-1]
    assert cantor6.levels[2]("01") == F({"00", "10"})
    assert is_coalgebra_morphism(cantor6.projections[1], cantor6.levels[2], cantor6.levels[1]).holds
    with pytest.raises(InvalidInput):
        cantor_shift_example(0)
    with pytest.raises(SizeGuardExceeded):
        cantor_shift_example(13)


def test_forward_shift_frame_breaks_squares():
    # the frame with successor = shift does not make truncation a morphism
    from stonecoalg import FinCoalgebra, Powerset
    from itertools import product
    words = lambda n: ["".join(b) for b in product("01", repeat=n)]
    lv = [FinCoalgebra(Powerset(), {w: F(v for v in words(n) if v[:n - 1] == w[1:]) for w in words(n)})
          for n in (1, 2)]
    assert not is_coalgebra_morphism({w: w[:-1] for w in words(2)}, lv[1], lv[0]).holds


def test_threads():
    t = cantor_shift_example(4)
    z = Thread.eventually_periodic("1", "0")
    assert z.tabulate(t, 4) == ["", "1", "10", "100", "1000"]
    bad = Thread(lambda n: "1" * n if n < 3 else "0" * n, "bad")
    with pytest.raises(InvalidInput):
        bad.tabulate(t, 4)
    with pytest.raises(DepthUnavailable):
        z.tabulate(t, 5)


def test_thread_memo_under_concurrency():
    calls = []
    th = Thread(lambda n: (calls.append(n), "0" * n)[1])
    workers = [threading.Thread(target=th.component, args=(k,)) for k in range(20)]
    for w in workers:
        w.start()
    for w in workers:
        w.join()
    assert sorted(calls) == list(range(20))


def test_closure_examples(cantor6):
    for n in range(7):
        assert len(closure_approx(CANTOR_RELATIONS["empty"], cantor6, cantor6, n)) == 0
        dense = closure_approx(CANTOR_RELATIONS["identity-eventually-zero"], cantor6, cantor6, n)
        assert dense == Relation.identity(cantor6.carrier(n))
        point = closure_approx(CANTOR_RELATIONS["zero-point"], cantor6, cantor6, n)
        assert point.pairs == {("0" * n, "0" * n)}
    with pytest.raises(DepthUnavailable):
        closure_approx(CANTOR_RELATIONS["empty"], cantor6, cantor6, 7)


def test_closure_levels_compatible(cantor6):
    for name in CANTOR_RELATIONS:
        levels = closure_levels(CANTOR_RELATIONS[name], cantor6, cantor6, 6)
        assert levels.first_incompatible(cantor6, cantor6) is None
        # projections are onto, not merely into
        for n in range(6):
            p = cantor6.projections[n]
            down = {(p[x], p[y]) for x, y in levels.at(n + 1)}
            assert down == set(levels.at(n).pairs)


def test_level_checks(cantor6):
    ident = LevelRelation.identity(cantor6)
    assert all(v.holds for v in check_nbisim_to_depth(ident, cantor6, cantor6, 6))
    comp = cantor_level_relation("complement", cantor6, 6)
    assert all(v.holds for v in check_nbisim_to_depth(comp, cantor6, cantor6, 6))
    to_zero = cantor_level_relation("all-to-zero", cantor6, 4)
    verdicts = check_nbisim_to_depth(to_zero, cantor6, cantor6, 4)
    assert verdicts[0].holds and not any(v.holds for v in verdicts[1:])
    _, _, phi, psi, direction = verdicts[1].witness
    assert verdicts[1].stats["method"] == "enumerate" and direction in ("forward", "backward")


def test_level_checks_agree_with_kripke(cantor6):
    for name in ("identity", "complement", "all-to-zero"):
        r = cantor_level_relation(name, cantor6, 5)
        for k, v in enumerate(check_nbisim_to_depth(r, cantor6, cantor6, 5)):
            assert v.holds == is_vietoris_bisimulation(r.at(k), cantor6.levels[k], cantor6.levels[k]).holds


def test_incompatible_level_relation_rejected(cantor6):
    rels = [Relation(cantor6.carrier(0), cantor6.carrier(0)),
            Relation(cantor6.carrier(1), cantor6.carrier(1), [("0", "1")])]
    with pytest.raises(InvalidInput):
        check_nbisim_to_depth(LevelRelation(rels), cantor6, cantor6, 1)
    with pytest.raises(DepthUnavailable):
        check_nbisim_to_depth(LevelRelation.identity(cantor6, 2), cantor6, cantor6, 3)


def test_probe_examples(cantor6):
    rep = closure_theorem_probe(CANTOR_RELATIONS["identity-eventually-zero"], cantor6, cantor6, 6)
    assert rep.holds and len(rep.levels) == 7 and "depth" in rep.note
    closed = LevelRelation.identity(cantor6)
    rep2 = closure_theorem_probe(closed, cantor6, cantor6, 6)
    assert [p.verdict.holds for p in rep2.levels] == [p.verdict.holds for p in rep.levels]
    assert [p.closure for p in rep2.levels] == [p.closure for p in rep.levels]
    assert closure_theorem_probe(CANTOR_RELATIONS["empty"], cantor6, cantor6, 6).holds
    bad = closure_theorem_probe(CANTOR_RELATIONS["zero-point"], cantor6, cantor6, 3)
    assert not bad.holds and bad.first_failure == 1


def test_closed_image_lemma(cantor6):
    from itertools import combinations
    for name in ("identity", "complement", "all-to-zero"):
        r = cantor_level_relation(name, cantor6, 3)
        words = cantor6.carrier(3)
        for k in range(0, 4):
            for z in combinations(words, k):
                assert image_compatibility(r, cantor6, cantor6, z, 3) is None


def _eventually_constant(base: Tower, m: int, extra: int) -> Tower:
    top = base.levels[m]
    ident = {x: x for x in top.carrier}
    return Tower(base.levels[:m + 1] + [top] * extra, base.projections[:m] + [dict(ident)] * extra)


def test_eventually_constant_oracle():
    from itertools import product
    t = _eventually_constant(cantor_shift_example(2), 1, 2)
    assert validate_tower(t).valid
    xs = t.carrier(1)
    cells = list(product(xs, xs))
    for mask in range(2 ** len(cells)):
        r1 = Relation(xs, xs, [c for k, c in enumerate(cells) if mask >> k & 1])
        r0 = Relation(t.carrier(0), t.carrier(0), [("", "")] if len(r1) else [])
        levels = LevelRelation([r0, r1, r1, r1])
        verdicts = check_nbisim_to_depth(levels, t, t, 3)
        finite = is_neighbourhood_bisimulation(r1, companion(t.levels[1]), companion(t.levels[1]), "enumerate")
        assert all(v.holds == finite.holds for v in verdicts[1:])
