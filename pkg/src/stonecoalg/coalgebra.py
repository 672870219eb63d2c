"""Finite T-coalgebras, L-bisimulations and behavioural equivalence."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import CarrierMismatch, InvalidInput, MalformedValue
from .functor import FunctorExpr, _push, is_wellformed, lift_holds
from .nabla import ClopenAlgebra, generated_clopen_algebra
from .relation import Relation
from .values import canonical, sort_key


@dataclass
class Verdict:
    """Outcome of a check: ``holds`` plus a witness when it does not."""

    holds: bool
    witness: object = None
    note: str = ""
    stats: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds


class FinCoalgebra:
    """A finite carrier with a structure map into ``functor(carrier)``."""

    def __init__(self, functor: FunctorExpr, structure: Mapping, carrier: Iterable | None = None):
        self.functor = functor
        self.carrier = canonical(structure.keys() if carrier is None else carrier)
        if set(self.carrier) != set(structure):
            raise InvalidInput("structure map must be total on the carrier, and only on it")
        points = set(self.carrier)
        for x in self.carrier:
            if not is_wellformed(functor, points, structure[x]):
                raise MalformedValue(f"structure({x!r}) = {structure[x]!r} is not in {functor}(X)")
        self.structure = {x: structure[x] for x in self.carrier}

    def __call__(self, x):
        return self.structure[x]

    def __eq__(self, other):
        if not isinstance(other, FinCoalgebra):
            return NotImplemented
        return (self.functor == other.functor and self.carrier == other.carrier
                and self.structure == other.structure)

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self):
        return hash((self.functor, self.carrier, tuple(self.structure[x] for x in self.carrier)))

    def __repr__(self):
        body = ", ".join(f"{x!r}: {self.structure[x]!r}" for x in self.carrier)
        return f"FinCoalgebra({self.functor}, {{{body}}})"


def _same_functor(a: FinCoalgebra, b: FinCoalgebra) -> None:
    if a.functor != b.functor:
        raise CarrierMismatch(f"functors differ: {a.functor} vs {b.functor}")


def _check_relation(r: Relation, a: FinCoalgebra, b: FinCoalgebra) -> None:
    _same_functor(a, b)
    if r.dom != a.carrier or r.cod != b.carrier:
        raise CarrierMismatch("relation carriers do not match the coalgebras")


def is_coalgebra_morphism(fn: Mapping, a: FinCoalgebra, b: FinCoalgebra) -> Verdict:
    """Whether ``b ∘ fn = T fn ∘ a``; the witness is the first failing state."""
    _same_functor(a, b)
    target = set(b.carrier)
    if set(fn) != set(a.carrier) or not all(fn[x] in target for x in a.carrier):
        raise CarrierMismatch("map is not total from carrier(A) into carrier(B)")
    for x in a.carrier:
        if _push(a.functor, fn.__getitem__, a(x)) != b(fn[x]):
            return Verdict(False, x)
    return Verdict(True)


def is_L_bisimulation(r: Relation, a: FinCoalgebra, b: FinCoalgebra) -> Verdict:
    """Whether ``(a(x), b(y)) ∈ T̄R`` for every ``(x, y) ∈ R``."""
    _check_relation(r, a, b)
    for x, y in sorted(r.pairs, key=sort_key):
        if not lift_holds(a.functor, r, a(x), b(y)):
            return Verdict(False, (x, y))
    return Verdict(True)


def greatest_L_bisimulation(a: FinCoalgebra, b: FinCoalgebra) -> Relation:
    _same_functor(a, b)
    r = Relation.full(a.carrier, b.carrier)
    while True:
        keep = [(x, y) for x, y in r if lift_holds(a.functor, r, a(x), b(y))]
        if len(keep) == len(r):
            return r
        r = Relation(a.carrier, b.carrier, keep)


# -- terminal sequence ------------------------------------------------------

@dataclass(frozen=True)
class Stage:
    """Reachable part of one terminal-sequence stage.

    ``elements[j]`` is a ``T``-value over indices of the previous stage and
    ``beh`` maps each state to an index into ``elements``. ``down[j]`` is
    the connecting map into the previous stage.
    """

    elements: tuple
    beh: dict
    down: tuple

    def kernel(self) -> frozenset:
        blocks: dict[int, set] = {}
        for x, j in self.beh.items():
            blocks.setdefault(j, set()).add(x)
        return frozenset(frozenset(b) for b in blocks.values())


@dataclass
class BehaviourTower:
    coalgebra: FinCoalgebra
    stages: list
    stabilized_at: int | None

    def beh(self, n: int, x) -> int:
        return self.stages[n].beh[x]

    @property
    def final(self) -> Stage:
        return self.stages[-1]


def behaviour_tower(a: FinCoalgebra, max_stages: int | None = None) -> BehaviourTower:
    """Iterate ``beh_{n+1} = T(beh_n) ∘ structure`` until the kernel stops refining."""
    limit = len(a.carrier) + 2 if max_stages is None else max_stages
    stage = Stage(elements=(0,), beh={x: 0 for x in a.carrier}, down=())
    stages = [stage]
    while len(stages) <= limit:
        prev = stage.beh
        values = {x: _push(a.functor, prev.__getitem__, a(x)) for x in a.carrier}
        elements = canonical(values.values())
        index = {v: j for j, v in enumerate(elements)}
        beh = {x: index[values[x]] for x in a.carrier}
        down = [None] * len(elements)
        for x in a.carrier:
            down[beh[x]] = prev[x]
        stage = Stage(elements, beh, tuple(down))
        stages.append(stage)
        if stage.kernel() == stages[-2].kernel():
            return BehaviourTower(a, stages, len(stages) - 2)
    return BehaviourTower(a, stages, None)


def disjoint_union(a: FinCoalgebra, b: FinCoalgebra) -> FinCoalgebra:
    """Coproduct coalgebra with states ``(0, x)`` and ``(1, y)``."""
    _same_functor(a, b)
    structure = {}
    for tag, c in ((0, a), (1, b)):
        for x in c.carrier:
            structure[(tag, x)] = _push(c.functor, lambda s, t=tag: (t, s), c(x))
    return FinCoalgebra(a.functor, structure)


def behaviourally_equivalent(a: FinCoalgebra, u, b: FinCoalgebra, v) -> Verdict:
    """Compare behaviour maps on the disjoint union; the witness is the separating stage."""
    if u not in a.structure or v not in b.structure:
        raise CarrierMismatch("state not in carrier")
    tower = behaviour_tower(disjoint_union(a, b))
    for n, stage in enumerate(tower.stages):
        if stage.beh[(0, u)] != stage.beh[(1, v)]:
            return Verdict(False, n, stats={"stages": len(tower.stages)})
    return Verdict(True, stats={"stages": len(tower.stages), "stabilized_at": tower.stabilized_at})


def behavioural_equivalence(a: FinCoalgebra, b: FinCoalgebra) -> Relation:
    """All pairs ``(u, v)`` with equal behaviour at the stabilized stage."""
    final = behaviour_tower(disjoint_union(a, b)).final.beh
    return Relation.where(a.carrier, b.carrier, lambda x, y: final[(0, x)] == final[(1, y)])


# -- Stone companions -------------------------------------------------------

class HatCoalgebra:
    """A coalgebra for the Stone companion on a finite discrete space.

    Each state is sent to an atom of ``⟨Im ∇⟩``, i.e. an ultrafilter of the
    generated algebra. The atoms are only materialized when asked for:
    every member of an atom satisfies exactly the same ``∇φ``, so any member
    (``representative``) decides membership of formulas.
    """

    def __init__(self, functor: FunctorExpr, carrier: Iterable, algebra: ClopenAlgebra,
                 structure: Mapping):
        self.functor = functor
        self.carrier = canonical(carrier)
        atoms = set(algebra.atoms)
        if set(structure) != set(self.carrier):
            raise InvalidInput("structure must be total on the carrier")
        for x in self.carrier:
            if structure[x] not in atoms:
                raise MalformedValue(f"structure({x!r}) is not an atom of the algebra")
        self.__dict__["algebra"] = algebra
        self.__dict__["structure"] = {x: structure[x] for x in self.carrier}
        self.representatives = {x: min(structure[x], key=sort_key) for x in self.carrier}

    @classmethod
    def lazy_companion(cls, a: FinCoalgebra) -> "HatCoalgebra":
        hat = cls.__new__(cls)
        hat.functor = a.functor
        hat.carrier = a.carrier
        hat.representatives = dict(a.structure)
        return hat

    @cached_property
    def algebra(self) -> ClopenAlgebra:
        return generated_clopen_algebra(self.functor, self.carrier)

    @cached_property
    def structure(self) -> dict:
        return {x: self.algebra.atom_of(self.representatives[x]) for x in self.carrier}

    def __call__(self, x) -> frozenset:
        return self.structure[x]

    def representative(self, x):
        return self.representatives[x]

    @cached_property
    def formula_masks(self) -> dict:
        """State ↦ boolean vector over formulas: ``∇φ ∈ α(u)`` iff atom ⊆ ∇φ."""
        table = self.algebra.table
        out = {}
        for x in self.carrier:
            rows = [table.value_index[t] for t in self.structure[x]]
            out[x] = table.member[rows].all(axis=0)
        return out

    def contains_formula(self, x, phi) -> bool:
        """``∇φ ∈ α(x)``, decided pointwise on the representative."""
        return lift_holds(self.functor, lambda p, z: p in z, self.representatives[x], phi)

    @property
    def formulas(self) -> tuple:
        return self.algebra.table.formulas

    def __repr__(self):
        return f"HatCoalgebra({self.functor}, {len(self.carrier)} states)"


def companion(a: FinCoalgebra) -> HatCoalgebra:
    """The companion: each state goes to the atom containing its structure value."""
    return HatCoalgebra.lazy_companion(a)
