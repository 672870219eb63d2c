"""Profinite coalgebras presented as inverse towers of finite coalgebras.

A point of the limit is a :class:`Thread`; a relation on the limit is known
only through its projections to each finite level, which is also exactly
what its topological closure looks like level by level.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Callable, Hashable, Iterable

from .coalgebra import FinCoalgebra, HatCoalgebra, companion, is_coalgebra_morphism
from .errors import DepthUnavailable, InvalidInput, check_size
from .functor import Powerset
from .relation import Relation
from .stone_hat import NbisimVerdict, is_neighbourhood_bisimulation

CANTOR_MAX_DEPTH = 12


@dataclass
class Tower:
    """``levels[n]`` with surjective morphisms ``projections[n]: level n+1 → level n``."""

    levels: list
    projections: list
    name: str = ""

    def __post_init__(self):
        if len(self.projections) != max(len(self.levels) - 1, 0):
            raise InvalidInput("a tower with k+1 levels needs k projections")
        if not self.levels:
            raise InvalidInput("a tower needs at least one level")

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def functor(self):
        return self.levels[0].functor

    def carrier(self, n: int) -> tuple:
        self._need(n)
        return self.levels[n].carrier

    def project(self, x, src: int, dst: int):
        """Image of a level-``src`` state at level ``dst <= src``."""
        self._need(src)
        for k in range(src - 1, dst - 1, -1):
            x = self.projections[k][x]
        return x

    def _need(self, n: int) -> None:
        if n < 0 or n > self.depth:
            raise DepthUnavailable(f"level {n} requested, tower has depth {self.depth}")

    @classmethod
    def constant(cls, coalgebra: FinCoalgebra, depth: int) -> "Tower":
        ident = {x: x for x in coalgebra.carrier}
        return cls([coalgebra] * (depth + 1), [dict(ident) for _ in range(depth)], "constant")


@dataclass
class TowerVerdict:
    valid: bool
    failing_level: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.valid


def validate_tower(tower: Tower) -> TowerVerdict:
    """Check that every projection is total, surjective and a coalgebra morphism."""
    if not tower.levels[0].carrier:
        return TowerVerdict(False, 0, "level 0 is empty")
    for n, p in enumerate(tower.projections):
        upper, lower = tower.levels[n + 1], tower.levels[n]
        if upper.functor != lower.functor:
            return TowerVerdict(False, n, "functor changes between levels")
        if set(p) != set(upper.carrier) or not set(p.values()) <= set(lower.carrier):
            return TowerVerdict(False, n, f"projection {n} is not a total map level {n + 1} → level {n}")
        if set(p.values()) != set(lower.carrier):
            return TowerVerdict(False, n, f"projection {n} is not surjective")
        square = is_coalgebra_morphism(p, upper, lower)
        if not square.holds:
            return TowerVerdict(False, n, f"projection {n} is not a morphism at state {square.witness!r}")
    return TowerVerdict(True)


def cantor_shift_example(depth: int) -> Tower:
    """Cantor space with successors ``x ↦ {0x, 1x}`` (the words shifting to ``x``).

    Level ``n`` holds binary words of length ``n``; the projection drops the
    last letter and ``α_n(w) = {b + w[:-1] | b ∈ {0, 1}}`` (``α_0(ε) = {ε}``),
    so every truncation is a p-morphism.
    """
    if depth < 1:
        raise InvalidInput("depth must be at least 1")
    check_size("cantor tower depth", depth, CANTOR_MAX_DEPTH)
    levels, projections = [], []
    for n in range(depth + 1):
        words = ["".join(bits) for bits in cartesian("01", repeat=n)]
        if n == 0:
            structure = {"": frozenset({""})}
        else:
            structure = {w: frozenset({"0" + w[:-1], "1" + w[:-1]}) for w in words}
        levels.append(FinCoalgebra(Powerset(), structure))
        if n:
            projections.append({w: w[:-1] for w in words})
    return Tower(levels, projections, "cantor-shift")


# -- threads ----------------------------------------------------------------

class Thread:
    """A point of an inverse limit, produced level by level by ``rule``.

    Components are memoized; extension of the table is serialized while
    readers of already tabulated levels never block.
    """

    def __init__(self, rule: Callable[[int], Hashable], name: str = ""):
        self.rule = rule
        self.name = name
        self._table: list = []
        self._lock = threading.Lock()

    @classmethod
    def eventually_periodic(cls, prefix: str, cycle: str) -> "Thread":
        """The binary word ``prefix · cycle^ω``."""
        if not cycle:
            raise InvalidInput("cycle must be nonempty")

        def rule(n: int) -> str:
            word = prefix + cycle * (n // len(cycle) + 1)
            return word[:n]

        return cls(rule, f"{prefix}({cycle})")

    def component(self, n: int):
        if n < len(self._table):
            return self._table[n]
        with self._lock:
            while len(self._table) <= n:
                self._table.append(self.rule(len(self._table)))
        return self._table[n]

    def tabulate(self, tower: Tower, n: int) -> list:
        """Components ``0..n``, checked against the tower's projections."""
        tower._need(n)
        comps = [self.component(k) for k in range(n + 1)]
        for k in range(n + 1):
            if comps[k] not in tower.levels[k].structure:
                raise InvalidInput(f"thread {self.name} leaves the carrier at level {k}")
            if k and tower.projections[k - 1][comps[k]] != comps[k - 1]:
                raise InvalidInput(f"thread {self.name} is not compatible at level {k}")
        return comps

    def __repr__(self):
        return f"Thread({self.name or self.rule!r})"


@dataclass
class ThreadRelation:
    """A set ``B`` of thread pairs, possibly infinite.

    ``witnesses(n)`` returns finitely many pairs of ``B`` whose level-``n``
    components already exhaust the level-``n`` projection of ``B``.
    """

    witnesses: Callable[[int], Iterable[tuple]]
    name: str = ""

    @classmethod
    def finite(cls, pairs: Iterable[tuple], name: str = "") -> "ThreadRelation":
        fixed = list(pairs)
        return cls(lambda n: fixed, name)


@dataclass
class LevelRelation:
    """Relations ``R_n ⊆ level_n(T1) × level_n(T2)`` for ``n = 0..depth``."""

    relations: list

    @property
    def depth(self) -> int:
        return len(self.relations) - 1

    def at(self, n: int) -> Relation:
        if n < 0 or n > self.depth:
            raise DepthUnavailable(f"relation known to level {self.depth}, asked for {n}")
        return self.relations[n]

    def first_incompatible(self, t1: Tower, t2: Tower) -> int | None:
        """Least ``n`` with ``(p × p)[R_{n+1}] ⊄ R_n``, if any."""
        for n in range(self.depth):
            lower = self.relations[n]
            p, q = t1.projections[n], t2.projections[n]
            if any((p[x], q[y]) not in lower for x, y in self.relations[n + 1]):
                return n
        return None

    @classmethod
    def identity(cls, tower: Tower, depth: int | None = None) -> "LevelRelation":
        d = tower.depth if depth is None else depth
        return cls([Relation.identity(tower.carrier(n)) for n in range(d + 1)])

    @classmethod
    def where(cls, t1: Tower, t2: Tower, pred: Callable, depth: int) -> "LevelRelation":
        return cls([Relation.where(t1.carrier(n), t2.carrier(n), pred) for n in range(depth + 1)])


# -- closure and level-wise checks -----------------------------------------

def closure_approx(b: ThreadRelation | LevelRelation, t1: Tower, t2: Tower, n: int) -> Relation:
    """Level-``n`` projection of ``B``, which is also that of its closure."""
    if isinstance(b, LevelRelation):
        return b.at(n)
    t1._need(n)
    t2._need(n)
    pairs = set()
    for x, y in b.witnesses(n):
        pairs.add((x.tabulate(t1, n)[n], y.tabulate(t2, n)[n]))
    return Relation(t1.carrier(n), t2.carrier(n), pairs)


def closure_levels(b: ThreadRelation | LevelRelation, t1: Tower, t2: Tower, n: int) -> LevelRelation:
    return LevelRelation([closure_approx(b, t1, t2, k) for k in range(n + 1)])


def level_companions(tower: Tower, n: int) -> list[HatCoalgebra]:
    return [companion(tower.levels[k]) for k in range(n + 1)]


def check_nbisim_to_depth(r: LevelRelation, t1: Tower, t2: Tower, n: int,
                          method: str = "auto") -> list[NbisimVerdict]:
    """Neighbourhood-bisimulation verdict against the clopens of each level ``0..n``.

    Level-``k`` clopens pull back along the limit projections, and those
    projections are coalgebra morphisms, so the finite check on level ``k``
    decides the clauses for every formula built from level-``k`` clopens.
    """
    for t in (t1, t2):
        t._need(n)
        verdict = validate_tower(Tower(t.levels[:n + 1], t.projections[:n], t.name))
        if not verdict.valid:
            raise InvalidInput(f"tower {t.name or ''} invalid: {verdict.reason}")
    r.at(n)
    bad = LevelRelation(r.relations[:n + 1]).first_incompatible(t1, t2)
    if bad is not None:
        raise InvalidInput(f"level relation is not compatible between levels {bad} and {bad + 1}")
    out = []
    for k in range(n + 1):
        v = is_neighbourhood_bisimulation(r.at(k), companion(t1.levels[k]), companion(t2.levels[k]), method)
        v.stats["level"] = k
        out.append(v)
    return out


@dataclass
class LevelProbe:
    level: int
    closure: Relation
    verdict: NbisimVerdict


@dataclass
class ProbeReport:
    depth: int
    levels: list = field(default_factory=list)
    note: str = ("verified to the stated depth only; level projections of B and of its "
                 "closure coincide, so these checks cannot separate the two")

    @property
    def holds(self) -> bool:
        return all(p.verdict.holds for p in self.levels)

    @property
    def first_failure(self) -> int | None:
        return next((p.level for p in self.levels if not p.verdict.holds), None)


def closure_theorem_probe(b: ThreadRelation | LevelRelation, t1: Tower, t2: Tower, n: int,
                          method: str = "auto") -> ProbeReport:
    """Check the closure of ``B`` as a neighbourhood bisimulation on levels ``0..n``."""
    closure = closure_levels(b, t1, t2, n)
    verdicts = check_nbisim_to_depth(closure, t1, t2, n, method)
    report = ProbeReport(n)
    for k, v in enumerate(verdicts):
        report.levels.append(LevelProbe(k, closure.at(k), v))
    return report


def image_compatibility(r: LevelRelation, t1: Tower, t2: Tower, subset: Iterable, n: int) -> int | None:
    """Project ``Z ⊆ level n`` down and check ``p[R_{k+1}[Z_{k+1}]] ⊆ R_k[Z_k]``.

    Returns the first level where the images fail to be compatible, or None.
    """
    zs = {n: frozenset(subset)}
    for k in range(n - 1, -1, -1):
        zs[k] = frozenset(t1.projections[k][x] for x in zs[k + 1])
    images = {k: r.at(k).image(zs[k]) for k in range(n + 1)}
    for k in range(n):
        down = frozenset(t2.projections[k][y] for y in images[k + 1])
        if not down <= images[k]:
            return k
    return None


# -- built-in thread relations on the Cantor tower -------------------------

def _words(n: int) -> list[str]:
    return ["".join(bits) for bits in cartesian("01", repeat=n)]


def _complement(w: str) -> str:
    return w.translate(str.maketrans("01", "10"))


def cantor_relation(name: str) -> ThreadRelation | Callable[[Tower, int], LevelRelation]:
    """Named relations on the Cantor tower (see ``CANTOR_RELATIONS``)."""
    try:
        return CANTOR_RELATIONS[name]
    except KeyError:
        raise InvalidInput(f"unknown built-in relation {name!r}; known: {sorted(CANTOR_RELATIONS)}") from None


def _dense_identity(n: int):
    for w in _words(n):
        t = Thread.eventually_periodic(w, "0")
        yield t, t


def _dense_complement(n: int):
    for w in _words(n):
        yield Thread.eventually_periodic(w, "0"), Thread.eventually_periodic(_complement(w), "1")


def _zero_point(n: int):
    t = Thread.eventually_periodic("", "0")
    return [(t, t)]


def _to_all_zero(n: int):
    z = Thread.eventually_periodic("", "0")
    for w in _words(n):
        yield Thread.eventually_periodic(w, "0"), z


CANTOR_RELATIONS = {
    "empty": ThreadRelation.finite([], "empty"),
    "identity-eventually-zero": ThreadRelation(_dense_identity, "identity-eventually-zero"),
    "complement-eventually-zero": ThreadRelation(_dense_complement, "complement-eventually-zero"),
    "zero-point": ThreadRelation(_zero_point, "zero-point"),
    "all-to-zero": ThreadRelation(_to_all_zero, "all-to-zero"),
}


def cantor_level_relation(name: str, tower: Tower, depth: int) -> LevelRelation:
    """Level relations given directly (closed relations on the Cantor tower)."""
    if name == "identity":
        return LevelRelation.identity(tower, depth)
    if name == "complement":
        return LevelRelation.where(tower, tower, lambda x, y: y == _complement(x), depth)
    if name == "all-to-zero":
        return LevelRelation.where(tower, tower, lambda x, y: set(y) <= {"0"}, depth)
    raise InvalidInput(f"unknown level relation {name!r}")
