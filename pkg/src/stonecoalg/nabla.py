"""The ∇ modality over a functor and the clopen algebra its images generate."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .errors import InvalidInput, MalformedValue, check_size, current_guard
from .functor import FunctorExpr, Powerset, _push, barr_lift, is_wellformed
from .relation import membership
from .values import canonical, subsets


@dataclass(frozen=True)
class NablaFormula:
    """A value of ``T(P X)`` read as a modal formula over propositions on ``X``."""

    functor: FunctorExpr
    base: tuple
    body: object

    def __post_init__(self):
        object.__setattr__(self, "base", canonical(self.base))
        if not is_wellformed(self.functor, set(subsets(self.base)), self.body):
            raise MalformedValue(f"{self.body!r} is not in {self.functor}(P X)")


class NablaTable:
    """All of ``∇_X`` at once: ``member[i, k]`` iff ``universe[i] ∈ ∇ formulas[k]``."""

    def __init__(self, functor: FunctorExpr, base: tuple):
        self.functor = functor
        self.base = base
        lifted = barr_lift(functor, membership(base))
        self.universe = lifted.dom
        self.formulas = lifted.cod
        self.member = lifted.matrix
        self.formula_index = {phi: k for k, phi in enumerate(self.formulas)}
        self.value_index = {a: i for i, a in enumerate(self.universe)}

    def extension(self, k: int) -> frozenset:
        return frozenset(self.universe[i] for i in np.nonzero(self.member[:, k])[0])

    def index_of(self, phi) -> int:
        try:
            return self.formula_index[phi]
        except KeyError:
            raise MalformedValue(f"{phi!r} is not in {self.functor}(P X)") from None


@lru_cache(maxsize=256)
def _table(functor: FunctorExpr, base: tuple, guard: int) -> NablaTable:
    return NablaTable(functor, base)


def nabla_table(functor: FunctorExpr, base: Iterable) -> NablaTable:
    return _table(functor, canonical(base), current_guard())


def eval_nabla(phi: NablaFormula) -> frozenset:
    """``∇φ = {α ∈ TX | α (T̄∈) φ}``."""
    table = nabla_table(phi.functor, phi.base)
    return table.extension(table.index_of(phi.body))


def nabla(functor: FunctorExpr, base: Iterable, body) -> frozenset:
    return eval_nabla(NablaFormula(functor, canonical(base), body))


def diamond(carrier: Iterable, z: Iterable) -> frozenset:
    """``◇Z = ∇{Z, X}`` for the powerset functor."""
    x = canonical(carrier)
    z = frozenset(z)
    if not z <= set(x):
        raise InvalidInput("Z must be a subset of X")
    return nabla(Powerset(), x, frozenset({z, frozenset(x)}))


def box(carrier: Iterable, z: Iterable) -> frozenset:
    """``□Z = ∇{Z} ∪ ∇∅`` for the powerset functor."""
    x = canonical(carrier)
    z = frozenset(z)
    if not z <= set(x):
        raise InvalidInput("Z must be a subset of X")
    return nabla(Powerset(), x, frozenset({z})) | nabla(Powerset(), x, frozenset())


def preimage_formula(functor: FunctorExpr, fn: Mapping, dom: Iterable, phi):
    """Pull ``φ ∈ T(P Y)`` back along ``fn: X → Y`` as ``T(fn⁻¹)(φ)``."""
    d = canonical(dom)

    def pre(zs):
        return frozenset(x for x in d if fn[x] in zs)

    return _push(functor, pre, phi)


@dataclass
class ClopenAlgebra:
    """Boolean subalgebra of ``Q(universe)`` given by its generators and atoms."""

    universe: tuple
    generators: tuple
    atoms: tuple
    table: NablaTable | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self._atom_of = {a: k for k, atom in enumerate(self.atoms) for a in atom}

    def atom_of(self, value) -> frozenset:
        try:
            return self.atoms[self._atom_of[value]]
        except KeyError:
            raise MalformedValue(f"{value!r} is not in the universe") from None

    def atom_index(self, value) -> int:
        return self._atom_of[value]

    @property
    def separates_points(self) -> bool:
        return len(self.atoms) == len(self.universe)

    def quotient_map(self) -> dict:
        """Universe value ↦ its atom (the ultrafilter it determines)."""
        return {a: self.atoms[k] for a, k in self._atom_of.items()}

    def elements(self) -> frozenset:
        """Every element of the algebra, as unions of atoms."""
        check_size("clopen algebra elements", 2 ** len(self.atoms))
        out = set()
        for mask in range(2 ** len(self.atoms)):
            out.add(frozenset().union(*(a for k, a in enumerate(self.atoms) if mask >> k & 1)))
        return frozenset(out)

    def contains(self, subset: Iterable) -> bool:
        s = frozenset(subset)
        return all(atom <= s or not (atom & s) for atom in self.atoms)


def generated_clopen_algebra(functor: FunctorExpr, base: Iterable) -> ClopenAlgebra:
    """``⟨Im ∇_X⟩`` with atoms found as classes of "same generators" in ``TX``."""
    table = nabla_table(functor, base)
    gens = tuple(table.extension(k) for k in range(len(table.formulas)))
    classes: dict[bytes, list] = {}
    for i, a in enumerate(table.universe):
        classes.setdefault(np.packbits(table.member[i]).tobytes(), []).append(a)
    atoms = canonical(frozenset(c) for c in classes.values())
    return ClopenAlgebra(table.universe, gens, atoms, table)
