"""Neighbourhood and Vietoris bisimulations between Stone-companion coalgebras."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Iterable

import numpy as np

from .coalgebra import FinCoalgebra, HatCoalgebra, Verdict, _check_relation, is_L_bisimulation
from .errors import CarrierMismatch, InvalidInput, check_size, current_guard, pair_guard
from .functor import Powerset, _push, barr_lift, count_values, lift_holds
from .relation import Relation, backward_lift, forward_lift
from .values import sort_key

FORWARD = "forward"
BACKWARD = "backward"
METHODS = ("auto", "enumerate", "reduced")


@dataclass
class NbisimVerdict:
    """``witness`` is ``(u, v, φ, ψ, direction)`` for the least violated clause."""

    holds: bool
    witness: tuple | None = None
    stats: dict = field(default_factory=dict)
    note: str = ""

    def __bool__(self):
        return self.holds


def _check_hat(r: Relation, a: HatCoalgebra, b: HatCoalgebra) -> None:
    if a.functor != b.functor:
        raise CarrierMismatch(f"functors differ: {a.functor} vs {b.functor}")
    if r.dom != a.carrier or r.cod != b.carrier:
        raise CarrierMismatch("relation carriers do not match the coalgebras")


class _Lifted:
    """``T̄(→R)`` and ``T̄(←R)`` as matrices over the formula spaces of a and b."""

    def __init__(self, r: Relation, a: HatCoalgebra, b: HatCoalgebra):
        self.fwd = barr_lift(a.functor, forward_lift(r))
        self.bwd = barr_lift(a.functor, backward_lift(r))
        if self.fwd.dom != a.formulas or self.fwd.cod != b.formulas:
            raise AssertionError("formula enumeration out of step with the lifting")

    def violation(self, a: HatCoalgebra, u, b: HatCoalgebra, v):
        phi_u, psi_v = a.formula_masks[u], b.formula_masks[v]
        # clause 1: φ T̄(→R) ψ and ∇φ ∈ α(u) force ∇ψ ∈ β(v)
        bad = self.fwd.matrix & phi_u[:, None] & ~psi_v[None, :]
        if bad.any():
            i, j = (int(k[0]) for k in np.nonzero(bad))
            return a.formulas[i], b.formulas[j], FORWARD
        # clause 2: φ T̄(←R) ψ and ∇ψ ∈ β(v) force ∇φ ∈ α(u)
        bad = self.bwd.matrix & ~phi_u[:, None] & psi_v[None, :]
        if bad.any():
            i, j = (int(k[0]) for k in np.nonzero(bad))
            return a.formulas[i], b.formulas[j], BACKWARD
        return None


def _subset(p, q) -> bool:
    return p <= q


def _singleton(x) -> frozenset:
    return frozenset((x,))


class _Reduced:
    """Both clauses decided by one pointwise lifting test each.

    With ``g(x) = R[x]`` and ``η(y) = {y}`` one has ``∈ ; →R = g ; ⊆`` and
    ``∈ = η ; ⊆``. Because the Barr lifting preserves composition and graphs,
    clause 1 for ``(u, v)`` is equivalent to ``Tη(β v) T̄(⊆) Tg(α u)``, with
    the extremal witnesses ``φ = Tη(α u)`` and ``ψ = Tg(α u)``. Clause 2 is
    the mirror image with ``g'(y) = R†[y]``.
    """

    def __init__(self, r: Relation, a: HatCoalgebra, b: HatCoalgebra):
        conv = r.converse()
        self.img = {x: r.image((x,)) for x in r.dom}
        self.pre = {y: conv.image((y,)) for y in r.cod}

    def violation(self, a: HatCoalgebra, u, b: HatCoalgebra, v):
        f = a.functor
        au, bv = a.representative(u), b.representative(v)
        psi = _push(f, self.img.__getitem__, au)
        if not lift_holds(f, _subset, _push(f, _singleton, bv), psi):
            return _push(f, _singleton, au), psi, FORWARD
        phi = _push(f, self.pre.__getitem__, bv)
        if not lift_holds(f, _subset, _push(f, _singleton, au), phi):
            return phi, _push(f, _singleton, bv), BACKWARD
        return None


def _choose(method: str, a: HatCoalgebra, b: HatCoalgebra) -> str:
    if method not in METHODS:
        raise InvalidInput(f"unknown method {method!r}; pick one of {METHODS}")
    if method != "auto":
        return method
    try:
        nx = count_values(a.functor, 2 ** len(a.carrier)) if len(a.carrier) < 64 else None
        ny = count_values(b.functor, 2 ** len(b.carrier)) if len(b.carrier) < 64 else None
    except OverflowError:
        return "reduced"
    if nx is None or ny is None:
        return "reduced"
    fits = nx <= current_guard() and ny <= current_guard() and nx * ny <= pair_guard()
    return "enumerate" if fits else "reduced"


def _violations(r: Relation, a: HatCoalgebra, b: HatCoalgebra, first_only: bool, method: str):
    engine = _Lifted(r, a, b) if method == "enumerate" else _Reduced(r, a, b)
    found = []
    for u, v in sorted(r.pairs, key=sort_key):
        hit = engine.violation(a, u, b, v)
        if hit is not None:
            found.append((u, v) + hit)
            if first_only:
                break
    return engine, found


def is_neighbourhood_bisimulation(r: Relation, a: HatCoalgebra, b: HatCoalgebra,
                                  method: str = "auto") -> NbisimVerdict:
    """Check both transfer clauses for every related pair of states.

    ``method="enumerate"`` quantifies over all formula pairs inside the
    lifted arrow relations and reports the least violating tuple in
    canonical order (state pair, forward before backward, φ, ψ).
    ``method="reduced"`` decides the same clauses pointwise and scales to
    carriers whose formula spaces cannot be enumerated; its witness is an
    extremal violating pair. ``auto`` enumerates when the guard allows.
    """
    _check_hat(r, a, b)
    method = _choose(method, a, b)
    start = time.perf_counter()
    stats = {"method": method, "pairs": len(r)}
    if method == "enumerate":
        stats["formulas_x"] = len(a.formulas)
        stats["formulas_y"] = len(b.formulas)
    if not len(r):
        stats["seconds"] = time.perf_counter() - start
        return NbisimVerdict(True, None, stats, "empty relation")
    engine, found = _violations(r, a, b, True, method)
    if method == "enumerate":
        stats["lifted_forward"] = len(engine.fwd)
        stats["lifted_backward"] = len(engine.bwd)
    stats["seconds"] = time.perf_counter() - start
    if found:
        return NbisimVerdict(False, found[0], stats)
    return NbisimVerdict(True, None, stats)


def _refine(r: Relation, a: HatCoalgebra, b: HatCoalgebra, method: str) -> Relation:
    for _ in range(len(r) + 1):
        if not len(r):
            return r
        _, found = _violations(r, a, b, False, method)
        if not found:
            return r
        bad = {(u, v) for u, v, *_ in found}
        r = Relation(r.dom, r.cod, r.pairs - bad)
    raise AssertionError("neighbourhood refinement did not converge")


def greatest_neighbourhood_bisimulation(a: HatCoalgebra, b: HatCoalgebra,
                                        within: Relation | None = None,
                                        method: str = "auto") -> Relation:
    """Largest neighbourhood bisimulation (inside ``within`` when given).

    Violating pairs are removed in rounds until none remain; the result is
    re-checked before it is returned.
    """
    r = Relation.full(a.carrier, b.carrier) if within is None else within
    _check_hat(r, a, b)
    method = _choose(method, a, b)
    r = _refine(r, a, b, method)
    if not is_neighbourhood_bisimulation(r, a, b, method).holds:
        raise AssertionError("refinement fixpoint failed its own check")
    return r


def is_vietoris_bisimulation(r: Relation, a: FinCoalgebra, b: FinCoalgebra) -> Verdict:
    """Kripke bisimulation that is closed; closedness is automatic on finite spaces."""
    if not (isinstance(a.functor, Powerset) and isinstance(b.functor, Powerset)):
        raise InvalidInput("Vietoris bisimulation needs powerset coalgebras")
    _check_relation(r, a, b)
    v = is_L_bisimulation(r, a, b)
    v.note = "closed: automatic on finite discrete spaces"
    return v


def _validated(family: Iterable[Relation], a: HatCoalgebra, b: HatCoalgebra, method: str) -> list:
    members = list(family)
    for k, r in enumerate(members):
        _check_hat(r, a, b)
        if not is_neighbourhood_bisimulation(r, a, b, method).holds:
            raise InvalidInput(f"family member {k} is not a neighbourhood bisimulation")
    return members


def nbisim_join(family: Iterable[Relation], a: HatCoalgebra, b: HatCoalgebra,
                method: str = "auto") -> Relation:
    """Closure of the union; the closure is the identity on finite discrete spaces."""
    joined = Relation.empty(a.carrier, b.carrier)
    for r in _validated(family, a, b, method):
        joined = joined | r
    if not is_neighbourhood_bisimulation(joined, a, b, method).holds:
        raise AssertionError("union of neighbourhood bisimulations failed the check")
    return joined


def nbisim_meet(family: Iterable[Relation], a: HatCoalgebra, b: HatCoalgebra,
                method: str = "auto") -> Relation:
    """Largest neighbourhood bisimulation inside the intersection of the family."""
    common = Relation.full(a.carrier, b.carrier)
    for r in _validated(family, a, b, method):
        common = common & r
    return greatest_neighbourhood_bisimulation(a, b, within=common, method=method)


def all_neighbourhood_bisimulations(a: HatCoalgebra, b: HatCoalgebra,
                                    method: str = "auto") -> list[Relation]:
    """Every neighbourhood bisimulation, by exhaustive search over relations."""
    cells = list(cartesian(a.carrier, b.carrier))
    check_size("relations to enumerate", 2 ** len(cells))
    out = []
    for mask in range(2 ** len(cells)):
        r = Relation(a.carrier, b.carrier, (c for k, c in enumerate(cells) if mask >> k & 1))
        if is_neighbourhood_bisimulation(r, a, b, method).holds:
            out.append(r)
    return out
