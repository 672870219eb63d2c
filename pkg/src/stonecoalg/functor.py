"""Functor grammar, object and arrow maps, and the Barr relation lifting."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Callable, Iterable, Mapping

import numpy as np

from .errors import MalformedValue, check_size, pair_guard
from .relation import Relation
from .values import LEFT, RIGHT, Inj, canonical, subset_matrix, subsets, sort_key, bool_matmul


class FunctorExpr:
    """Syntax tree of a finite-set endofunctor built from the grammar below."""

    def __mul__(self, other):
        return Product(self, other)

    def __add__(self, other):
        return Coproduct(self, other)

    def __matmul__(self, other):
        return Compose(self, other)


@dataclass(frozen=True)
class Identity(FunctorExpr):
    def __str__(self):
        return "Id"


@dataclass(frozen=True)
class Constant(FunctorExpr):
    labels: frozenset

    def __post_init__(self):
        object.__setattr__(self, "labels", frozenset(self.labels))
        if not self.labels:
            raise ValueError("constant functor needs a nonempty label set")
        if not all(isinstance(c, str) for c in self.labels):
            raise ValueError("constant labels must be strings")

    def __str__(self):
        return "Const{" + ",".join(canonical(self.labels)) + "}"


@dataclass(frozen=True)
class Powerset(FunctorExpr):
    def __str__(self):
        return "P"


@dataclass(frozen=True)
class Product(FunctorExpr):
    left: FunctorExpr
    right: FunctorExpr

    def __str__(self):
        return f"{_render(self.left, 1)} * {_render(self.right, 2)}"


@dataclass(frozen=True)
class Coproduct(FunctorExpr):
    left: FunctorExpr
    right: FunctorExpr

    def __str__(self):
        return f"{_render(self.left, 0)} + {_render(self.right, 1)}"


@dataclass(frozen=True)
class Compose(FunctorExpr):
    """``outer ∘ inner``: values are outer-values over inner-values."""

    outer: FunctorExpr
    inner: FunctorExpr

    def __str__(self):
        return f"{_render(self.outer, 3)} . {_render(self.inner, 2)}"


_LEVEL = {Coproduct: 0, Product: 1, Compose: 2}


def _render(f: FunctorExpr, min_level: int) -> str:
    # + and * associate left, . associates right
    level = _LEVEL.get(type(f), 3)
    text = str(f)
    return f"({text})" if level < min_level else text


# -- object map -------------------------------------------------------------

def count_values(f: FunctorExpr, n: int) -> int:
    """``|F X|`` for ``|X| = n`` without enumerating."""
    if isinstance(f, Identity):
        return n
    if isinstance(f, Constant):
        return len(f.labels)
    if isinstance(f, Powerset):
        return 2 ** min(n, 4096)
    if isinstance(f, Product):
        return count_values(f.left, n) * count_values(f.right, n)
    if isinstance(f, Coproduct):
        return count_values(f.left, n) + count_values(f.right, n)
    if isinstance(f, Compose):
        inner = count_values(f.inner, n)
        return count_values(f.outer, min(inner, 1 << 16))
    raise TypeError(f"not a functor expression: {f!r}")


def enumerate_values(f: FunctorExpr, carrier: Iterable) -> tuple:
    """All values of ``F X`` in canonical order, without duplicates."""
    x = canonical(carrier)
    check_size(f"|{f}(X)| with |X|={len(x)}", count_values(f, len(x)))
    return _enumerate(f, x)


def _enumerate(f: FunctorExpr, x: tuple) -> tuple:
    if isinstance(f, Identity):
        return x
    if isinstance(f, Constant):
        return canonical(f.labels)
    if isinstance(f, Powerset):
        return tuple(subsets(x))
    if isinstance(f, Product):
        return tuple(cartesian(_enumerate(f.left, x), _enumerate(f.right, x)))
    if isinstance(f, Coproduct):
        return (tuple(Inj(LEFT, a) for a in _enumerate(f.left, x))
                + tuple(Inj(RIGHT, b) for b in _enumerate(f.right, x)))
    if isinstance(f, Compose):
        inner = _enumerate(f.inner, x)
        check_size(f"|{f.outer}| over {len(inner)} inner values", count_values(f.outer, len(inner)))
        return _enumerate(f.outer, inner)
    raise TypeError(f"not a functor expression: {f!r}")


def is_wellformed(f: FunctorExpr, carrier, value) -> bool:
    """Whether ``value`` is an element of ``F X``; ``carrier`` must support ``in``."""
    if isinstance(f, Identity):
        try:
            return value in carrier
        except TypeError:
            return False
    if isinstance(f, Constant):
        return isinstance(value, str) and value in f.labels
    if isinstance(f, Powerset):
        return isinstance(value, frozenset) and all(is_wellformed(Identity(), carrier, v) for v in value)
    if isinstance(f, Product):
        return (isinstance(value, tuple) and len(value) == 2
                and is_wellformed(f.left, carrier, value[0])
                and is_wellformed(f.right, carrier, value[1]))
    if isinstance(f, Coproduct):
        if not isinstance(value, Inj):
            return False
        side = f.left if value.side == LEFT else f.right
        return is_wellformed(side, carrier, value.value)
    if isinstance(f, Compose):
        return is_wellformed(f.outer, _Members(f.inner, carrier), value)
    raise TypeError(f"not a functor expression: {f!r}")


class _Members:
    """Lazy stand-in for the carrier ``F X`` used by nested well-formedness checks."""

    def __init__(self, f, carrier):
        self.f, self.carrier = f, carrier

    def __contains__(self, value):
        return is_wellformed(self.f, self.carrier, value)


# -- arrow map --------------------------------------------------------------

def apply_map(f: FunctorExpr, fn: Mapping | Callable, value, carrier: Iterable | None = None):
    """Push ``value ∈ F X`` forward along ``fn: X → Y`` (``F fn``).

    When ``fn`` is a mapping its keys are taken as ``X`` and ``value`` is
    checked against it.
    """
    if isinstance(fn, Mapping):
        dom = fn.keys() if carrier is None else set(carrier)
        if not is_wellformed(f, dom, value):
            raise MalformedValue(f"{value!r} is not an element of {f}(X)")
        return _push(f, fn.__getitem__, value)
    if carrier is not None and not is_wellformed(f, set(carrier), value):
        raise MalformedValue(f"{value!r} is not an element of {f}(X)")
    return _push(f, fn, value)


def _push(f: FunctorExpr, fn: Callable, value):
    if isinstance(f, Identity):
        return fn(value)
    if isinstance(f, Constant):
        return value
    if isinstance(f, Powerset):
        return frozenset(fn(v) for v in value)
    if isinstance(f, Product):
        return (_push(f.left, fn, value[0]), _push(f.right, fn, value[1]))
    if isinstance(f, Coproduct):
        side = f.left if value.side == LEFT else f.right
        return Inj(value.side, _push(side, fn, value.value))
    if isinstance(f, Compose):
        return _push(f.outer, lambda v: _push(f.inner, fn, v), value)
    raise TypeError(f"not a functor expression: {f!r}")


# -- Barr lifting -----------------------------------------------------------

def barr_lift(f: FunctorExpr, r: Relation) -> Relation:
    """Barr extension ``F̄R ⊆ FX × FY`` as a dense relation.

    Computed compositionally: identity keeps ``R``, constants give the
    diagonal, products and coproducts lift componentwise, and powerset uses
    the two-sided (Egli-Milner) condition. For the weak-pullback-preserving
    grammar this coincides with the projection formula implemented by
    :func:`barr_lift_reference`.
    """
    nx, ny = count_values(f, len(r.dom)), count_values(f, len(r.cod))
    check_size(f"|{f}(X)|", nx)
    check_size(f"|{f}(Y)|", ny)
    check_size(f"lifted pairs for {f}", nx * ny, pair_guard())
    dv, cv, m = _lift_matrix(f, r.dom, r.cod, r.matrix)
    return Relation.from_matrix(dv, cv, m)


def _lift_matrix(f: FunctorExpr, dom: tuple, cod: tuple, m: np.ndarray):
    if isinstance(f, Identity):
        return dom, cod, m
    if isinstance(f, Constant):
        labels = canonical(f.labels)
        return labels, labels, np.eye(len(labels), dtype=bool)
    if isinstance(f, Powerset):
        pa, pb = subset_matrix(dom), subset_matrix(cod)
        # fwd_ok[φ,ψ]: every a ∈ φ has an R-successor in ψ; bwd_ok dually
        has_succ = bool_matmul(pb, m.T)
        fwd_ok = ~bool_matmul(pa, ~has_succ.T)
        covered = bool_matmul(pa, m)
        bwd_ok = ~bool_matmul(~covered, pb.T)
        return tuple(subsets(dom)), tuple(subsets(cod)), fwd_ok & bwd_ok
    if isinstance(f, Product):
        ld, lc, lm = _lift_matrix(f.left, dom, cod, m)
        rd, rc, rm = _lift_matrix(f.right, dom, cod, m)
        lifted = np.kron(lm.astype(np.uint8), rm.astype(np.uint8)).astype(bool)
        return tuple(cartesian(ld, rd)), tuple(cartesian(lc, rc)), lifted
    if isinstance(f, Coproduct):
        ld, lc, lm = _lift_matrix(f.left, dom, cod, m)
        rd, rc, rm = _lift_matrix(f.right, dom, cod, m)
        lifted = np.zeros((len(ld) + len(rd), len(lc) + len(rc)), dtype=bool)
        lifted[:len(ld), :len(lc)] = lm
        lifted[len(ld):, len(lc):] = rm
        dv = tuple(Inj(LEFT, a) for a in ld) + tuple(Inj(RIGHT, b) for b in rd)
        cv = tuple(Inj(LEFT, a) for a in lc) + tuple(Inj(RIGHT, b) for b in rc)
        return dv, cv, lifted
    if isinstance(f, Compose):
        idom, icod, im = _lift_matrix(f.inner, dom, cod, m)
        check_size(f"lifted pairs for {f.outer}",
                   count_values(f.outer, len(idom)) * count_values(f.outer, len(icod)), pair_guard())
        return _lift_matrix(f.outer, idom, icod, im)
    raise TypeError(f"not a functor expression: {f!r}")


def lift_holds(f: FunctorExpr, rel: Relation | Callable, s, t) -> bool:
    """Pointwise test ``(s, t) ∈ F̄R`` without materializing the lifting."""
    pred = rel.holds if isinstance(rel, Relation) else rel
    return _holds(f, pred, s, t)


def _holds(f: FunctorExpr, pred: Callable, s, t) -> bool:
    if isinstance(f, Identity):
        return pred(s, t)
    if isinstance(f, Constant):
        return s == t
    if isinstance(f, Powerset):
        return (all(any(pred(a, b) for b in t) for a in s)
                and all(any(pred(a, b) for a in s) for b in t))
    if isinstance(f, Product):
        return _holds(f.left, pred, s[0], t[0]) and _holds(f.right, pred, s[1], t[1])
    if isinstance(f, Coproduct):
        if s.side != t.side:
            return False
        return _holds(f.left if s.side == LEFT else f.right, pred, s.value, t.value)
    if isinstance(f, Compose):
        return _holds(f.outer, lambda a, b: _holds(f.inner, pred, a, b), s, t)
    raise TypeError(f"not a functor expression: {f!r}")


def barr_lift_reference(f: FunctorExpr, r: Relation) -> Relation:
    """Literal projection formula ``{(Fπ(ρ), Fπ'(ρ)) | ρ ∈ F R}``."""
    witnesses = enumerate_values(f, r.pairs)
    first = lambda p: p[0]
    second = lambda p: p[1]
    pairs = {(_push(f, first, rho), _push(f, second, rho)) for rho in witnesses}
    return Relation(enumerate_values(f, r.dom), enumerate_values(f, r.cod), pairs)


def lift_graph(f: FunctorExpr, fn: Mapping, dom: Iterable, cod: Iterable) -> Relation:
    """Graph of ``F fn`` as a relation ``FX × FY``."""
    fx = enumerate_values(f, dom)
    return Relation(fx, enumerate_values(f, cod), ((t, _push(f, fn.__getitem__, t)) for t in fx))


# -- lax extension laws -----------------------------------------------------

LAWS = ("L1", "L2", "L2=", "L3", "symmetry")


@dataclass(frozen=True)
class LawSample:
    """Relations ``R ⊆ X×Z``, ``S ⊆ Z×Y`` and a function ``f: X → Z``."""

    r: Relation
    s: Relation
    f: Mapping


@dataclass
class LawResult:
    holds: bool = True
    checked: int = 0
    counterexample: tuple | None = None


@dataclass
class LawReport:
    functor: FunctorExpr
    results: dict = field(default_factory=lambda: {law: LawResult() for law in LAWS})

    @property
    def all_hold(self) -> bool:
        return all(res.holds for res in self.results.values())

    def _record(self, law: str, ok: bool, sample_no: int, witness) -> None:
        res = self.results[law]
        res.checked += 1
        if not ok and res.holds:
            res.holds = False
            res.counterexample = (sample_no, witness)


def _first_extra(a: Relation, b: Relation):
    """Some pair in ``a`` but not in ``b`` (same carriers), or None."""
    extra = a.matrix & ~b.matrix
    if not extra.any():
        return None
    i, j = (int(k[0]) for k in np.nonzero(extra))
    return a.dom[i], a.cod[j]


def check_lax_laws(f: FunctorExpr, samples: Iterable[LawSample]) -> LawReport:
    """Check L1, L2 (and its equality form), L3 and symmetry on each sample."""
    report = LawReport(f)
    for no, smp in enumerate(samples):
        r, s = smp.r, smp.s
        lr, ls = barr_lift(f, r), barr_lift(f, s)

        subs = [Relation.empty(r.dom, r.cod)]
        subs += [Relation(r.dom, r.cod, r.pairs - {p}) for p in sorted(r.pairs, key=sort_key)]
        for sub in subs:
            w = _first_extra(barr_lift(f, sub), lr)
            report._record("L1", w is None, no, w)

        composed = lr.compose(ls)
        lrs = barr_lift(f, r.compose(s))
        w = _first_extra(composed, lrs)
        report._record("L2", w is None, no, w)
        w = w or _first_extra(lrs, composed)
        report._record("L2=", w is None, no, w)

        graph = lift_graph(f, smp.f, r.dom, r.cod)
        w = _first_extra(graph, barr_lift(f, Relation.graph(smp.f, r.dom, r.cod)))
        report._record("L3", w is None, no, w)

        conv = barr_lift(f, r.converse())
        lr_conv = lr.converse()
        w = _first_extra(conv, lr_conv) or _first_extra(lr_conv, conv)
        report._record("symmetry", w is None, no, w)
    return report


def random_samples(rng: random.Random, count: int, max_carrier: int = 3,
                   density: float | None = None) -> list[LawSample]:
    """Random ``(R, S, f)`` triples over carriers of size 1..max_carrier."""
    out = []
    for _ in range(count):
        x = [f"x{i}" for i in range(rng.randint(1, max_carrier))]
        z = [f"z{i}" for i in range(rng.randint(1, max_carrier))]
        y = [f"y{i}" for i in range(rng.randint(1, max_carrier))]
        p = rng.random() if density is None else density
        r = Relation(x, z, [(a, b) for a in x for b in z if rng.random() < p])
        s = Relation(z, y, [(a, b) for a in z for b in y if rng.random() < p])
        fn = {a: rng.choice(z) for a in x}
        out.append(LawSample(r, s, fn))
    return out
