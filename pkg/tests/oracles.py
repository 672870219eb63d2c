"""Independent brute-force oracles.

Nothing here calls the package's lifting, ∇ or checking code; only the
functor syntax tree and the value classes are shared.
"""
from __future__ import annotations

from itertools import chain, combinations, product

from stonecoalg.functor import Compose, Constant, Coproduct, Identity, Powerset, Product
from stonecoalg.values import Inj


def powerset(xs):
    xs = list(xs)
    return [frozenset(c) for c in chain.from_iterable(combinations(xs, k) for k in range(len(xs) + 1))]


def values(f, xs) -> list:
    """All of ``F X``, by plain recursion."""
    xs = list(xs)
    if isinstance(f, Identity):
        return list(xs)
    if isinstance(f, Constant):
        return list(f.labels)
    if isinstance(f, Powerset):
        return powerset(xs)
    if isinstance(f, Product):
        return list(product(values(f.left, xs), values(f.right, xs)))
    if isinstance(f, Coproduct):
        return [Inj("inl", v) for v in values(f.left, xs)] + [Inj("inr", v) for v in values(f.right, xs)]
    if isinstance(f, Compose):
        return values(f.outer, values(f.inner, xs))
    raise TypeError(f)


def fmap(f, fn, v):
    if isinstance(f, Identity):
        return fn(v)
    if isinstance(f, Constant):
        return v
    if isinstance(f, Powerset):
        return frozenset(fn(x) for x in v)
    if isinstance(f, Product):
        return fmap(f.left, fn, v[0]), fmap(f.right, fn, v[1])
    if isinstance(f, Coproduct):
        return Inj(v.side, fmap(f.left if v.side == "inl" else f.right, fn, v.value))
    if isinstance(f, Compose):
        return fmap(f.outer, lambda w: fmap(f.inner, fn, w), v)
    raise TypeError(f)


def barr(f, pairs) -> set:
    """The literal projection formula over ``F(R)``."""
    out = set()
    for rho in values(f, sorted(pairs, key=repr)):
        out.add((fmap(f, lambda p: p[0], rho), fmap(f, lambda p: p[1], rho)))
    return out


def egli_milner(rel, s, t) -> bool:
    """Powerset lifting evaluated directly."""
    return (all(any(rel(x, y) for y in t) for x in s)
            and all(any(rel(x, y) for x in s) for y in t))


def nabla_powerset(xs, phi) -> set:
    """``α ∈ ∇φ`` iff ``α ⊆ ⋃φ`` and α meets every member of φ."""
    return {a for a in powerset(xs) if egli_milner(lambda x, z: x in z, a, phi)}


def kripke_bisim(pairs, a: dict, b: dict) -> bool:
    for x, y in pairs:
        if not all(any((x2, y2) in pairs for y2 in b[y]) for x2 in a[x]):
            return False
        if not all(any((x2, y2) in pairs for x2 in a[x]) for y2 in b[y]):
            return False
    return True


def greatest_kripke(a: dict, b: dict) -> set:
    r = {(x, y) for x in a for y in b}
    while True:
        keep = {p for p in r if _step_ok(p, r, a, b)}
        if keep == r:
            return r
        r = keep


def _step_ok(p, r, a, b) -> bool:
    x, y = p
    return (all(any((x2, y2) in r for y2 in b[y]) for x2 in a[x])
            and all(any((x2, y2) in r for x2 in a[x]) for y2 in b[y]))


def all_relations(xs, ys):
    cells = list(product(xs, ys))
    for mask in range(2 ** len(cells)):
        yield {c for k, c in enumerate(cells) if mask >> k & 1}


def powerset_corpus(max_states: int = 2) -> list[dict]:
    """Every powerset coalgebra on carriers ``{0..n-1}``, ``1 <= n <= max_states``."""
    out = []
    for n in range(1, max_states + 1):
        xs = [str(i) for i in range(n)]
        for choice in product(powerset(xs), repeat=n):
            out.append(dict(zip(xs, choice)))
    return out


def nbisim_powerset_literal(pairs, a: dict, b: dict) -> bool:
    """Neighbourhood bisimulation for powerset coalgebras, straight from the definition.

    Formulas range over the coproduct of ``P(Y)`` for every ``Y ⊆ P(X)``
    (the finitary version); each summand is lifted with the arrow relation
    restricted to its own formula universes.
    """
    xs, ys = sorted(a), sorted(b)
    img = lambda zs: frozenset(y for x, y in pairs if x in zs)
    pre = lambda zs: frozenset(x for x, y in pairs if y in zs)
    fwd = lambda p, q: img(p) <= q
    bwd = lambda p, q: pre(q) <= p
    summands_x = powerset(powerset(xs))
    summands_y = powerset(powerset(ys))
    for u, v in pairs:
        for sx in summands_x:
            for sy in summands_y:
                for phi in powerset(sx):
                    for psi in powerset(sy):
                        in_u = egli_milner(lambda x, z: x in z, a[u], phi)
                        in_v = egli_milner(lambda y, z: y in z, b[v], psi)
                        if egli_milner(fwd, phi, psi) and in_u and not in_v:
                            return False
                        if egli_milner(bwd, phi, psi) and in_v and not in_u:
                            return False
    return True
