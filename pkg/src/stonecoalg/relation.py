"""Finite binary relations with explicit carriers, and the arrow liftings."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Iterator, Mapping

import numpy as np

from .errors import CarrierMismatch, InvalidInput, check_size
from .values import bool_matmul, canonical, sort_key, subset_matrix, subsets


class Relation:
    """A relation ``pairs ⊆ dom × cod`` stored as a dense boolean matrix.

    ``dom`` and ``cod`` are canonically ordered tuples; row ``i`` of
    ``matrix`` belongs to ``dom[i]``.
    """

    __slots__ = ("dom", "cod", "matrix", "__dict__")

    def __init__(self, dom: Iterable, cod: Iterable, pairs: Iterable[tuple] = ()):
        self.dom = canonical(dom)
        self.cod = canonical(cod)
        m = np.zeros((len(self.dom), len(self.cod)), dtype=bool)
        di, ci = self.dom_index, self.cod_index
        for x, y in pairs:
            try:
                m[di[x], ci[y]] = True
            except KeyError:
                raise CarrierMismatch(f"pair ({x!r}, {y!r}) outside dom × cod") from None
        m.flags.writeable = False
        self.matrix = m

    @classmethod
    def from_matrix(cls, dom: tuple, cod: tuple, matrix: np.ndarray) -> "Relation":
        """Wrap a matrix whose axes already follow the canonical order of dom/cod."""
        r = cls.__new__(cls)
        r.dom, r.cod = tuple(dom), tuple(cod)
        m = np.array(matrix, dtype=bool)
        if m.shape != (len(r.dom), len(r.cod)):
            raise CarrierMismatch(f"matrix shape {m.shape} does not fit carriers")
        m.flags.writeable = False
        r.matrix = m
        return r

    @classmethod
    def identity(cls, carrier: Iterable) -> "Relation":
        c = canonical(carrier)
        return cls.from_matrix(c, c, np.eye(len(c), dtype=bool))

    @classmethod
    def full(cls, dom: Iterable, cod: Iterable) -> "Relation":
        d, c = canonical(dom), canonical(cod)
        return cls.from_matrix(d, c, np.ones((len(d), len(c)), dtype=bool))

    @classmethod
    def empty(cls, dom: Iterable, cod: Iterable) -> "Relation":
        return cls(dom, cod)

    @classmethod
    def graph(cls, f: Mapping | Callable, dom: Iterable, cod: Iterable | None = None) -> "Relation":
        d = canonical(dom)
        fn = f.__getitem__ if isinstance(f, Mapping) else f
        pairs = [(x, fn(x)) for x in d]
        return cls(d, cod if cod is not None else (y for _, y in pairs), pairs)

    @classmethod
    def where(cls, dom: Iterable, cod: Iterable, pred: Callable) -> "Relation":
        d, c = canonical(dom), canonical(cod)
        m = np.array([[bool(pred(x, y)) for y in c] for x in d], dtype=bool).reshape(len(d), len(c))
        return cls.from_matrix(d, c, m)

    @cached_property
    def dom_index(self) -> dict:
        return {x: i for i, x in enumerate(self.dom)}

    @cached_property
    def cod_index(self) -> dict:
        return {y: i for i, y in enumerate(self.cod)}

    @cached_property
    def pairs(self) -> frozenset:
        return frozenset((self.dom[i], self.cod[j]) for i, j in zip(*np.nonzero(self.matrix)))

    def __contains__(self, pair) -> bool:
        x, y = pair
        i = self.dom_index.get(x)
        j = self.cod_index.get(y)
        return i is not None and j is not None and bool(self.matrix[i, j])

    def holds(self, x, y) -> bool:
        return (x, y) in self

    def __iter__(self) -> Iterator[tuple]:
        for i, j in zip(*np.nonzero(self.matrix)):
            yield self.dom[i], self.cod[j]

    def __len__(self) -> int:
        return int(self.matrix.sum())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Relation):
            return NotImplemented
        return (self.dom == other.dom and self.cod == other.cod
                and np.array_equal(self.matrix, other.matrix))

    def __hash__(self) -> int:
        return hash((self.dom, self.cod, self.matrix.tobytes()))

    def __repr__(self) -> str:
        shown = sorted(self.pairs, key=sort_key)
        return f"Relation({len(self.dom)}x{len(self.cod)}, {shown})"

    def _same_carriers(self, other: "Relation") -> None:
        if self.dom != other.dom or self.cod != other.cod:
            raise CarrierMismatch("relations live on different carriers")

    def __le__(self, other: "Relation") -> bool:
        self._same_carriers(other)
        return not bool((self.matrix & ~other.matrix).any())

    def __or__(self, other: "Relation") -> "Relation":
        self._same_carriers(other)
        return Relation.from_matrix(self.dom, self.cod, self.matrix | other.matrix)

    def __and__(self, other: "Relation") -> "Relation":
        self._same_carriers(other)
        return Relation.from_matrix(self.dom, self.cod, self.matrix & other.matrix)

    def compose(self, other: "Relation") -> "Relation":
        """Forward composition ``self ; other``."""
        if self.cod != other.dom:
            raise CarrierMismatch("cod of the first relation must equal dom of the second")
        return Relation.from_matrix(self.dom, other.cod, bool_matmul(self.matrix, other.matrix))

    def converse(self) -> "Relation":
        return Relation.from_matrix(self.cod, self.dom, self.matrix.T)

    def image(self, subset: Iterable) -> frozenset:
        s = frozenset(subset)
        di = self.dom_index
        if not s <= di.keys():
            raise CarrierMismatch("image argument is not a subset of dom")
        rows = [di[x] for x in s]
        hit = self.matrix[rows].any(axis=0) if rows else np.zeros(len(self.cod), dtype=bool)
        return frozenset(self.cod[j] for j in np.nonzero(hit)[0])

    def restrict(self, dom: Iterable, cod: Iterable) -> "Relation":
        d, c = canonical(dom), canonical(cod)
        ds, cs = set(d), set(c)
        return Relation(d, c, ((x, y) for x, y in self if x in ds and y in cs))


def relation_ops(r: Relation, s: Relation, a: Iterable) -> tuple[Relation, Relation, frozenset]:
    """Composition ``r;s``, converse of ``r`` and the image ``r[a]`` in one call."""
    return r.compose(s), r.converse(), r.image(a)


def membership(carrier: Iterable) -> Relation:
    """Membership ``∈ ⊆ X × P(X)``."""
    x = canonical(carrier)
    px = tuple(subsets(x))
    return Relation.from_matrix(x, px, subset_matrix(x).T)


def inclusion(carrier: Iterable) -> Relation:
    """Subset order ``⊆`` on ``P(X)``."""
    x = canonical(carrier)
    px = tuple(subsets(x))
    pm = subset_matrix(x)
    # A ⊆ B iff A has no element outside B
    return Relation.from_matrix(px, px, ~bool_matmul(pm, ~pm.T))


@dataclass(frozen=True)
class ClopenFamily:
    """Designated clopen subsets of a finite base space."""

    base: tuple
    members: frozenset

    def __post_init__(self):
        b = frozenset(self.base)
        if any(not m <= b for m in self.members):
            raise InvalidInput("clopen family member not contained in base")

    @classmethod
    def discrete(cls, base: Iterable) -> "ClopenFamily":
        b = canonical(base)
        return cls(b, frozenset(subsets(b)))

    def ordered(self) -> tuple:
        return canonical(self.members)

    def is_boolean_algebra(self) -> bool:
        b = frozenset(self.base)
        ms = self.members
        if frozenset() not in ms or b not in ms:
            return False
        return all(b - m in ms for m in ms) and all(m | n in ms and m & n in ms for m in ms for n in ms)


def _family(carrier: tuple, fam: ClopenFamily | None) -> tuple[tuple, np.ndarray]:
    if fam is None:
        check_size("clopens", 2 ** len(carrier))
        return tuple(subsets(carrier)), subset_matrix(carrier)
    if canonical(fam.base) != carrier:
        raise CarrierMismatch("clopen family base differs from relation carrier")
    members = fam.ordered()
    idx = {x: i for i, x in enumerate(carrier)}
    m = np.zeros((len(members), len(carrier)), dtype=bool)
    for k, s in enumerate(members):
        m[k, [idx[x] for x in s]] = True
    return members, m


def forward_lift(r: Relation, dom_family: ClopenFamily | None = None,
                 cod_family: ClopenFamily | None = None) -> Relation:
    """``A →R B`` iff ``R[A] ⊆ B``, over all clopens (all subsets by default)."""
    pa_vals, pa = _family(r.dom, dom_family)
    pb_vals, pb = _family(r.cod, cod_family)
    image = bool_matmul(pa, r.matrix)
    return Relation.from_matrix(pa_vals, pb_vals, ~bool_matmul(image, ~pb.T))


def backward_lift(r: Relation, dom_family: ClopenFamily | None = None,
                  cod_family: ClopenFamily | None = None) -> Relation:
    """``A ←R B`` iff ``R†[B] ⊆ A``."""
    pa_vals, pa = _family(r.dom, dom_family)
    pb_vals, pb = _family(r.cod, cod_family)
    preimage = bool_matmul(pb, r.matrix.T)
    return Relation.from_matrix(pa_vals, pb_vals, ~bool_matmul(~pa, preimage.T))
