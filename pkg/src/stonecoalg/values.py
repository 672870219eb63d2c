"""Concrete functor values and their canonical ordering.

Values are plain immutable Python objects: carrier elements for the identity
functor, labels for constants, ``frozenset`` for powerset, ``tuple`` for
products and :class:`Inj` for coproducts. Composite functors nest these.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Any, Hashable, Iterable

import numpy as np

LEFT = "inl"
RIGHT = "inr"


@dataclass(frozen=True)
class Inj:
    """A coproduct injection tagged ``inl`` or ``inr``."""

    side: str
    value: Any

    def __post_init__(self):
        if self.side not in (LEFT, RIGHT):
            raise ValueError(f"bad injection side {self.side!r}")

    def __repr__(self):
        return f"{self.side}({self.value!r})"


def sort_key(v: Hashable):
    """Total structural order on values; sets sort by size, then elementwise."""
    if isinstance(v, str):
        return (0, v)
    if isinstance(v, bool):
        return (1, int(v))
    if isinstance(v, int):
        return (1, v)
    if isinstance(v, frozenset):
        return (2, len(v), tuple(sorted(sort_key(x) for x in v)))
    if isinstance(v, tuple):
        return (3, len(v), tuple(sort_key(x) for x in v))
    if isinstance(v, Inj):
        return (4, v.side, sort_key(v.value))
    raise TypeError(f"unsupported value type {type(v).__name__}")


def canonical(xs: Iterable[Hashable]) -> tuple:
    """Deduplicate and order a collection of values."""
    return tuple(sorted(set(xs), key=sort_key))


def subsets(carrier: tuple) -> list[frozenset]:
    """All subsets of an ordered carrier, in canonical order."""
    out = []
    for r in range(len(carrier) + 1):
        out.extend(frozenset(c) for c in combinations(carrier, r))
    return out


def subset_matrix(carrier: tuple) -> np.ndarray:
    """Indicator matrix whose rows are ``subsets(carrier)`` in the same order."""
    n = len(carrier)
    rows = []
    for r in range(n + 1):
        for c in combinations(range(n), r):
            row = np.zeros(n, dtype=bool)
            row[list(c)] = True
            rows.append(row)
    return np.array(rows, dtype=bool).reshape(2 ** n, n)


def bool_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Boolean matrix product (OR of ANDs)."""
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=bool)
    return (a.astype(np.float32) @ b.astype(np.float32)) > 0.5
