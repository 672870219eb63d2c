from pathlib import Path

import pytest

from stonecoalg import FinCoalgebra, Powerset, Relation

import oracles

FIXTURES = Path(__file__).parent / "fixtures"


def pcoalg(structure: dict) -> FinCoalgebra:
    return FinCoalgebra(Powerset(), {x: frozenset(v) for x, v in structure.items()})


def relations(a, b):
    for pairs in oracles.all_relations(a.carrier, b.carrier):
        yield Relation(a.carrier, b.carrier, pairs)


@pytest.fixture(scope="session")
def corpus2():
    """All powerset coalgebras on one or two states, as dicts and as coalgebras."""
    raw = oracles.powerset_corpus(2)
    return [(d, pcoalg(d)) for d in raw]


@pytest.fixture
def fixtures_dir():
    return FIXTURES
