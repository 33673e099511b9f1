import random

import pytest
from hypothesis import HealthCheck, settings

from hornseq.syntax import Alphabet, Atom, Program, Rule, all_programs

settings.register_profile(
    "hornseq",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("hornseq")


@pytest.fixture(scope="session")
def ab():
    return Alphabet(["a", "b"])


@pytest.fixture(scope="session")
def abc():
    return Alphabet(["a", "b", "c"])


@pytest.fixture(scope="session")
def programs_ab(ab):
    """All 256 programs over two atoms, canonical order."""
    return tuple(all_programs(ab))


def random_program(rng: random.Random, atoms, max_rules: int) -> Program:
    rules = []
    for _ in range(rng.randint(0, max_rules)):
        head = rng.choice(atoms)
        body = frozenset(x for x in atoms if rng.random() < 0.4)
        rules.append(Rule(head, body))
    return Program(rules)


def random_interpretation(rng: random.Random, atoms) -> frozenset:
    return frozenset(x for x in atoms if rng.random() < 0.5)


@pytest.fixture
def rng():
    return random.Random(20240810)


ATOMS4 = tuple(Atom(n) for n in ("a", "b", "c", "d"))
