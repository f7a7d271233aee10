import json
from pathlib import Path

import pytest

from coxwo.coxsys import load_system

SYSTEMS_DIR = Path(__file__).resolve().parent.parent / "systems"


def load_named(name):
    with open(SYSTEMS_DIR / f"{name}.json") as fh:
        return load_system(json.load(fh))


@pytest.fixture(scope="session")
def a2():
    return load_named("a2")


@pytest.fixture(scope="session")
def dihedral():
    return load_named("dihedral_inf")


@pytest.fixture(scope="session")
def a2t():
    return load_named("a2_tilde")


@pytest.fixture(scope="session")
def c2t():
    return load_named("c2_tilde")


@pytest.fixture(scope="session")
def uni3():
    return load_named("universal3")


@pytest.fixture(scope="session")
def fig6():
    return load_named("fig6")


@pytest.fixture(scope="session")
def a3t():
    return load_named("a3_tilde")


@pytest.fixture(scope="session")
def uni4():
    return load_named("universal4")


@pytest.fixture(scope="session")
def rank4_embedded():
    return load_named("rank4_embedded")


@pytest.fixture(scope="session")
def path5():
    return load_named("path5_two_inf")
