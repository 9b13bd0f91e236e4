from functools import lru_cache
from pathlib import Path

import pytest

from hodgecyclic.cli import load_spec
from hodgecyclic.koszul_models import LieAlgebraSpec

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


@lru_cache(maxsize=None)
def load(name):
    """Fixture specs are loaded once so cached engines are shared."""
    return load_spec(str(FIXTURES / f"{name}.spec"))


@pytest.fixture(scope="session")
def necklace():
    return load("necklace")


@pytest.fixture(scope="session")
def ab1():
    return load("abelian1")


@pytest.fixture(scope="session")
def ab2():
    return load("abelian2")


@pytest.fixture(scope="session")
def sl2():
    return load("sl2")


@pytest.fixture(scope="session")
def s2():
    return load("s2")


def sl2_algebra():
    return LieAlgebraSpec(["e", "f", "h"], {"e": 0, "f": 0, "h": 0},
                          {("e", "f"): {"h": 1}, ("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}})


def abelian(n):
    labels = ["x", "y", "z", "t"][:n]
    return LieAlgebraSpec(labels, {x: 0 for x in labels})
