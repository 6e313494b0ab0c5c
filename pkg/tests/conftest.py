import sys
from pathlib import Path as FsPath

import pytest

sys.path.insert(0, str(FsPath(__file__).parent))

from qalg.quiver import Arrow, Quiver, Relation, compile_presentation


def monomial_relation(quiver, names):
    path = quiver.path_from_names(list(names))
    assert path is not None, names
    return Relation(((1, path),))


def example1_presentation(m=10):
    """Quiver with a loop and two whiskers at vertex 1 feeding a chain 1..m."""
    arrows = [Arrow("a1", 1, 1), Arrow("a2", 1, 2)]
    arrows += [Arrow(f"a{i}", i - 1, i) for i in range(3, m + 1)]
    arrows += [Arrow(f"a{m + 1}", 1, m + 1), Arrow(f"a{m + 2}", 1, m + 2)]
    quiver = Quiver(m + 2, arrows)
    words = [
        ("a1", "a1"),
        ("a1", f"a{m + 1}"),
        ("a1", f"a{m + 2}"),
        ("a1", "a2"),
        tuple(f"a{i}" for i in range(2, m + 1)),
    ]
    relations = [monomial_relation(quiver, w) for w in words]
    return quiver, relations, words


def example2_presentation(n=6):
    """Two chains out of vertex 1, the second with vanishing compositions."""
    arrows = [Arrow(f"a{i}", i, i + 1) for i in range(1, n)]
    arrows += [Arrow(f"a{n + 1}", 1, n + 1)]
    arrows += [Arrow(f"a{i}", i - 1, i) for i in range(n + 2, 2 * n)]
    arrows += [Arrow(f"a{2 * n}", 1, 2 * n), Arrow(f"a{2 * n + 1}", 1, 2 * n + 1)]
    quiver = Quiver(2 * n + 1, arrows)
    words = [(f"a{i}", f"a{i + 1}") for i in range(n + 1, 2 * n)]
    words = [w for w in words if quiver.path_from_names(list(w)) is not None]
    relations = [monomial_relation(quiver, w) for w in words]
    return quiver, relations, words


def a2_presentation():
    quiver = Quiver(2, [Arrow("a", 1, 2)])
    return quiver, [], []


@pytest.fixture(scope="session")
def ex1():
    quiver, relations, words = example1_presentation()
    return compile_presentation(quiver, relations), words


@pytest.fixture(scope="session")
def ex1_algebra(ex1):
    return ex1[0]


@pytest.fixture(scope="session")
def ex2():
    quiver, relations, words = example2_presentation()
    return compile_presentation(quiver, relations), words


@pytest.fixture(scope="session")
def ex2_algebra(ex2):
    return ex2[0]


@pytest.fixture(scope="session")
def a2_algebra():
    quiver, relations, _ = a2_presentation()
    return compile_presentation(quiver, relations)
