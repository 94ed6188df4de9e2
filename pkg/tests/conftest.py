import pytest

import gridwire as gw


def bound(n):
    """ceil(7n/3)."""
    return (7 * n + 2) // 3


def small_corpus(max_n):
    """Every ordered tree with at most max_n vertices."""
    for n in range(1, max_n + 1):
        yield from gw.iter_trees(n)


def image_points(w):
    return list(w.image_points())


@pytest.fixture(scope="session")
def trees_upto_8():
    return list(small_corpus(8))
