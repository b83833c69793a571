import pytest

from semimod import FinModule, Flavor


def lattice_from_joins(names, joins, zero_name="0"):
    """Small helper: build a flavor B module from a join table given by names."""
    idx = {nm: i for i, nm in enumerate(names)}
    n = len(names)
    flat = [0] * (n * n)
    for (a, b), c in joins.items():
        flat[idx[a] * n + idx[b]] = idx[c]
        flat[idx[b] * n + idx[a]] = idx[c]
    return FinModule(Flavor.B, tuple(names), idx[zero_name], tuple(flat))


def diamond_m3():
    """Bottom, three atoms, top; any two distinct atoms join to the top."""
    names = ["0", "a", "b", "c", "1"]
    joins = {}
    for x in names:
        joins[(x, x)] = x
        joins[("0", x)] = x
        joins[("1", x)] = "1"
    for p, q in (("a", "b"), ("a", "c"), ("b", "c")):
        joins[(p, q)] = "1"
    return lattice_from_joins(names, joins)


def pentagon_n5():
    """0 < a < c < 1 with b incomparable; a|b = c|b = 1."""
    names = ["0", "a", "b", "c", "1"]
    joins = {}
    for x in names:
        joins[(x, x)] = x
        joins[("0", x)] = x
        joins[("1", x)] = "1"
    joins[("a", "c")] = "c"
    joins[("a", "b")] = "1"
    joins[("b", "c")] = "1"
    return lattice_from_joins(names, joins)


def chain_module(k):
    """The k-element chain 0 < c1 < ... as a flavor B module."""
    names = ["0"] + [f"c{i}" for i in range(1, k)]
    n = len(names)
    flat = [max(a, b) for a in range(n) for b in range(n)]
    return FinModule(Flavor.B, tuple(names), 0, tuple(flat))


@pytest.fixture
def m3():
    return diamond_m3()


@pytest.fixture
def n5():
    return pentagon_n5()
