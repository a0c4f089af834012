import itertools

import pytest

from centralset import GroundSemigroup


def _is_associative(table):
    n = len(table)
    return all(table[table[a][b]][c] == table[a][table[b][c]] for a in range(n) for b in range(n) for c in range(n))


def all_two_element_tables():
    out = []
    for vals in itertools.product(range(2), repeat=4):
        table = [list(vals[0:2]), list(vals[2:4])]
        if _is_associative(table):
            out.append(table)
    return out


def cyclic(n):
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def left_zero(n):
    return [[a] * n for a in range(n)]


def right_zero(n):
    return [list(range(n)) for _ in range(n)]


def null(n):
    return [[0] * n for _ in range(n)]


def max_chain(n):
    return [[max(a, b) for b in range(n)] for a in range(n)]


def left_zero_times_z2():
    # pairs (l, g) with l in a 2-element left-zero band and g in Z2, indexed 2*l + g
    return [[2 * (a // 2) + ((a % 2 + b % 2) % 2) for b in range(4)] for a in range(4)]


def z2_with_zero():
    # {0, 1, 2}: 0 absorbing, {1, 2} a copy of Z2 with identity 1
    z2 = {(1, 1): 1, (1, 2): 2, (2, 1): 2, (2, 2): 1}
    return [[0 if 0 in (a, b) else z2[(a, b)] for b in range(3)] for a in range(3)]


SELECTED = {
    "Z3": cyclic(3),
    "Z4": cyclic(4),
    "left-zero-3": left_zero(3),
    "right-zero-3": right_zero(3),
    "right-zero-4": right_zero(4),
    "null-3": null(3),
    "max-chain-3": max_chain(3),
    "min-chain-4": [[min(a, b) for b in range(4)] for a in range(4)],
    "left-zero-x-Z2": left_zero_times_z2(),
    "Z2-with-zero": z2_with_zero(),
}


def fixture_pack():
    pack = {f"two-{i}": t for i, t in enumerate(all_two_element_tables())}
    pack.update(SELECTED)
    for name, t in pack.items():
        assert _is_associative(t), name
    return {name: GroundSemigroup.finite(t) for name, t in pack.items()}


@pytest.fixture(scope="session")
def pack():
    return fixture_pack()


@pytest.fixture
def nat():
    return GroundSemigroup.nat()


@pytest.fixture
def free2():
    return GroundSemigroup.free(2)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
