import pytest

from plic import (
    from_absent,
    generate_perfectly_nested,
    generate_slightly_imperfect,
    generate_truncated_nested,
    partition,
)
from plic._kernels import warm_up


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # keep JIT compilation out of individual test timings
    warm_up()


@pytest.fixture
def pair3():
    # m=3, two absent receivers forming a nested pair
    return from_absent(3, [{3}, {1, 3}])


@pytest.fixture
def trace6():
    # m=6, three absent receivers; the scripted-realisation fixture
    return from_absent(6, [{1, 2}, {1, 2, 3, 4}, {4, 5}])


@pytest.fixture
def p1():
    # m=5, four absent receivers; 2-chain breakable, rate 4
    return from_absent(5, [{1, 2}, {1, 2, 4}, {1, 3}, {1, 3, 5}])


@pytest.fixture
def p2():
    # m=6, three absent receivers; slightly imperfectly 2-nested, rate 5
    return from_absent(6, [{3}, {1, 2, 3, 4}, {3, 4, 5, 6}])


@pytest.fixture
def uncovered5():
    # union misses message 5 -> rate m-1
    return from_absent(5, [{1, 2, 3}, {3}, {3, 4}])


@pytest.fixture
def nested5():
    # perfectly 2-nested: P0={3}, P1={1,2}, P2={4,5} -> rate m-2
    return from_absent(5, [{1, 2, 3}, {3}, {3, 4, 5}])


@pytest.fixture
def sparse5():
    # no nested pair, full union -> rate m-1
    return from_absent(5, [{1, 2, 3}, {2, 3, 4}, {3, 4, 5}])


@pytest.fixture
def part7():
    # the (1,2,2,2) partition of [1:7] used by the nested-family fixtures
    return partition(7, [1], [[2, 3], [4, 5], [6, 7]])


@pytest.fixture
def nested7(part7):
    # perfectly 3-nested, 7 absent receivers
    return generate_perfectly_nested(part7)


@pytest.fixture
def truncated7(part7):
    # 1-truncated 3-nested, 4 absent receivers
    return generate_truncated_nested(part7, 1)


@pytest.fixture
def imperfect7(part7):
    # slightly imperfect: absent H_empty={1} replaced by the empty set
    return generate_slightly_imperfect(part7, [], [])
