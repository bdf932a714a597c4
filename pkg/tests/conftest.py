import pytest

from koszul_tower.linalg import BaseRing
from koszul_tower.polyring import PolyRing, RingContext

ZZ = BaseRing.integers()
QQ = BaseRing.rationals()
F2 = BaseRing.prime_field(2)
F5 = BaseRing.prime_field(5)


def make_ctx(seq, names=("x", "y"), weights=None, base=ZZ):
    ring = PolyRing(base, list(names), weights)
    gens = dict(zip(names, ring.gens()))
    return RingContext(ring, [eval(s, {}, dict(gens)) for s in seq])


@pytest.fixture
def zxy():
    return RingContext.variables(2)


@pytest.fixture
def zx2y3():
    return make_ctx(["x**2", "y**3"])


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(mod.line(number))
