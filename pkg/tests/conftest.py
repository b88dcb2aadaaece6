import random
import sys

import pytest
from hypothesis import strategies as st

from arithtop.abelian import PGroup, Hom


def random_group(rng, p, max_len, max_exp=3):
    exps = []
    total = rng.randint(0, max_len)
    while total > 0:
        k = rng.randint(1, min(total, max_exp))
        exps.append(k)
        total -= k
    return PGroup.sorted(p, exps)


def random_hom(rng, G, H):
    rows = []
    for i in range(H.rank):
        row = []
        for j in range(G.rank):
            need = H.p ** max(0, H.exponents[i] - G.exponents[j])
            row.append(need * rng.randrange(H.orders[i]))
        rows.append(row)
    return Hom(G, H, rows)


@st.composite
def groups(draw, primes=(2, 3, 5), max_len=4):
    p = draw(st.sampled_from(primes))
    exps = draw(st.lists(st.integers(1, 3), max_size=3))
    exps = sorted(exps, reverse=True)
    while sum(exps) > max_len:
        exps.pop(0)
    return PGroup(p, exps)


@st.composite
def homs(draw, max_len=4):
    G = draw(groups(max_len=max_len))
    exps = sorted(draw(st.lists(st.integers(1, 3), max_size=3)), reverse=True)
    while sum(exps) > max_len:
        exps.pop(0)
    H = PGroup(G.p, exps)
    seed = draw(st.integers(0, 2 ** 32))
    return random_hom(random.Random(seed), G, H)


@pytest.fixture
def rng():
    return random.Random(20240517)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])
