import random
from pathlib import Path

import pytest

from planarcut.cli import parse_graph
from planarcut.plane_graph import INF

DATA = Path(__file__).parent / "data"


def load(name):
    """(GraphFile, bidirected PlaneGraph with absent arcs at INF, name -> id)."""
    gf = parse_graph(str(DATA / name))
    g = gf.raw.plane_graph(INF)
    ids = {gf.raw.name(x): x for x in range(gf.raw.n)}
    return gf, g, ids


def darts(g, ids, names):
    names = names.split()
    return [g.dart_between(ids[a], ids[b]) for a, b in zip(names, names[1:])]


def same_cycle(nodes, names):
    """Closed node sequences equal up to rotation."""
    a = list(nodes[:-1])
    b = names.split()[:-1]
    if len(a) != len(b):
        return False
    return any(a[k:] + a[:k] == b for k in range(len(a)))


def outer_terminals(g, l, rng):
    """Up to ``l`` pairs ordered u_1..u_l, v_l..v_1 along the outer walk."""
    nodes = [g.head[d ^ 1] for d in g.outer_walk()]
    k = min(2 * l, len(nodes))
    k -= k % 2
    idx = sorted(rng.sample(range(len(nodes)), k))
    seq = [nodes[i] for i in idx]
    return seq[: k // 2], seq[k // 2 :][::-1]


@pytest.fixture
def four_node():
    return load("four_node.geom")


@pytest.fixture
def pentagon():
    return load("pentagon.geom")


@pytest.fixture
def incision():
    return load("incision.rot")


@pytest.fixture
def rng():
    return random.Random(1234)


REPORT = []


def report(k: int, ok: bool, detail: str) -> None:
    """Record the outcome line of acceptance criterion ``k``."""
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}"
    REPORT.append((k, line))
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(REPORT):
        terminalreporter.write_line(line)
