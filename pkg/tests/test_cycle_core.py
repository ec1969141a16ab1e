import random

import pytest

from planarcut.cycle_core import (
    CycleStats,
    c_short_cycle,
    cp_short_cycle,
    incise,
    shortest_nondegenerate_cycle,
    split_regions,
)
from planarcut.ncsp import noncrossing_distances
from planarcut.oracle import GenSpec, enum_simple_nondegenerate_cycles, gen_plane_graph
from planarcut.plane_graph import INF, is_degenerate, walk_nodes, walk_weight
from planarcut.separator import SegmentedCycle
from conftest import darts, same_cycle


def _names(gf, nodes):
    return [gf.raw.name(x) for x in nodes]


def test_pentagon_regions(pentagon):
    gf, g, ids = pentagon
    c = darts(g, ids, "v1 v2 v3 v4 v5 v1")
    inner, outer = split_regions(g, c)
    w, cyc = shortest_nondegenerate_cycle(inner.g)
    assert w == 5
    nodes = [inner.sub.node_old[x] for x in walk_nodes(inner.g, cyc)]
    assert set(_names(gf, nodes)) == {"v1", "v2", "v5"}
    w, cyc = shortest_nondegenerate_cycle(outer.g)
    assert w == 7


def test_pentagon_global_and_c_short(pentagon):
    gf, g, ids = pentagon
    w, cyc = shortest_nondegenerate_cycle(g)
    assert w == 4
    assert same_cycle(_names(gf, walk_nodes(g, cyc)), "v2 v6 v7 v5 v2")
    seg = SegmentedCycle(ids["v1"], darts(g, ids, "v1 v2 v3"), g.dart_between(ids["v3"], ids["v4"]),
                         darts(g, ids, "v1 v5 v4"))
    assert same_cycle(_names(gf, walk_nodes(g, seg.darts)), "v1 v2 v3 v4 v5 v1")
    w, cyc = c_short_cycle(g, seg)
    assert w == 4
    assert same_cycle(_names(gf, walk_nodes(g, cyc)), "v2 v6 v7 v5 v2")


def test_incision_cp_short(incision):
    gf, g, ids = incision
    c = darts(g, ids, "s u1 u2 t v s")
    p = darts(g, ids, "s u1 u2 t")
    w, cyc = cp_short_cycle(g, c, p)
    assert w == 2
    assert walk_weight(g, cyc) == 2 and not is_degenerate(g, cyc)
    # both crossing cycles through u and v weigh 2
    assert walk_weight(g, darts(g, ids, "u1 u2 u v u1")) == 2
    assert walk_weight(g, darts(g, ids, "u1 v u u2 u1")) == 2


def test_incision_incision(incision):
    gf, g, ids = incision
    p = darts(g, ids, "s u1 u2 t")
    inc = incise(g, p)
    h = inc.h
    assert (h.n, h.m) == (8, 15)
    assert len(h.faces) == len(g.faces) + 1
    copy = [h.w[d] for e in range(inc.m0, h.m) for d in (2 * e, 2 * e + 1)]
    assert copy == [INF] * 6
    assert [inc.copy_of[v] for v in inc.vs] == inc.us
    # v's edges to the path moved to the copies
    v = ids["v"]
    moved = {h.head[d] for d in h.rot[v]}
    assert ids["u1"] not in moved and ids["u2"] not in moved
    assert set(inc.vs) <= moved
    assert noncrossing_distances(h, inc.us, inc.vs)[0] == 2


def test_random_against_enumeration():
    for seed in range(120):
        rng = random.Random(seed)
        g = gen_plane_graph(GenSpec(n=rng.randint(3, 12), seed=seed, mode=rng.choice(["triangulation", "sparse"])))
        stats = CycleStats()
        w, cyc = shortest_nondegenerate_cycle(g, stats=stats)
        assert w == enum_simple_nondegenerate_cycles(g)[0], seed
        if cyc is not None:
            assert walk_weight(g, cyc) == w and not is_degenerate(g, cyc)
        assert stats.violations == []


@pytest.mark.parametrize("seed", range(6))
def test_ddg_backend_same_cycle_weight(seed):
    g = gen_plane_graph(GenSpec(n=40, seed=seed, mode="sparse"))
    a, _ = shortest_nondegenerate_cycle(g)
    b, _ = shortest_nondegenerate_cycle(g, backend="ddg", r=6)
    assert a == b


def test_divide_inequalities():
    stats = CycleStats()
    g = gen_plane_graph(GenSpec(n=150, seed=3, mode="triangulation"))
    shortest_nondegenerate_cycle(g, stats=stats)
    assert stats.divides
    for ell, l1, l2 in stats.divides:
        assert 20 * max(l1, l2) <= 19 * ell
        assert l1 + l2 <= ell + 2
    assert stats.violations == []
