import random

from planarcut.oracle import GenSpec, gen_planar, min_cut_maxflow, reachable, shortest_closed_walk
from planarcut.plane_graph import INF, RawGraph, dual, walk_nodes
from planarcut.reduce import (
    Mode,
    bidirect_and_triangulate,
    lift_split_cycle,
    min_cut,
    shortest_cycle,
    shortest_degenerate_cycle,
    split_high_degree,
)
from planarcut.cycle_core import shortest_nondegenerate_cycle
from planarcut.plane_graph import walk_weight


def test_four_node_min_cut(four_node):
    gf, _, ids = four_node
    res = min_cut(gf.raw)
    assert res.weight == 5
    assert res.cut == [(ids["v2"], ids["v3"])]
    s, t = res.witness
    left = [(u, v) for u, v, _ in gf.raw.arcs() if (u, v) not in res.cut]
    assert not reachable(gf.raw.n, left, s)[t]


def test_four_node_shortest_cycle(four_node):
    gf, _, ids = four_node
    res = shortest_cycle(gf.raw)
    assert res.weight == 6 and res.degenerate
    assert sorted(res.nodes[:-1]) == sorted([ids["v2"], ids["v3"]])


def test_four_node_dual_and_primal_cycles(four_node):
    gf, g, ids = four_node
    bd = bidirect_and_triangulate(gf.raw, Mode.MIN_CUT)
    w, cyc = shortest_nondegenerate_cycle(dual(bd.g))
    assert w == 5
    assert [d for d in cyc if bd.original[d]] and all(bd.g.w[d] in (0, 5) for d in cyc)
    w, cyc = shortest_nondegenerate_cycle(g)
    assert w == 16
    names = [gf.raw.name(x) for x in walk_nodes(g, cyc)]
    assert set(names) == {"v2", "v3", "v4"}


def test_modes_fill_missing_arcs(four_node):
    gf, _, ids = four_node
    cut = bidirect_and_triangulate(gf.raw, Mode.MIN_CUT).g
    cyc = bidirect_and_triangulate(gf.raw, Mode.SHORTEST_CYCLE).g
    d = cut.dart_between(ids["v2"], ids["v1"])
    assert cut.w[d] == 0 and cyc.w[d] is INF
    assert all(len(f) == 3 for f in cut.faces)


def test_degenerate_scan(four_node):
    gf, _, _ = four_node
    g = bidirect_and_triangulate(gf.raw, Mode.SHORTEST_CYCLE).g
    w, c = shortest_degenerate_cycle(g)
    assert w == 6


def test_split_degree_and_lift():
    raw = gen_planar(GenSpec(n=40, seed=4, mode="triangulation"))
    g = bidirect_and_triangulate(raw, Mode.SHORTEST_CYCLE).g
    g2, sm = split_high_degree(g)
    assert max(len(r) for r in g2.rot) <= 3
    w1, c1 = shortest_nondegenerate_cycle(g2)
    w0, _ = shortest_nondegenerate_cycle(g)
    assert w1 == w0
    lifted = lift_split_cycle(c1, sm)
    assert walk_weight(g, lifted) == w1


def test_star_split_counts():
    n = 10
    edges = [(0, k, 1, 1) for k in range(1, n)]
    rot = [list(range(n - 1))] + [[k - 1] for k in range(1, n)]
    from planarcut.plane_graph import build_from_rotation

    g = build_from_rotation(n, edges, rot)
    g2, sm = split_high_degree(g)
    assert g2.n == n + 8
    assert max(len(r) for r in g2.rot) <= 3


def test_dag_has_no_cycle():
    raw = RawGraph(3, [(0, 1, 1, None), (1, 2, 1, None), (0, 2, 5, None)], [[0, 2], [1, 0], [2, 1]])
    assert shortest_cycle(raw).weight is INF


def test_mutually_unreachable_cut_is_zero():
    raw = RawGraph(4, [(0, 1, 3, None), (2, 3, 4, 4)], [[0], [0], [1], [1]])
    res = min_cut(raw)
    assert res.weight == 0
    assert res.witness is not None


def test_tiny_graphs():
    assert min_cut(RawGraph(1, [], [[]])).weight is INF
    raw = RawGraph(2, [(0, 1, 3, 5)], [[0], [0]])
    assert min_cut(raw).weight == 3
    assert shortest_cycle(raw).weight == 8


def test_random_against_oracles():
    for seed in range(60):
        rng = random.Random(seed)
        raw = gen_planar(GenSpec(n=rng.randint(2, 30), seed=seed, mode=rng.choice(["triangulation", "sparse", "disk"])))
        assert min_cut(raw).weight == min_cut_maxflow(raw), seed
        assert shortest_cycle(raw).weight == shortest_closed_walk(raw), seed
