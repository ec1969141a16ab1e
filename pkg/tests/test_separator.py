import random

import pytest

from planarcut.oracle import GenSpec, bellman_ford, gen_plane_graph
from planarcut.plane_graph import INF, walk_nodes, walk_weight
from planarcut.separator import (
    NoBalancedEdge,
    assign_face_weights,
    balanced_fundamental_cycle,
    dijkstra,
    fundamental_sides,
    segmented_cycle_from_edge,
    shortest_path,
    sssp,
    triangulate,
)
from conftest import darts


def test_dijkstra_both_directions():
    for seed in range(15):
        g = gen_plane_graph(GenSpec(n=50, seed=seed, mode="sparse"))
        d, _ = dijkstra(g, 3)
        assert d == bellman_ford(g, 3)
        dr, _ = dijkstra(g, 3, reverse=True)
        assert dr == bellman_ford(g.reversed(), 3)


def test_shortest_path_weight():
    g = gen_plane_graph(GenSpec(n=60, seed=2))
    d, p = shortest_path(g, 0, 17)
    assert d == bellman_ford(g, 0)[17]
    if p is not None:
        assert walk_weight(g, p) == d
        assert walk_nodes(g, p)[0] == 0 and walk_nodes(g, p)[-1] == 17


def test_triangulate_keeps_edges():
    for seed in range(20):
        g = gen_plane_graph(GenSpec(n=40, seed=seed, mode="sparse"))
        t = triangulate(g)
        assert all(len(f) == 3 for f in t.tri.faces)
        assert t.tri.head[: len(g.head)] == g.head
        assert all(t.tri.w[d] is INF for d in range(len(g.head), len(t.tri.head)))
        # one weighted triangle per source face
        assert sum(t.weighted) == len(g.faces)


def test_balanced_cycle_splits_three_quarters():
    for seed in range(25):
        rng = random.Random(seed)
        g = gen_plane_graph(GenSpec(n=rng.randint(6, 80), seed=seed, mode=rng.choice(["sparse", "disk"])))
        if g.components()[0] != 1:
            continue
        t = triangulate(g)
        tri = t.tri
        unit = tri.with_weights([1] * len(tri.head))
        tree = sssp(unit, 0)
        tree_edge = [False] * tri.m
        for p in tree.parent:
            if p >= 0:
                tree_edge[p >> 1] = True
        fw = assign_face_weights(t)
        if sum(fw) < 5:
            continue
        e = balanced_fundamental_cycle(tri, tree_edge, fw)
        seg = segmented_cycle_from_edge(unit, tree, 2 * e)
        left, right = fundamental_sides(tri, seg.darts)
        total = sum(fw)
        for side in (left, right):
            assert 4 * sum(w for w, s in zip(fw, side) if s) <= 3 * total


def test_no_balanced_edge():
    g = gen_plane_graph(GenSpec(n=8, seed=1))
    t = triangulate(g)
    tri = t.tri
    tree = sssp(tri.with_weights([1] * len(tri.head)), 0)
    tree_edge = [False] * tri.m
    for p in tree.parent:
        if p >= 0:
            tree_edge[p >> 1] = True
    fw = [0] * len(tri.faces)
    fw[0] = 1
    with pytest.raises(NoBalancedEdge):
        balanced_fundamental_cycle(tri, tree_edge, fw)


def test_pentagon_segments_are_shortest(pentagon):
    _, g, ids = pentagon
    d, _ = dijkstra(g, ids["v1"])
    assert walk_weight(g, darts(g, ids, "v1 v2 v3")) == d[ids["v3"]]
    assert walk_weight(g, darts(g, ids, "v1 v5 v4")) == d[ids["v4"]]
